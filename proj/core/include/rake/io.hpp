#pragma once

#include <optional>
#include <string>

#include "rake/agent.hpp"
#include "rake/metrics.hpp"

namespace rake {

/// Read a whole file; throws InputError naming the path on failure.
std::string read_file(const std::string& path);

/// Write via a temp file in the same directory plus rename, so interrupted
/// runs never leave truncated artifacts.
void atomic_write_file(const std::string& path, const std::string& content);

// Graph interchange format: the contract between `analyze` and `decompose`.
//   { "methods": [...],                     // sorted lexicographically
//     "edges": [[caller, callee, count]],   // indices into methods
//     "capabilities": {"Cap": ["method"]} }
// Loading re-canonicalizes the method ordering when needed.
std::string graph_to_json(const CallGraph& g);
CallGraph graph_from_json(const std::string& text);
void save_graph(const CallGraph& g, const std::string& path);
CallGraph load_graph(const std::string& path);

/// Majority capability of a service (lexicographic tie-break), or nullopt
/// when none of its methods carries a label. Annotation only; metrics never
/// use it.
std::optional<std::string> majority_capability(const CallGraph& g,
                                               std::span<const int> service_methods);

// Decomposition files:
//   { "services": [ {"capability": "Order"|null, "methods": [...]} ] }
std::string decomposition_to_json(const CallGraph& g, const Decomposition& d);
Decomposition decomposition_from_json(const CallGraph& g, const std::string& text);
void save_decomposition(const CallGraph& g, const Decomposition& d, const std::string& path);
Decomposition load_decomposition(const CallGraph& g, const std::string& path);

std::string metrics_to_json(const MetricsReport& report);

/// One decomposition per row, shaped for cross-run comparison tables.
std::string metrics_table_header();
std::string metrics_table_row(const std::string& label, const MetricsReport& report);

/// Tab-separated per-episode log. Wall-clock time stays out of the file so
/// identically-seeded runs serialize byte-identically.
std::string training_log_to_tsv(std::span<const EpisodeLogEntry> log);

// Versioned checkpoint: policy/value parameters, optimizer state and the
// configs the run used.
void save_checkpoint(const std::string& path, const PolicyValueNet& net,
                     const AdamOptimizer& optimizer, const EnvConfig& env_cfg,
                     const TrainConfig& train_cfg);

struct Checkpoint {
    PolicyValueNet net;
    AdamOptimizer optimizer;
    EnvConfig env_cfg;
    TrainConfig train_cfg;
};

Checkpoint load_checkpoint(const std::string& path);

}  // namespace rake
