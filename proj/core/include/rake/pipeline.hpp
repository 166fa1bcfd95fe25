#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rake/graph.hpp"

namespace rake {

struct AnalyzeResult {
    CallGraph graph;
    std::vector<std::string> warnings;
};

/// Build the system-wide dependency matrix from a parsed log: one ODG per
/// capability named by the trace headers, merged, then per-method overrides
/// from an explicit capability map applied on top.
///
/// Blocks whose test-case id does not follow the naming convention are kept
/// (structure only) when an override map is present, otherwise skipped; both
/// cases produce a warning rather than an error.
AnalyzeResult build_graph(
    const TraceLog& log,
    const std::optional<std::map<std::string, std::set<std::string>>>& capability_overrides);

/// Parse one or more log files (errors gain file:line context) and build the
/// merged graph. capability_map_path optionally names an override file.
AnalyzeResult analyze_log_files(const std::vector<std::string>& log_paths,
                                const std::optional<std::string>& capability_map_path);

}  // namespace rake
