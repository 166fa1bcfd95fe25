#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rake/trace.hpp"

namespace rake {

/// Caller->callee events reconstructed from one trace.
struct CallEvents {
    std::set<std::string> methods;
    std::map<std::pair<std::string, std::string>, std::int64_t> edges;  // (caller, callee) -> count
    std::set<std::string> entry_points;
};

/// Rebuild caller/callee relations from eoi/ess ordering. The caller of a
/// record at stack depth s is the most recent preceding record at depth s-1;
/// records at the minimal depth of the trace are entry points and get no
/// incoming edge. Records must be sorted by eoi ascending.
/// Throws BrokenStack when a record above the minimal depth has no caller.
CallEvents reconstruct_calls(std::span<const OperationRecord> records);

/// Operation Dependency Graph for one business capability. An empty
/// capability name marks a trace group without a capability label; merge
/// keeps its structure but contributes nothing to the capability map.
struct Odg {
    std::string capability;
    std::set<std::string> methods;
    std::map<std::pair<std::string, std::string>, std::int64_t> edges;
    std::set<std::string> entry_points;
};

/// Union of reconstruct_calls over every block whose header names the given
/// capability, call counts summed across blocks. Blocks holding several
/// trace ids are reconstructed per trace. Throws NoTracesForCapability.
Odg build_odg(const TraceLog& log, const std::string& capability);

/// System-wide dependency matrix: N methods in lexicographic order and the
/// runtime call counts between them.
struct CallGraph {
    std::vector<std::string> methods;            // sorted, defines all index spaces
    std::vector<std::vector<std::int64_t>> inv;  // inv[k][l] = calls from k to l
    CapabilityMap caps;

    int method_count() const { return static_cast<int>(methods.size()); }
    int index_of(const std::string& method) const;  // -1 when absent
    std::int64_t total_calls() const;
    std::int64_t unique_edge_count() const;  // |{(k,l) : inv[k][l] > 0}|
};

/// Merge per-capability ODGs into one graph: node set is the union with a
/// deterministic lexicographic ordering, inv entries are element-wise sums,
/// and each method's capability set collects every labeled ODG it occurs in.
CallGraph merge_odgs(std::span<const Odg> odgs);

/// Fraction of methods shared across two or more business capabilities.
double overlap_ratio(const CallGraph& g);

/// Plain Graphviz rendering of the dependency matrix.
std::string to_dot(const CallGraph& g);

}  // namespace rake
