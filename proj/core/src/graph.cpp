#include "rake/graph.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace rake {

CallEvents reconstruct_calls(std::span<const OperationRecord> records) {
    CallEvents out;
    if (records.empty()) return out;

    std::int64_t min_ess = std::numeric_limits<std::int64_t>::max();
    for (const auto& r : records) min_ess = std::min(min_ess, r.ess);

    // most recent method seen at each stack depth
    std::map<std::int64_t, const std::string*> last_at_depth;
    for (const auto& r : records) {
        out.methods.insert(r.operation_signature);
        if (r.ess == min_ess) {
            out.entry_points.insert(r.operation_signature);
        } else {
            auto it = last_at_depth.find(r.ess - 1);
            if (it == last_at_depth.end()) {
                throw BrokenStack(r.operation_signature, r.ess);
            }
            ++out.edges[{*it->second, r.operation_signature}];
        }
        last_at_depth[r.ess] = &r.operation_signature;
    }
    return out;
}

Odg build_odg(const TraceLog& log, const std::string& capability) {
    Odg odg;
    odg.capability = capability;
    bool found = false;
    for (const auto& block : log.blocks) {
        std::string block_cap;
        try {
            block_cap = extract_capability(block.header.test_case_id).first;
        } catch (const BadTestCaseId&) {
            continue;
        }
        if (block_cap != capability) continue;
        found = true;
        for (const auto& part : block.trace_partitions()) {
            CallEvents ev = reconstruct_calls(part);
            odg.methods.insert(ev.methods.begin(), ev.methods.end());
            odg.entry_points.insert(ev.entry_points.begin(), ev.entry_points.end());
            for (const auto& [edge, count] : ev.edges) odg.edges[edge] += count;
        }
    }
    if (!found) throw NoTracesForCapability(capability);
    return odg;
}

int CallGraph::index_of(const std::string& method) const {
    auto it = std::lower_bound(methods.begin(), methods.end(), method);
    if (it == methods.end() || *it != method) return -1;
    return static_cast<int>(it - methods.begin());
}

std::int64_t CallGraph::total_calls() const {
    std::int64_t total = 0;
    for (const auto& row : inv) {
        for (std::int64_t c : row) total += c;
    }
    return total;
}

std::int64_t CallGraph::unique_edge_count() const {
    std::int64_t count = 0;
    for (const auto& row : inv) {
        for (std::int64_t c : row) count += c > 0 ? 1 : 0;
    }
    return count;
}

CallGraph merge_odgs(std::span<const Odg> odgs) {
    if (odgs.empty()) {
        throw InputError("no operation dependency graphs to merge");
    }

    std::set<std::string> method_set;
    for (const auto& odg : odgs) {
        method_set.insert(odg.methods.begin(), odg.methods.end());
        for (const auto& [edge, count] : odg.edges) {
            method_set.insert(edge.first);
            method_set.insert(edge.second);
        }
    }

    CallGraph g;
    g.methods.assign(method_set.begin(), method_set.end());  // set iteration is sorted
    const int n = g.method_count();
    g.inv.assign(n, std::vector<std::int64_t>(n, 0));

    for (const auto& odg : odgs) {
        for (const auto& [edge, count] : odg.edges) {
            g.inv[g.index_of(edge.first)][g.index_of(edge.second)] += count;
        }
        if (odg.capability.empty()) continue;
        g.caps.capabilities.insert(odg.capability);
        for (const auto& m : odg.methods) {
            g.caps.method_caps[m].insert(odg.capability);
        }
    }
    return g;
}

double overlap_ratio(const CallGraph& g) {
    if (g.methods.empty()) return 0.0;
    int shared = 0;
    for (const auto& [method, caps] : g.caps.method_caps) {
        if (caps.size() >= 2) ++shared;
    }
    return static_cast<double>(shared) / static_cast<double>(g.method_count());
}

std::string to_dot(const CallGraph& g) {
    std::ostringstream os;
    os << "digraph dependency_matrix {\n";
    for (int i = 0; i < g.method_count(); ++i) {
        os << "  n" << i << " [label=\"" << g.methods[i] << "\"];\n";
    }
    for (int i = 0; i < g.method_count(); ++i) {
        for (int j = 0; j < g.method_count(); ++j) {
            if (g.inv[i][j] > 0) {
                os << "  n" << i << " -> n" << j << " [label=\"" << g.inv[i][j] << "\"];\n";
            }
        }
    }
    os << "}\n";
    return os.str();
}

}  // namespace rake
