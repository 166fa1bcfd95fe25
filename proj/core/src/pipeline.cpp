#include "rake/pipeline.hpp"

#include <algorithm>
#include <sstream>

#include "rake/io.hpp"

namespace rake {

AnalyzeResult build_graph(
    const TraceLog& log,
    const std::optional<std::map<std::string, std::set<std::string>>>& capability_overrides) {
    AnalyzeResult result;

    std::set<std::string> capabilities;
    int unlabeled_blocks = 0;
    for (const auto& block : log.blocks) {
        try {
            capabilities.insert(extract_capability(block.header.test_case_id).first);
        } catch (const BadTestCaseId&) {
            ++unlabeled_blocks;
        }
        if (block.has_multiple_traces()) {
            result.warnings.push_back("block '" + block.header.test_case_id +
                                      "' interleaves several trace ids; partitioned by trace id");
        }
    }

    std::vector<Odg> odgs;
    for (const auto& cap : capabilities) {
        odgs.push_back(build_odg(log, cap));
    }

    if (unlabeled_blocks > 0) {
        if (capability_overrides) {
            // keep the structure; capability labels come from the override map
            Odg unlabeled;
            for (const auto& block : log.blocks) {
                bool labeled = true;
                try {
                    extract_capability(block.header.test_case_id);
                } catch (const BadTestCaseId&) {
                    labeled = false;
                }
                if (labeled) continue;
                for (const auto& part : block.trace_partitions()) {
                    CallEvents ev = reconstruct_calls(part);
                    unlabeled.methods.insert(ev.methods.begin(), ev.methods.end());
                    unlabeled.entry_points.insert(ev.entry_points.begin(), ev.entry_points.end());
                    for (const auto& [edge, count] : ev.edges) unlabeled.edges[edge] += count;
                }
            }
            odgs.push_back(std::move(unlabeled));
            result.warnings.push_back(std::to_string(unlabeled_blocks) +
                                      " block(s) without a parsable test-case id; labeled from "
                                      "the capability map");
        } else {
            result.warnings.push_back(std::to_string(unlabeled_blocks) +
                                      " block(s) without a parsable test-case id skipped (no "
                                      "capability map given)");
        }
    }

    if (odgs.empty()) {
        throw InputError("no capability-labeled trace blocks in input");
    }
    result.graph = merge_odgs(odgs);

    if (capability_overrides) {
        for (const auto& [method, caps] : *capability_overrides) {
            if (result.graph.index_of(method) < 0) {
                result.warnings.push_back("capability map entry for unknown method '" + method +
                                          "' ignored");
                continue;
            }
            result.graph.caps.method_caps[method] = caps;
            result.graph.caps.capabilities.insert(caps.begin(), caps.end());
        }
    }

    int unlabeled_methods = 0;
    for (const auto& m : result.graph.methods) {
        if (!result.graph.caps.method_caps.count(m)) ++unlabeled_methods;
    }
    if (unlabeled_methods > 0) {
        result.warnings.push_back(std::to_string(unlabeled_methods) +
                                  " method(s) carry no capability label");
    }
    return result;
}

AnalyzeResult analyze_log_files(const std::vector<std::string>& log_paths,
                                const std::optional<std::string>& capability_map_path) {
    if (log_paths.empty()) throw InputError("at least one trace log required");

    TraceLog merged;
    for (const auto& path : log_paths) {
        const std::string text = read_file(path);
        try {
            TraceLog log = parse_log_text(text);
            for (auto& block : log.blocks) merged.blocks.push_back(std::move(block));
        } catch (const InputError& e) {
            throw InputError(path + ": " + e.what());
        }
    }

    std::optional<std::map<std::string, std::set<std::string>>> overrides;
    if (capability_map_path) {
        try {
            overrides = load_capability_map(*capability_map_path);
        } catch (const InputError& e) {
            throw InputError(*capability_map_path + ": " + e.what());
        }
    }
    return build_graph(merged, overrides);
}

}  // namespace rake
