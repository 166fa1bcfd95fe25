// Command-line pipeline: analyze trace logs into a dependency graph, run the
// decomposition engine, evaluate decompositions, and run the oracles.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rake/agent.hpp"
#include "rake/io.hpp"
#include "rake/oracle.hpp"
#include "rake/pipeline.hpp"

namespace {

namespace fs = std::filesystem;

enum ExitCode { kOk = 0, kInternalError = 1, kBadInput = 2, kBadConfig = 3 };

int log_level() {
    static const int level = [] {
        const char* env = std::getenv("RAKE_LOG_LEVEL");
        if (env == nullptr) return 2;
        const std::string v = env;
        if (v == "error") return 0;
        if (v == "warn") return 1;
        if (v == "info") return 2;
        if (v == "debug") return 3;
        return 2;
    }();
    return level;
}

void log_warnings(const std::vector<std::string>& warnings) {
    if (log_level() < 1) return;
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

void log_debug(const std::string& msg) {
    if (log_level() >= 3) std::cerr << "debug: " << msg << "\n";
}

struct AnalyzeOptions {
    std::vector<std::string> inputs;
    std::optional<std::string> capability_map;
    std::string output = "graph.json";
    std::optional<std::string> dot;
};

void cmd_analyze(const AnalyzeOptions& opt) {
    rake::AnalyzeResult result = rake::analyze_log_files(
        opt.inputs, opt.capability_map);
    log_warnings(result.warnings);
    rake::save_graph(result.graph, opt.output);
    if (opt.dot) rake::atomic_write_file(*opt.dot, rake::to_dot(result.graph));

    std::printf("methods %d\n", result.graph.method_count());
    std::printf("edges %lld\n", static_cast<long long>(result.graph.unique_edge_count()));
    std::printf("capabilities %zu\n", result.graph.caps.capability_count());
    std::printf("overlap %.6f\n", rake::overlap_ratio(result.graph));
    std::printf("wrote %s\n", opt.output.c_str());
}

struct DecomposeOptions {
    std::string input;
    std::string objective = "mq";
    std::optional<double> weight;
    int episodes = 1500;
    int p_max = 3;
    std::uint64_t seed = 0;
    int early_stop = 0;
    std::string output = ".";
};

rake::Objective resolve_objective(const std::string& spec, const std::optional<double>& weight) {
    if (!weight) {
        if (spec == "weighted") {
            throw rake::ConfigError("objective 'weighted' needs --weight or weighted:<w>");
        }
        return rake::parse_objective(spec);
    }
    if (spec != "weighted") {
        throw rake::ConfigError("--weight only applies to --objective weighted");
    }
    char buf[48];
    std::snprintf(buf, sizeof buf, "weighted:%.17g", *weight);
    return rake::parse_objective(buf);
}

void cmd_decompose(const DecomposeOptions& opt) {
    const rake::CallGraph graph = rake::load_graph(opt.input);
    const rake::Objective objective = resolve_objective(opt.objective, opt.weight);

    const rake::EnvConfig env_cfg =
        rake::EnvConfig::make(graph.method_count(), opt.p_max, objective, opt.seed);
    rake::TrainConfig train_cfg;
    train_cfg.episodes = opt.episodes;
    train_cfg.seed = opt.seed;
    train_cfg.early_stop_patience = opt.early_stop;

    const rake::TrainResult result = rake::train(graph, env_cfg, train_cfg);
    const rake::MetricsReport report = rake::compute_metrics(graph, result.best);

    fs::create_directories(opt.output);
    const fs::path out(opt.output);
    rake::save_decomposition(graph, result.best, (out / "decomposition.json").string());
    rake::atomic_write_file((out / "metrics.json").string(), rake::metrics_to_json(report));
    rake::atomic_write_file((out / "metrics.tsv").string(),
                            rake::metrics_table_header() +
                                rake::metrics_table_row("decompose", report));
    rake::atomic_write_file((out / "training_log.tsv").string(),
                            rake::training_log_to_tsv(result.log));
    rake::save_checkpoint((out / "policy.json").string(), result.net, result.optimizer, env_cfg,
                          train_cfg);
    log_warnings(report.flags);
    if (!result.log.empty()) {
        log_debug("trained " + std::to_string(result.log.size()) + " episode(s) in " +
                  std::to_string(result.log.back().wall_time_s) + "s");
    }

    std::printf("objective %s\n", objective.to_string().c_str());
    std::printf("episodes %zu\n", result.log.size());
    std::printf("best %.6f\n", result.best_objective);
    std::printf("services %d\n", result.best.service_count());
    std::printf("wrote %s\n", (out / "decomposition.json").string().c_str());
    std::fputs(rake::metrics_table_header().c_str(), stdout);
    std::fputs(rake::metrics_table_row("decompose", report).c_str(), stdout);
}

struct EvaluateOptions {
    std::string input;
    std::string decomposition;
    std::optional<std::string> output;
};

void cmd_evaluate(const EvaluateOptions& opt) {
    const rake::CallGraph graph = rake::load_graph(opt.input);
    const rake::Decomposition d = rake::load_decomposition(graph, opt.decomposition);
    const rake::MetricsReport report = rake::compute_metrics(graph, d);
    log_warnings(report.flags);

    std::printf("services %d\n", report.service_count);
    std::printf("cohesion %.6f\n", report.cohesion);
    std::printf("coupling %.6f\n", report.coupling);
    std::printf("mq %.6f\n", report.mq);
    std::printf("bcp %.6f\n", report.bcp);
    std::printf("di %.6f\n", report.di);
    std::printf("abcp %.6f\n", report.abcp);
    std::printf("icp %.6f\n", report.icp);
    std::printf("ifn %.6f\n", report.ifn);
    std::fputs(rake::metrics_table_header().c_str(), stdout);
    std::fputs(rake::metrics_table_row("evaluate", report).c_str(), stdout);

    if (opt.output) {
        rake::atomic_write_file(*opt.output, rake::metrics_to_json(report));
        std::printf("wrote %s\n", opt.output->c_str());
    }
}

struct OracleOptions {
    std::string input;
    std::string objective = "mq";
    std::string mode = "exhaustive";
    int restarts = 20;
    int cap = rake::kDefaultEnumerationCap;
    std::uint64_t seed = 0;
    std::optional<std::string> output;
};

void cmd_oracle(const OracleOptions& opt) {
    const rake::CallGraph graph = rake::load_graph(opt.input);
    const rake::Objective objective = rake::parse_objective(opt.objective);

    rake::OracleResult result;
    if (opt.mode == "exhaustive") {
        result = rake::exhaustive_best(graph, objective, opt.cap);
    } else if (opt.mode == "hillclimb") {
        result = rake::hill_climb(graph, objective, opt.restarts, opt.seed);
    } else {
        throw rake::ConfigError("unknown --oracle-mode '" + opt.mode +
                                "' (expected exhaustive | hillclimb)");
    }
    const rake::MetricsReport report = rake::compute_metrics(graph, result.best);
    log_debug("oracle finished in " + std::to_string(result.elapsed_seconds) + "s");

    std::printf("mode %s\n", opt.mode.c_str());
    std::printf("partitions %llu\n",
                static_cast<unsigned long long>(result.partitions_evaluated));
    std::printf("best %.6f\n", result.best_objective);
    std::printf("services %d\n", result.best.service_count());
    std::fputs(rake::metrics_table_header().c_str(), stdout);
    std::fputs(rake::metrics_table_row("oracle", report).c_str(), stdout);

    if (opt.output) {
        nlohmann::json j;
        j["mode"] = opt.mode;
        j["objective"] = objective.to_string();
        j["best_objective"] = result.best_objective;
        j["partitions_evaluated"] = result.partitions_evaluated;
        j["decomposition"] = nlohmann::json::parse(rake::decomposition_to_json(graph, result.best));
        j["metrics"] = nlohmann::json::parse(rake::metrics_to_json(report));
        rake::atomic_write_file(*opt.output, j.dump(2) + "\n");
        std::printf("wrote %s\n", opt.output->c_str());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"method-level service decomposition from execution traces"};
    app.require_subcommand(1);

    AnalyzeOptions analyze_opt;
    CLI::App* analyze = app.add_subcommand("analyze", "parse trace logs into a graph file");
    analyze->add_option("--input", analyze_opt.inputs, "trace log file(s)")
        ->required()
        ->expected(-1);
    analyze->add_option("--capability-map", analyze_opt.capability_map,
                        "explicit method-to-capability map file");
    analyze->add_option("--output", analyze_opt.output, "graph file to write");
    analyze->add_option("--dot", analyze_opt.dot, "also write a Graphviz rendering");

    DecomposeOptions decompose_opt;
    CLI::App* decompose = app.add_subcommand("decompose", "train the agent and emit services");
    decompose->add_option("--input", decompose_opt.input, "graph file")->required();
    decompose->add_option("--objective", decompose_opt.objective,
                          "mq | abcp | weighted:<w> (MQ share w in [0,1])");
    decompose->add_option("--weight", decompose_opt.weight, "MQ share for --objective weighted");
    decompose->add_option("--episodes", decompose_opt.episodes, "training episodes");
    decompose->add_option("--pmax", decompose_opt.p_max, "passes over all methods per episode");
    decompose->add_option("--seed", decompose_opt.seed, "run seed");
    decompose->add_option("--early-stop", decompose_opt.early_stop,
                          "stop after this many episodes without improvement (0 = off)");
    decompose->add_option("--output", decompose_opt.output, "output directory");

    EvaluateOptions evaluate_opt;
    CLI::App* evaluate = app.add_subcommand("evaluate", "score a decomposition against a graph");
    evaluate->add_option("--input", evaluate_opt.input, "graph file")->required();
    evaluate->add_option("--decomposition", evaluate_opt.decomposition, "decomposition file")
        ->required();
    evaluate->add_option("--output", evaluate_opt.output, "metrics file to write");

    OracleOptions oracle_opt;
    CLI::App* oracle = app.add_subcommand("oracle", "exhaustive or hill-climbing baseline");
    oracle->add_option("--input", oracle_opt.input, "graph file")->required();
    oracle->add_option("--objective", oracle_opt.objective, "mq | abcp | weighted:<w>");
    oracle->add_option("--oracle-mode", oracle_opt.mode, "exhaustive | hillclimb");
    oracle->add_option("--restarts", oracle_opt.restarts, "hill-climbing restarts");
    oracle->add_option("--cap", oracle_opt.cap, "max methods for exhaustive enumeration");
    oracle->add_option("--seed", oracle_opt.seed, "hill-climbing seed");
    oracle->add_option("--output", oracle_opt.output, "result file to write");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp" ||
            e.get_name() == "CallForVersion") {
            return app.exit(e);
        }
        std::cerr << "error: " << e.what() << "\n";
        return kBadConfig;
    }

    try {
        if (analyze->parsed()) cmd_analyze(analyze_opt);
        if (decompose->parsed()) cmd_decompose(decompose_opt);
        if (evaluate->parsed()) cmd_evaluate(evaluate_opt);
        if (oracle->parsed()) cmd_oracle(oracle_opt);
    } catch (const rake::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadConfig;
    } catch (const rake::InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadInput;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInternalError;
    }
    return kOk;
}
