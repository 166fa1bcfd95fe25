#include "rake/io.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "rake/objective.hpp"

namespace rake {

using nlohmann::json;

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_metric(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

json parse_json(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw InputError(what + " is not valid JSON: " + e.what());
    }
}

json layer_to_json(const LinearLayer& l) {
    json w = json::array();
    for (int r = 0; r < l.w.rows; ++r) {
        json row = json::array();
        for (int c = 0; c < l.w.cols; ++c) row.push_back(l.w.at(r, c));
        w.push_back(std::move(row));
    }
    return json{{"w", std::move(w)}, {"b", l.b}};
}

LinearLayer layer_from_json(const json& j) {
    const auto& w = j.at("w");
    const auto& b = j.at("b");
    const int rows = static_cast<int>(w.size());
    const int cols = rows > 0 ? static_cast<int>(w.at(0).size()) : 0;
    LinearLayer l(cols, rows);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) l.w.at(r, c) = w.at(r).at(c).get<double>();
    }
    l.b = b.get<std::vector<double>>();
    return l;
}

}  // namespace

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void atomic_write_file(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write file: " + tmp);
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw Error("short write to: " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

std::string graph_to_json(const CallGraph& g) {
    json j;
    j["methods"] = g.methods;
    json edges = json::array();
    for (int a = 0; a < g.method_count(); ++a) {
        for (int b = 0; b < g.method_count(); ++b) {
            if (g.inv[a][b] > 0) edges.push_back(json::array({a, b, g.inv[a][b]}));
        }
    }
    j["edges"] = std::move(edges);
    json caps = json::object();
    for (const auto& cap : g.caps.capabilities) caps[cap] = json::array();
    for (const auto& [method, method_caps] : g.caps.method_caps) {
        for (const auto& cap : method_caps) caps[cap].push_back(method);
    }
    j["capabilities"] = std::move(caps);
    return j.dump(2) + "\n";
}

CallGraph graph_from_json(const std::string& text) {
    const json j = parse_json(text, "graph file");
    if (!j.is_object() || !j.contains("methods") || !j.contains("edges")) {
        throw InputError("graph file must hold 'methods' and 'edges'");
    }

    std::vector<std::string> raw_methods = j.at("methods").get<std::vector<std::string>>();
    if (raw_methods.empty()) throw InputError("graph has no methods");

    // canonicalize: methods sorted lexicographically, edges remapped
    std::vector<std::string> sorted = raw_methods;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw InputError("graph has duplicate method names");
    }

    CallGraph g;
    g.methods = std::move(sorted);
    const int n = g.method_count();
    std::vector<int> remap(raw_methods.size());
    for (std::size_t i = 0; i < raw_methods.size(); ++i) {
        remap[i] = g.index_of(raw_methods[i]);
    }

    g.inv.assign(n, std::vector<std::int64_t>(n, 0));
    for (const auto& e : j.at("edges")) {
        if (!e.is_array() || e.size() != 3) {
            throw InputError("graph edges must be [caller, callee, count] triples");
        }
        const auto a = e.at(0).get<std::int64_t>();
        const auto b = e.at(1).get<std::int64_t>();
        const auto count = e.at(2).get<std::int64_t>();
        if (a < 0 || a >= static_cast<std::int64_t>(raw_methods.size()) || b < 0 ||
            b >= static_cast<std::int64_t>(raw_methods.size())) {
            throw InputError("graph edge index out of range");
        }
        if (count <= 0) throw InputError("graph edge counts must be positive");
        g.inv[remap[static_cast<std::size_t>(a)]][remap[static_cast<std::size_t>(b)]] += count;
    }

    if (j.contains("capabilities")) {
        const auto& caps = j.at("capabilities");
        if (!caps.is_object()) throw InputError("graph 'capabilities' must be an object");
        for (const auto& [cap, members] : caps.items()) {
            g.caps.capabilities.insert(cap);
            for (const auto& m : members) {
                const std::string name = m.get<std::string>();
                if (g.index_of(name) < 0) {
                    throw InputError("capability '" + cap + "' names unknown method '" + name +
                                     "'");
                }
                g.caps.method_caps[name].insert(cap);
            }
        }
    }
    return g;
}

void save_graph(const CallGraph& g, const std::string& path) {
    atomic_write_file(path, graph_to_json(g));
}

CallGraph load_graph(const std::string& path) { return graph_from_json(read_file(path)); }

std::optional<std::string> majority_capability(const CallGraph& g,
                                               std::span<const int> service_methods) {
    std::map<std::string, int> counts;
    for (int m : service_methods) {
        const auto it = g.caps.method_caps.find(g.methods[static_cast<std::size_t>(m)]);
        if (it == g.caps.method_caps.end()) continue;
        for (const auto& cap : it->second) ++counts[cap];
    }
    if (counts.empty()) return std::nullopt;
    // map iteration is sorted, so ties keep the lexicographically smallest
    auto best = counts.begin();
    for (auto it = counts.begin(); it != counts.end(); ++it) {
        if (it->second > best->second) best = it;
    }
    return best->first;
}

std::string decomposition_to_json(const CallGraph& g, const Decomposition& d) {
    json services = json::array();
    for (const auto& members : d.services) {
        json methods = json::array();
        for (int m : members) methods.push_back(g.methods[static_cast<std::size_t>(m)]);
        const auto cap = majority_capability(g, members);
        json service;
        service["capability"] = cap ? json(*cap) : json(nullptr);
        service["methods"] = std::move(methods);
        services.push_back(std::move(service));
    }
    json j;
    j["services"] = std::move(services);
    return j.dump(2) + "\n";
}

Decomposition decomposition_from_json(const CallGraph& g, const std::string& text) {
    const json j = parse_json(text, "decomposition file");
    if (!j.is_object() || !j.contains("services") || !j.at("services").is_array()) {
        throw InputError("decomposition file must hold a 'services' array");
    }

    std::map<std::string, int> service_of;
    int index = 0;
    for (const auto& service : j.at("services")) {
        if (!service.contains("methods")) {
            throw InputError("decomposition service entry lacks 'methods'");
        }
        bool any = false;
        for (const auto& m : service.at("methods")) {
            const std::string name = m.get<std::string>();
            if (!service_of.emplace(name, index).second) {
                throw MethodSetMismatch("method '" + name + "' assigned to several services");
            }
            any = true;
        }
        if (any) ++index;  // empty services in the file are simply dropped
    }

    std::vector<std::string> missing;
    std::vector<int> assignment(static_cast<std::size_t>(g.method_count()), -1);
    for (int m = 0; m < g.method_count(); ++m) {
        const auto it = service_of.find(g.methods[static_cast<std::size_t>(m)]);
        if (it == service_of.end()) {
            missing.push_back(g.methods[static_cast<std::size_t>(m)]);
        } else {
            assignment[static_cast<std::size_t>(m)] = it->second;
            service_of.erase(it);
        }
    }
    if (!missing.empty() || !service_of.empty()) {
        std::ostringstream os;
        os << "decomposition does not cover the graph's method set";
        if (!missing.empty()) {
            os << "; missing:";
            for (const auto& m : missing) os << ' ' << m;
        }
        if (!service_of.empty()) {
            os << "; unknown:";
            for (const auto& [m, s] : service_of) os << ' ' << m;
        }
        throw MethodSetMismatch(os.str());
    }
    return Decomposition::from_assignment(assignment);
}

void save_decomposition(const CallGraph& g, const Decomposition& d, const std::string& path) {
    atomic_write_file(path, decomposition_to_json(g, d));
}

Decomposition load_decomposition(const CallGraph& g, const std::string& path) {
    return decomposition_from_json(g, read_file(path));
}

std::string metrics_to_json(const MetricsReport& report) {
    json j;
    j["cohesion"] = report.cohesion;
    j["coupling"] = report.coupling;
    j["mq"] = report.mq;
    j["bcp"] = report.bcp;
    j["di"] = report.di;
    j["abcp"] = report.abcp;
    j["icp"] = report.icp;
    j["ifn"] = report.ifn;
    j["services"] = report.service_count;
    json per_service = json::array();
    for (const auto& s : report.per_service) {
        json e;
        e["size"] = s.size;
        e["intra_edges"] = s.intra_edges;
        e["interface_methods"] = s.interface_methods;
        e["capability_counts"] = s.capability_counts;
        per_service.push_back(std::move(e));
    }
    j["per_service"] = std::move(per_service);
    j["flags"] = report.flags;
    return j.dump(2) + "\n";
}

std::string metrics_table_header() { return "label\tMQ\tABCP\tICP\tIFN\tservices\n"; }

std::string metrics_table_row(const std::string& label, const MetricsReport& report) {
    std::ostringstream os;
    os << label << '\t' << fmt_metric(report.mq) << '\t' << fmt_metric(report.abcp) << '\t'
       << fmt_metric(report.icp) << '\t' << fmt_metric(report.ifn) << '\t'
       << report.service_count << '\n';
    return os.str();
}

std::string training_log_to_tsv(std::span<const EpisodeLogEntry> log) {
    std::ostringstream os;
    os << "episode\tsteps\tepisode_best\tglobal_best\n";
    for (const auto& e : log) {
        os << e.episode << '\t' << e.steps << '\t' << fmt_double(e.episode_best) << '\t'
           << fmt_double(e.global_best) << '\n';
    }
    return os.str();
}

void save_checkpoint(const std::string& path, const PolicyValueNet& net,
                     const AdamOptimizer& optimizer, const EnvConfig& env_cfg,
                     const TrainConfig& train_cfg) {
    json j;
    j["format_version"] = 1;

    json net_j;
    net_j["observation_size"] = net.observation_size();
    net_j["action_count"] = net.action_count();
    net_j["hidden"] = net.hidden_sizes();
    json trunk = json::array();
    for (const auto& l : net.trunk()) trunk.push_back(layer_to_json(l));
    net_j["trunk"] = std::move(trunk);
    net_j["policy_head"] = layer_to_json(net.policy_head());
    net_j["value_head"] = layer_to_json(net.value_head());
    j["net"] = std::move(net_j);

    json adam;
    adam["learning_rate"] = optimizer.learning_rate();
    adam["step_count"] = optimizer.step_count();
    adam["m"] = optimizer.first_moments();
    adam["v"] = optimizer.second_moments();
    j["adam"] = std::move(adam);

    json env;
    env["n_methods"] = env_cfg.n_methods;
    env["s_max"] = env_cfg.s_max;
    env["p_max"] = env_cfg.p_max;
    env["objective"] = env_cfg.objective.to_string();
    env["seed"] = env_cfg.seed;
    j["env"] = std::move(env);

    json train;
    train["episodes"] = train_cfg.episodes;
    train["learning_rate"] = train_cfg.learning_rate;
    train["clip_epsilon"] = train_cfg.clip_epsilon;
    train["gamma"] = train_cfg.gamma;
    train["gae_lambda"] = train_cfg.gae_lambda;
    train["update_epochs"] = train_cfg.update_epochs;
    train["minibatch_size"] = train_cfg.minibatch_size;
    train["entropy_coef"] = train_cfg.entropy_coef;
    train["value_coef"] = train_cfg.value_coef;
    train["max_grad_norm"] = train_cfg.max_grad_norm;
    train["seed"] = train_cfg.seed;
    train["early_stop_patience"] = train_cfg.early_stop_patience;
    train["hidden"] = train_cfg.hidden;
    j["train"] = std::move(train);

    atomic_write_file(path, j.dump(2) + "\n");
}

Checkpoint load_checkpoint(const std::string& path) {
    const json j = parse_json(read_file(path), "checkpoint");
    if (!j.contains("format_version") || j.at("format_version").get<int>() != 1) {
        throw InputError("unsupported checkpoint format version");
    }

    Checkpoint ck;
    const auto& net_j = j.at("net");
    std::vector<LinearLayer> trunk;
    for (const auto& l : net_j.at("trunk")) trunk.push_back(layer_from_json(l));
    ck.net = PolicyValueNet::from_parts(
        net_j.at("observation_size").get<int>(), net_j.at("action_count").get<int>(),
        net_j.at("hidden").get<std::vector<int>>(), std::move(trunk),
        layer_from_json(net_j.at("policy_head")), layer_from_json(net_j.at("value_head")));

    const auto& adam = j.at("adam");
    ck.optimizer = AdamOptimizer(ck.net.parameter_count(), adam.at("learning_rate").get<double>());
    ck.optimizer.restore(adam.at("m").get<std::vector<double>>(),
                         adam.at("v").get<std::vector<double>>(),
                         adam.at("step_count").get<std::int64_t>());

    const auto& env = j.at("env");
    ck.env_cfg.n_methods = env.at("n_methods").get<int>();
    ck.env_cfg.s_max = env.at("s_max").get<int>();
    ck.env_cfg.p_max = env.at("p_max").get<int>();
    ck.env_cfg.objective = parse_objective(env.at("objective").get<std::string>());
    ck.env_cfg.seed = env.at("seed").get<std::uint64_t>();

    const auto& train = j.at("train");
    ck.train_cfg.episodes = train.at("episodes").get<int>();
    ck.train_cfg.learning_rate = train.at("learning_rate").get<double>();
    ck.train_cfg.clip_epsilon = train.at("clip_epsilon").get<double>();
    ck.train_cfg.gamma = train.at("gamma").get<double>();
    ck.train_cfg.gae_lambda = train.at("gae_lambda").get<double>();
    ck.train_cfg.update_epochs = train.at("update_epochs").get<int>();
    ck.train_cfg.minibatch_size = train.at("minibatch_size").get<int>();
    ck.train_cfg.entropy_coef = train.at("entropy_coef").get<double>();
    ck.train_cfg.value_coef = train.at("value_coef").get<double>();
    ck.train_cfg.max_grad_norm = train.at("max_grad_norm").get<double>();
    ck.train_cfg.seed = train.at("seed").get<std::uint64_t>();
    ck.train_cfg.early_stop_patience = train.at("early_stop_patience").get<int>();
    ck.train_cfg.hidden = train.at("hidden").get<std::vector<int>>();
    return ck;
}

}  // namespace rake
