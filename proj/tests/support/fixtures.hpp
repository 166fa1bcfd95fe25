#pragma once

#include <cstdio>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "rake/decomposition.hpp"
#include "rake/graph.hpp"
#include "rake/net.hpp"
#include "rake/pipeline.hpp"

namespace fixtures {

// Five-line excerpt of a collected execution trace for an e-commerce
// system's add-item-to-cart test case. Byte-exact golden input.
inline constexpr const char* kEcommerceTraceLog =
    "$2;1753777000000000001;Test_Order_AddItemToCart\n"
    "$1;1753777000000001201;OrderActionBean.addItemToCart(java.lang.String,int);<no-session-id>;"
    "2499076000000000001;1753777000000001101;1753777000000001400;localhost;2;1\n"
    "$1;1753777000000002202;AccountService.getCartByUser(java.lang.String);<no-session-id>;"
    "2499076000000000001;1753777000000001210;1753777000000001290;localhost;3;2\n"
    "$1;1753777000000003203;OrderService.addItemToCart(model.Cart,jva.lang.String,int);"
    "<no-session-id>;2499076000000000001;1753777000000001230;1753777000000001275;localhost;4;3\n"
    "$1;1753777000000004204;OrderActionBean.setQuantity(int);<no-session-id>;"
    "2499076000000000001;1753777000000001500;1753777000000001550;localhost;5;2\n";

inline rake::CallGraph ecommerce_trace_graph() {
    return rake::build_graph(rake::parse_log_text(kEcommerceTraceLog), std::nullopt).graph;
}

/// Graph builder for hand fixtures. `methods` must already be sorted;
/// edges are (caller, callee, count) index triples; capability membership
/// is given as capability -> method indices.
inline rake::CallGraph make_graph(
    std::vector<std::string> methods,
    const std::vector<std::tuple<int, int, std::int64_t>>& edges,
    const std::map<std::string, std::vector<int>>& capabilities = {}) {
    rake::CallGraph g;
    g.methods = std::move(methods);
    const int n = g.method_count();
    for (int i = 1; i < n; ++i) {
        if (!(g.methods[i - 1] < g.methods[i])) {
            throw std::logic_error("fixture methods must be sorted and unique");
        }
    }
    g.inv.assign(n, std::vector<std::int64_t>(n, 0));
    for (const auto& [a, b, count] : edges) g.inv[a][b] += count;
    for (const auto& [cap, members] : capabilities) {
        g.caps.capabilities.insert(cap);
        for (int m : members) g.caps.method_caps[g.methods[m]].insert(cap);
    }
    return g;
}

inline std::vector<std::string> numbered_methods(const std::string& prefix, int count) {
    std::vector<std::string> out;
    for (int i = 0; i < count; ++i) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%s%04d", prefix.c_str(), i);
        out.emplace_back(buf);
    }
    return out;
}

/// 20 methods across three separable capabilities, Account(7) / Order(7) /
/// Payment(6), each capability a complete digraph with no cross-capability
/// calls. The capability-pure partition is the planted optimum for both
/// structural quality and capability alignment.
inline rake::CallGraph planted_three_capability_graph() {
    std::vector<std::string> methods;
    for (const auto& m : numbered_methods("account.m", 7)) methods.push_back(m);
    for (const auto& m : numbered_methods("order.m", 7)) methods.push_back(m);
    for (const auto& m : numbered_methods("payment.m", 6)) methods.push_back(m);

    std::vector<std::tuple<int, int, std::int64_t>> edges;
    auto clique = [&edges](int lo, int hi) {
        for (int a = lo; a < hi; ++a) {
            for (int b = lo; b < hi; ++b) {
                if (a != b) edges.emplace_back(a, b, 1);
            }
        }
    };
    clique(0, 7);
    clique(7, 14);
    clique(14, 20);

    std::map<std::string, std::vector<int>> caps;
    for (int i = 0; i < 7; ++i) caps["Account"].push_back(i);
    for (int i = 7; i < 14; ++i) caps["Order"].push_back(i);
    for (int i = 14; i < 20; ++i) caps["Payment"].push_back(i);
    return make_graph(std::move(methods), edges, caps);
}

inline rake::Decomposition planted_partition() {
    std::vector<int> assignment(20, 0);
    for (int i = 7; i < 14; ++i) assignment[i] = 1;
    for (int i = 14; i < 20; ++i) assignment[i] = 2;
    return rake::Decomposition::from_assignment(assignment);
}

/// 20 methods in four dense five-method call cliques whose boundaries do not
/// line up with the three capabilities; 4 of 20 methods (20%) are shared
/// between two capabilities. Capability-aligned partitions must cut cliques,
/// so alignment and structural quality pull in opposite directions.
inline rake::CallGraph tangled_overlap_graph() {
    std::vector<std::string> methods = numbered_methods("svc.m", 20);

    std::vector<std::tuple<int, int, std::int64_t>> edges;
    for (int module = 0; module < 4; ++module) {
        const int lo = module * 5;
        for (int a = lo; a < lo + 5; ++a) {
            for (int b = lo; b < lo + 5; ++b) {
                if (a != b) edges.emplace_back(a, b, 1);
            }
        }
    }

    std::map<std::string, std::vector<int>> caps;
    for (int i = 0; i <= 7; ++i) caps["Billing"].push_back(i);
    for (int i = 6; i <= 13; ++i) caps["Catalog"].push_back(i);
    for (int i = 12; i <= 19; ++i) caps["Shipping"].push_back(i);
    return make_graph(std::move(methods), edges, caps);
}

/// Seeded random digraph. Methods get one capability each, and with 20%
/// probability a second one, so shared-method paths are exercised.
inline rake::CallGraph random_graph(rake::Rng& rng, int n, double edge_prob, int max_count,
                                    int n_caps = 1) {
    std::vector<std::string> methods = numbered_methods("m", n);
    std::vector<std::tuple<int, int, std::int64_t>> edges;
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            const double p = a == b ? edge_prob * 0.25 : edge_prob;
            if (rng.uniform() < p) {
                edges.emplace_back(a, b, 1 + rng.uniform_int(max_count));
            }
        }
    }
    std::map<std::string, std::vector<int>> caps;
    for (int m = 0; m < n; ++m) {
        const int first = rng.uniform_int(n_caps);
        caps["cap" + std::to_string(first)].push_back(m);
        if (n_caps > 1 && rng.uniform() < 0.2) {
            const int second = (first + 1 + rng.uniform_int(n_caps - 1)) % n_caps;
            caps["cap" + std::to_string(second)].push_back(m);
        }
    }
    return make_graph(std::move(methods), edges, caps);
}

/// Two disjoint mutually-calling pairs: {A,B} and {C,D}.
inline rake::CallGraph two_clique_graph() {
    return make_graph({"A.a()", "B.b()", "C.c()", "D.d()"},
                      {{0, 1, 1}, {1, 0, 1}, {2, 3, 1}, {3, 2, 1}},
                      {{"Left", {0, 1}}, {"Right", {2, 3}}});
}

}  // namespace fixtures
