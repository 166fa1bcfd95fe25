#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "rake/graph.hpp"
#include "rake/net.hpp"
#include "rake/pipeline.hpp"
#include "support/fixtures.hpp"

using namespace rake;

namespace {

OperationRecord op(const std::string& sig, std::int64_t eoi, std::int64_t ess,
                   std::int64_t trace_id = 1) {
    OperationRecord r;
    r.operation_signature = sig;
    r.eoi = eoi;
    r.ess = ess;
    r.trace_id = trace_id;
    r.tout = 1;
    return r;
}

}  // namespace

TEST_SUITE("graph") {

TEST_CASE("reconstruct_calls recovers the e-commerce call tree") {
    const TraceLog log = parse_log_text(fixtures::kEcommerceTraceLog);
    const CallEvents ev = reconstruct_calls(log.blocks[0].records);

    CHECK(ev.entry_points ==
          std::set<std::string>{"OrderActionBean.addItemToCart(java.lang.String,int)"});
    REQUIRE(ev.edges.size() == 3);
    const auto edge = [&ev](const std::string& a, const std::string& b) {
        const auto it = ev.edges.find({a, b});
        return it == ev.edges.end() ? std::int64_t{0} : it->second;
    };
    CHECK(edge("OrderActionBean.addItemToCart(java.lang.String,int)",
               "AccountService.getCartByUser(java.lang.String)") == 1);
    CHECK(edge("AccountService.getCartByUser(java.lang.String)",
               "OrderService.addItemToCart(model.Cart,jva.lang.String,int)") == 1);
    CHECK(edge("OrderActionBean.addItemToCart(java.lang.String,int)",
               "OrderActionBean.setQuantity(int)") == 1);
}

TEST_CASE("reconstruct_calls edge cases") {
    const std::vector<OperationRecord> single{op("only", 0, 1)};
    const CallEvents ev = reconstruct_calls(single);
    CHECK(ev.edges.empty());
    CHECK(ev.entry_points == std::set<std::string>{"only"});

    const std::vector<OperationRecord> broken{op("a", 0, 1), op("b", 1, 3)};
    CHECK_THROWS_AS(reconstruct_calls(broken), BrokenStack);

    // minimal depth need not be 1
    const std::vector<OperationRecord> deep{op("a", 0, 2), op("b", 1, 3), op("c", 2, 3)};
    const CallEvents ev2 = reconstruct_calls(deep);
    CHECK(ev2.entry_points == std::set<std::string>{"a"});
    CHECK(ev2.edges.size() == 2);

    CHECK(reconstruct_calls(std::vector<OperationRecord>{}).methods.empty());
}

TEST_CASE("reconstructed edges always point forward in execution order") {
    const TraceLog log = parse_log_text(fixtures::kEcommerceTraceLog);
    const auto& records = log.blocks[0].records;
    const CallEvents ev = reconstruct_calls(records);
    auto eoi_of = [&records](const std::string& sig) {
        for (const auto& r : records) {
            if (r.operation_signature == sig) return r.eoi;
        }
        return std::int64_t{-1};
    };
    for (const auto& [edge, count] : ev.edges) {
        CHECK(eoi_of(edge.first) < eoi_of(edge.second));
    }
}

TEST_CASE("recursion produces a self edge that is kept") {
    const std::vector<OperationRecord> rec{op("f", 0, 1), op("f", 1, 2)};
    const CallEvents ev = reconstruct_calls(rec);
    REQUIRE(ev.edges.size() == 1);
    CHECK(ev.edges.begin()->first == std::pair<std::string, std::string>{"f", "f"});

    const Odg odg{"", ev.methods, ev.edges, ev.entry_points};
    const CallGraph g = merge_odgs(std::vector<Odg>{odg});
    CHECK(g.inv[0][0] == 1);
}

TEST_CASE("build_odg unions blocks of one capability and sums counts") {
    const std::string block =
        "$2;1;Test_Order_AddItem\n"
        "$1;1;a;s;1;2;3;h;0;1\n"
        "$1;2;b;s;1;2;3;h;1;2\n";
    const std::string other =
        "$2;9;Test_Account_Login\n"
        "$1;3;c;s;2;2;3;h;0;1\n";

    const TraceLog log = parse_log_text(block + other + block);
    const Odg order = build_odg(log, "Order");
    CHECK(order.methods == std::set<std::string>{"a", "b"});
    CHECK(order.edges.at({"a", "b"}) == 2);  // same block twice doubles the count
    CHECK(order.entry_points == std::set<std::string>{"a"});

    const Odg account = build_odg(log, "Account");
    CHECK(account.methods == std::set<std::string>{"c"});
    CHECK(account.edges.empty());

    CHECK_THROWS_AS(build_odg(log, "Payment"), NoTracesForCapability);
}

TEST_CASE("merge_odgs consolidates shared methods and sums counts") {
    Odg left{"Order", {"a", "b"}, {{{"a", "b"}, 2}}, {"a"}};
    Odg right{"Account", {"b", "c"}, {{{"b", "c"}, 1}, {{"a", "b"}, 1}}, {"b"}};
    const CallGraph g = merge_odgs(std::vector<Odg>{left, right});

    CHECK(g.methods == std::vector<std::string>{"a", "b", "c"});
    CHECK(g.inv[0][1] == 3);
    CHECK(g.inv[1][2] == 1);
    CHECK(g.caps.method_caps.at("b") == std::set<std::string>{"Account", "Order"});
    CHECK(g.caps.method_caps.at("a") == std::set<std::string>{"Order"});
    CHECK(g.caps.capability_count() == 2);

    CHECK_THROWS_AS(merge_odgs(std::vector<Odg>{}), InputError);
}

TEST_CASE("merging disjoint ODGs yields a block-diagonal matrix") {
    Odg left{"L", {"a", "b"}, {{{"a", "b"}, 1}}, {"a"}};
    Odg right{"R", {"y", "z"}, {{{"y", "z"}, 4}}, {"y"}};
    const CallGraph g = merge_odgs(std::vector<Odg>{left, right});
    CHECK(g.inv[0][1] == 1);
    CHECK(g.inv[2][3] == 4);
    for (int i = 0; i < 2; ++i) {
        for (int j = 2; j < 4; ++j) {
            CHECK(g.inv[i][j] == 0);
            CHECK(g.inv[j][i] == 0);
        }
    }
}

TEST_CASE("merge order does not change the matrix and counts are conserved") {
    Rng rng(7);
    std::vector<Odg> odgs;
    std::int64_t total = 0;
    for (int i = 0; i < 4; ++i) {
        Odg odg;
        odg.capability = "cap" + std::to_string(i);
        for (int e = 0; e < 6; ++e) {
            const std::string a = "m" + std::to_string(rng.uniform_int(6));
            const std::string b = "m" + std::to_string(rng.uniform_int(6));
            const std::int64_t count = 1 + rng.uniform_int(3);
            odg.methods.insert(a);
            odg.methods.insert(b);
            odg.edges[{a, b}] += count;
        }
        for (const auto& [edge, count] : odg.edges) total += count;
        odgs.push_back(std::move(odg));
    }

    const CallGraph forward = merge_odgs(odgs);
    std::vector<Odg> reversed(odgs.rbegin(), odgs.rend());
    const CallGraph backward = merge_odgs(reversed);

    CHECK(forward.methods == backward.methods);
    CHECK(forward.inv == backward.inv);
    CHECK(forward.total_calls() == total);
}

TEST_CASE("overlap_ratio counts methods shared by two or more capabilities") {
    auto with_overlap = [](int shared, int total) {
        std::vector<std::string> methods = fixtures::numbered_methods("method.", total);
        std::map<std::string, std::vector<int>> caps;
        for (int i = 0; i < total; ++i) {
            caps["A"].push_back(i);
            if (i < shared) caps["B"].push_back(i);
        }
        return fixtures::make_graph(std::move(methods), {}, caps);
    };

    CHECK(overlap_ratio(with_overlap(0, 10)) == 0.0);
    CHECK(overlap_ratio(with_overlap(21, 114)) == doctest::Approx(21.0 / 114).epsilon(1e-12));
    CHECK(overlap_ratio(with_overlap(21, 114)) == doctest::Approx(0.184).epsilon(5e-3));
    CHECK(overlap_ratio(with_overlap(9, 227)) == doctest::Approx(0.0396).epsilon(1e-2));
    CHECK(overlap_ratio(with_overlap(140, 1308)) == doctest::Approx(0.107).epsilon(1e-2));
}

TEST_CASE("build_graph labels methods from headers and applies overrides") {
    const std::string logs =
        "$2;1;Test_Order_Add\n"
        "$1;1;shared;s;1;2;3;h;0;1\n"
        "$1;2;orderOnly;s;1;2;3;h;1;2\n"
        "$2;2;Test_Account_Login\n"
        "$1;3;shared;s;2;2;3;h;0;1\n"
        "$1;4;accountOnly;s;2;2;3;h;1;2\n";
    const TraceLog log = parse_log_text(logs);

    const AnalyzeResult plain = build_graph(log, std::nullopt);
    CHECK(plain.graph.method_count() == 3);
    CHECK(plain.graph.caps.method_caps.at("shared") ==
          std::set<std::string>{"Account", "Order"});
    CHECK(overlap_ratio(plain.graph) == doctest::Approx(1.0 / 3));

    std::map<std::string, std::set<std::string>> overrides{
        {"orderOnly", {"Billing"}},
        {"ghostMethod", {"Billing"}},
    };
    const AnalyzeResult adjusted = build_graph(log, overrides);
    CHECK(adjusted.graph.caps.method_caps.at("orderOnly") == std::set<std::string>{"Billing"});
    CHECK(adjusted.graph.caps.capabilities.count("Billing") == 1);
    bool warned_ghost = false;
    for (const auto& w : adjusted.warnings) {
        warned_ghost = warned_ghost || w.find("ghostMethod") != std::string::npos;
    }
    CHECK(warned_ghost);
}

TEST_CASE("build_graph keeps unlabeled blocks only when an override map exists") {
    const std::string logs =
        "$2;1;NotAConventionalId\n"
        "$1;1;a;s;1;2;3;h;0;1\n"
        "$1;2;b;s;1;2;3;h;1;2\n"
        "$2;2;Test_Order_Add\n"
        "$1;3;c;s;2;2;3;h;0;1\n";
    const TraceLog log = parse_log_text(logs);

    const AnalyzeResult skipped = build_graph(log, std::nullopt);
    CHECK(skipped.graph.method_count() == 1);  // only the Order block survives
    CHECK_FALSE(skipped.warnings.empty());

    std::map<std::string, std::set<std::string>> overrides{{"a", {"Misc"}}, {"b", {"Misc"}}};
    const AnalyzeResult kept = build_graph(log, overrides);
    CHECK(kept.graph.method_count() == 3);
    CHECK(kept.graph.inv[kept.graph.index_of("a")][kept.graph.index_of("b")] == 1);
    CHECK(kept.graph.caps.method_caps.at("a") == std::set<std::string>{"Misc"});
}

TEST_CASE("a log with no labeled blocks and no map is an error") {
    const TraceLog log = parse_log_text("$2;1;Nope\n$1;1;a;s;1;2;3;h;0;1\n");
    CHECK_THROWS_AS(build_graph(log, std::nullopt), InputError);
}

TEST_CASE("to_dot renders every method and edge") {
    const CallGraph g = fixtures::two_clique_graph();
    const std::string dot = to_dot(g);
    CHECK(dot.find("digraph") != std::string::npos);
    CHECK(dot.find("A.a()") != std::string::npos);
    CHECK(dot.find("n0 -> n1") != std::string::npos);
}

}  // TEST_SUITE
