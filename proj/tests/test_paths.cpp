#include <catch2/catch_amalgamated.hpp>

#include <functional>
#include <vector>

#include <dauction/generator.hpp>
#include <dauction/harness.hpp>
#include <dauction/paths.hpp>
#include <dauction/profile.hpp>

#include "fixtures.hpp"

using namespace dauction;
using fixtures::fig1;
using fixtures::fig1_zeroed;
using fixtures::ix;
using fixtures::path_ids;

TEST_CASE("trading distances follow reported diffusion edges") {
    Graph g = fig1();
    Profile p = truthful(g);
    auto dist = trading_distances(g, p, informed_set(g, p));
    auto at = [&](const char* id) { return *dist[ix(g, id)]; };
    CHECK(at("A") == Rat(0));
    CHECK(at("B") == Rat(0));
    CHECK(at("C") == Rat(1));
    CHECK(at("D") == Rat(1));
    CHECK(at("E") == Rat(0));
    CHECK(at("F") == Rat(0));
    CHECK(at("G") == Rat(4));
    CHECK(at("H") == Rat(2));
}

TEST_CASE("canonical path takes the cheaper of two routes") {
    Graph g = fig1();
    Profile p = truthful(g);
    auto path = shortest_trading_path(g, p, ix(g, "F"));
    REQUIRE(path);
    CHECK(path_ids(g, *path) == std::vector<std::string>{"B", "E", "F"});
    CHECK(path->weight == Rat(0));

    auto to_g = shortest_trading_path(g, p, ix(g, "G"));
    REQUIRE(to_g);
    CHECK(path_ids(g, *to_g) == std::vector<std::string>{"B", "E", "F", "G"});
    CHECK(to_g->weight == Rat(4));
}

TEST_CASE("equal-weight routes resolve to fewest hops, then lex order") {
    Graph z = fig1_zeroed();
    Profile p = truthful(z);
    auto to_g = shortest_trading_path(z, p, ix(z, "G"));
    REQUIRE(to_g);
    CHECK(path_ids(z, *to_g) == std::vector<std::string>{"B", "D", "F", "G"});
    CHECK(to_g->weight == Rat(0));

    // Hop count dominates the sequence comparison: the two-hop route wins
    // even though the three-hop route is lexicographically smaller.
    Graph g("s", {{"B", Rat(1)}, {"C", Rat(1)}, {"E", Rat(9)}},
            {{"s", "C", Rat(0)}, {"C", "B", Rat(0)}, {"C", "E", Rat(0)}, {"B", "E", Rat(0)}});
    auto to_e = shortest_trading_path(g, truthful(g), ix(g, "E"));
    REQUIRE(to_e);
    CHECK(path_ids(g, *to_e) == std::vector<std::string>{"C", "E"});
}

TEST_CASE("unreachable targets have no trading path") {
    Graph g = fig1();
    Profile p = truthful(g);
    Profile q = remove_edges(g, p, {{ix(g, "B"), ix(g, "D")}, {ix(g, "B"), ix(g, "E")}});
    CHECK_FALSE(shortest_trading_path(g, q, ix(g, "F")).has_value());
    CHECK_FALSE(shortest_trading_path(g, q, ix(g, "G")).has_value());
    CHECK(shortest_trading_path(g, q, ix(g, "C")).has_value());
}

TEST_CASE("negative edge weights shorten paths without breaking settlement") {
    Graph g("s", {{"A", Rat(1)}, {"B", Rat(1)}, {"C", Rat(9)}},
            {{"s", "A", Rat(0)}, {"A", "B", Rat(5)}, {"B", "C", Rat(-3)}});
    Profile p = truthful(g);
    auto path = shortest_trading_path(g, p, ix(g, "C"));
    REQUIRE(path);
    CHECK(path->weight == Rat(2));
    CHECK(path_ids(g, *path) == std::vector<std::string>{"A", "B", "C"});
}

TEST_CASE("efficient allocation picks the highest surplus") {
    Graph g = fig1();
    Profile p = truthful(g);
    WelfareResult res = efficient_allocation(g, p);
    REQUIRE(res.winner);
    CHECK(g.id(*res.winner) == "F");
    CHECK(res.welfare == Rat(10));
    REQUIRE(res.path);
    CHECK(path_ids(g, *res.path) == std::vector<std::string>{"B", "E", "F"});

    Graph z = fig1_zeroed();
    Profile pz = truthful(z);
    WelfareResult zres = efficient_allocation(z, pz);
    REQUIRE(zres.winner);
    CHECK(z.id(*zres.winner) == "G");
    CHECK(zres.welfare == Rat(12));
    CHECK(path_ids(z, *zres.path) == std::vector<std::string>{"B", "D", "F", "G"});
}

TEST_CASE("welfare ignores removals off the winner's trading paths") {
    Graph g = fig1();
    Profile p = truthful(g);
    Rat base = efficient_allocation(g, p).welfare;
    // every simple trading path to the winner F uses only {B, D, E, F}
    for (const char* id : {"A", "C", "G", "H"}) {
        CHECK(efficient_allocation(g, remove_node(g, p, ix(g, id))).welfare == base);
    }
}

TEST_CASE("empty markets yield zero welfare and no winner") {
    Graph g("s", {}, {});
    Profile p = truthful(g);
    WelfareLight light = welfare_and_winner(g, p);
    CHECK_FALSE(light.winner);
    CHECK(light.welfare == Rat(0));
}

TEST_CASE("the tie monitor fires only on ties at the winning score") {
    Graph two("s", {{"A", Rat(3)}, {"B", Rat(3)}},
              {{"s", "A", Rat(0)}, {"s", "B", Rat(0)}});
    MarketFlags flags;
    WelfareLight res = welfare_and_winner(two, truthful(two), &flags);
    REQUIRE(res.winner);
    CHECK(two.id(*res.winner) == "A");
    CHECK(flags.tie);

    Graph three("s", {{"A", Rat(3)}, {"B", Rat(3)}, {"C", Rat(5)}},
                {{"s", "A", Rat(0)}, {"s", "B", Rat(0)}, {"s", "C", Rat(0)}});
    MarketFlags low;
    welfare_and_winner(three, truthful(three), &low);
    CHECK_FALSE(low.tie);

    MarketFlags fig;
    welfare_and_winner(fig1(), truthful(fig1()), &fig);
    CHECK_FALSE(fig.tie);
}

TEST_CASE("the negative-trade monitor fires when the best trade loses money") {
    Graph g("s", {{"A", Rat(2)}, {"B", Rat(1)}},
            {{"s", "A", Rat(0)}, {"A", "B", Rat(4)}});
    Profile p = truthful(g);
    p.reports[g.index_of("A")]->bid.reset();

    MarketFlags flags;
    WelfareLight res = welfare_and_winner(g, p, &flags);
    REQUIRE(res.winner);
    CHECK(g.id(*res.winner) == "B");
    CHECK(res.welfare == Rat(-3));
    CHECK(flags.negative_trade);
    CHECK_FALSE(flags.tie);

    MarketFlags truthful_flags;
    welfare_and_winner(g, truthful(g), &truthful_flags);
    CHECK_FALSE(truthful_flags.negative_trade);
}

namespace {

int count_simple_paths(const Graph& g, const Profile& p, int target) {
    NodeSet informed = informed_set(g, p);
    int count = 0;
    NodeSet onpath;
    std::function<void(int)> dfs = [&](int u) {
        onpath.add(u);
        if (u == target) ++count;
        if (p.reports[u])
            for (int v : p.reports[u]->diffusion & informed)
                if (!onpath.contains(v)) dfs(v);
        onpath.remove(u);
    };
    for (int r : p.seller_roots & informed) dfs(r);
    return count;
}

}  // namespace

TEST_CASE("the reference market has four simple routes to the far node") {
    Graph g = fig1();
    Profile p = truthful(g);
    CHECK(count_simple_paths(g, p, ix(g, "G")) == 4);
    CHECK(count_simple_paths(g, p, ix(g, "F")) == 2);
    CHECK(count_simple_paths(g, p, ix(g, "A")) == 2);
}

TEST_CASE("engine paths agree with exhaustive enumeration on random markets") {
    for (std::uint64_t seed = 1; seed <= 120; ++seed) {
        GenConfig cfg;
        cfg.n = 6;
        cfg.edge_prob = Rat(1, 2);
        cfg.value_max = 8;
        cfg.weight_max = 3;
        cfg.seed = seed;
        Graph g = gen_random(cfg);
        PropertyReport rep = check_oracle(g, truthful(g), "seed=" + std::to_string(seed));
        std::string first_violation =
            rep.violations.empty() ? std::string() : rep.violations.front().deviation;
        INFO(first_violation);
        CHECK(rep.passed());

        Graph z = g.zero_weight_view();
        CHECK(check_oracle(z, truthful(z)).passed());
    }
}

TEST_CASE("engine paths agree with enumeration under negative weights") {
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
        GenConfig cfg;
        cfg.n = 5;
        cfg.edge_prob = Rat(1, 2);
        cfg.value_max = 8;
        cfg.weight_max = 2;
        cfg.allow_negative_weights = true;
        cfg.seed = seed;
        Graph g = gen_random(cfg);
        CHECK(check_oracle(g, truthful(g)).passed());
    }
}
