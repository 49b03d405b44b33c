#include <catch2/catch_amalgamated.hpp>

#include <functional>
#include <utility>
#include <vector>

#include <dauction/critical.hpp>
#include <dauction/generator.hpp>
#include <dauction/paths.hpp>
#include <dauction/profile.hpp>

#include "fixtures.hpp"

using namespace dauction;
using fixtures::fig1;
using fixtures::fig1_zeroed;
using fixtures::ids_of;
using fixtures::ix;
using fixtures::nodes;

TEST_CASE("dependents are the nodes silenced by a removal") {
    Graph z = fig1_zeroed();
    Profile p = truthful(z);
    CHECK(dependents(z, p, ix(z, "F")) == nodes(z, {"F", "G", "H"}));
    CHECK(dependents(z, p, ix(z, "B")) ==
          nodes(z, {"B", "C", "D", "E", "F", "G", "H"}));
    CHECK(dependents(z, p, ix(z, "C")) == nodes(z, {"C"}));
    CHECK(dependents(z, p, ix(z, "E")) == nodes(z, {"E"}));
}

TEST_CASE("critical sequences order by shrinking dependent sets") {
    Graph z = fig1_zeroed();
    Profile p = truthful(z);
    CriticalSequence cs = critical_sequence(z, p, ix(z, "G"));
    CHECK(ids_of(z, cs.seq) == std::vector<std::string>{"B", "F", "G"});

    Graph g = fig1();
    CriticalSequence wf = critical_sequence(g, truthful(g), ix(g, "F"));
    CHECK(ids_of(g, wf.seq) == std::vector<std::string>{"B", "F"});

    CHECK_THROWS_AS(critical_sequence(g, remove_node(g, truthful(g), ix(g, "B")), ix(g, "F")),
                    std::invalid_argument);
}

TEST_CASE("consecutive critical nodes have properly nested dependents") {
    for (std::uint64_t seed = 1; seed <= 80; ++seed) {
        GenConfig cfg;
        cfg.n = 6;
        cfg.edge_prob = Rat(1, 3);
        cfg.weight_max = 0;
        cfg.seed = seed;
        Graph g = gen_random(cfg);
        Profile p = normalized(g, truthful(g));
        for (int target : informed_set(g, p)) {
            CriticalSequence cs = critical_sequence(g, p, target);
            for (std::size_t k = 0; k + 1 < cs.seq.size(); ++k) {
                NodeSet da = dependents(g, p, cs.seq[k]);
                NodeSet db = dependents(g, p, cs.seq[k + 1]);
                CHECK(db.subset_of(da));
                CHECK(db != da);
            }
        }
    }
}

namespace {

// Exhaustive ground truth: a node is critical for the target exactly when
// it lies on every simple trading path to it.
NodeSet path_intersection(const Graph& g, const Profile& p, int target) {
    NodeSet informed = informed_set(g, p);
    NodeSet common = informed;
    bool found = false;
    NodeSet onpath;
    std::vector<int> stack;
    std::function<void(int)> dfs = [&](int u) {
        onpath.add(u);
        stack.push_back(u);
        if (u == target) {
            NodeSet here;
            for (int x : stack) here.add(x);
            common &= here;
            found = true;
        } else if (p.reports[u]) {
            for (int v : p.reports[u]->diffusion & informed)
                if (!onpath.contains(v)) dfs(v);
        }
        stack.pop_back();
        onpath.remove(u);
    };
    for (int r : p.seller_roots & informed) dfs(r);
    return found ? common : NodeSet{};
}

}  // namespace

TEST_CASE("critical nodes are exactly the all-paths intersection") {
    for (std::uint64_t seed = 1; seed <= 80; ++seed) {
        GenConfig cfg;
        cfg.n = 6;
        cfg.edge_prob = Rat(2, 5);
        cfg.weight_max = 2;
        cfg.seed = seed;
        Graph g = gen_random(cfg);
        Profile p = normalized(g, truthful(g));
        for (int target : informed_set(g, p)) {
            CriticalSequence cs = critical_sequence(g, p, target);
            NodeSet from_sequence;
            for (int c : cs.seq) from_sequence.add(c);
            CHECK(from_sequence == path_intersection(g, p, target));
        }
    }
}

TEST_CASE("the in-edge cut silences exactly like deleting the next node") {
    Graph z = fig1_zeroed();
    Profile p = normalized(z, truthful(z));
    CriticalSequence cs = critical_sequence(z, p, ix(z, "G"));

    EdgeCut at_b = alpha_idm(z, p, cs.seq, 0);
    EdgeCut expect_b{{ix(z, "D"), ix(z, "F")}, {ix(z, "E"), ix(z, "F")}};
    CHECK(at_b == expect_b);

    EdgeCut at_f = alpha_idm(z, p, cs.seq, 1);
    EdgeCut expect_f{{ix(z, "F"), ix(z, "G")}, {ix(z, "H"), ix(z, "G")}};
    CHECK(at_f == expect_f);

    CHECK(alpha_idm(z, p, cs.seq, 2).empty());

    for (int pos = 0; pos + 1 < static_cast<int>(cs.seq.size()); ++pos) {
        Profile cut_market = remove_edges(z, p, alpha_idm(z, p, cs.seq, pos));
        Profile del_market = remove_node(z, p, cs.seq[pos + 1]);
        CHECK(informed_set(z, cut_market) == informed_set(z, del_market));
    }
}

TEST_CASE("the minimal out-edge cut keeps only edges that route onward") {
    Graph z = fig1_zeroed();
    Profile p = normalized(z, truthful(z));
    CriticalSequence cs = critical_sequence(z, p, ix(z, "G"));

    EdgeCut at_b = alpha_beta(z, p, cs.seq, 0);
    EdgeCut expect_b{{ix(z, "B"), ix(z, "D")}, {ix(z, "B"), ix(z, "E")}};
    CHECK(at_b == expect_b);

    EdgeCut at_f = alpha_beta(z, p, cs.seq, 1);
    EdgeCut expect_f{{ix(z, "F"), ix(z, "G")}, {ix(z, "F"), ix(z, "H")}};
    CHECK(at_f == expect_f);

    CHECK(alpha_beta(z, p, cs.seq, 2).empty());
}

TEST_CASE("every proper subset of the minimal cut fails to block") {
    Graph z = fig1_zeroed();
    Profile p = normalized(z, truthful(z));
    CriticalSequence cs = critical_sequence(z, p, ix(z, "G"));
    EdgeCut full = alpha_beta(z, p, cs.seq, 0);
    const int next = cs.seq[1];
    REQUIRE(full.size() == 2);
    CHECK_FALSE(informed_set(z, remove_edges(z, p, full)).contains(next));
    for (std::size_t skip = 0; skip < full.size(); ++skip) {
        EdgeCut partial;
        for (std::size_t k = 0; k < full.size(); ++k)
            if (k != skip) partial.push_back(full[k]);
        CHECK(informed_set(z, remove_edges(z, p, partial)).contains(next));
    }
}

namespace {

std::vector<std::pair<Graph, Profile>> validation_corpus() {
    std::vector<std::pair<Graph, Profile>> corpus;
    corpus.emplace_back(fig1_zeroed(), truthful(fig1_zeroed()));
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        GenConfig cfg;
        cfg.n = 5;
        cfg.edge_prob = Rat(1, 2);
        cfg.weight_max = 0;
        cfg.seed = seed;
        Graph g = gen_random(cfg);
        Profile p = truthful(g);
        corpus.emplace_back(std::move(g), std::move(p));
    }
    return corpus;
}

}  // namespace

TEST_CASE("both shipped cut strategies validate on a mixed corpus") {
    auto corpus = validation_corpus();
    CutValidation idm = validate_cut_strategy(idm_strategy(), corpus);
    INFO(idm.counterexample);
    CHECK(idm.passed);
    CutValidation beta = validate_cut_strategy(beta_strategy(), corpus);
    INFO(beta.counterexample);
    CHECK(beta.passed);
}

TEST_CASE("a non-blocking strategy is rejected with a counterexample") {
    CutStrategy empty{"empty", [](const Graph&, const Profile&, const std::vector<int>&, int) {
                          return EdgeCut{};
                      }};
    CutValidation res = validate_cut_strategy(empty, validation_corpus());
    CHECK_FALSE(res.passed);
    CHECK(res.counterexample.find("property 1") != std::string::npos);
}
