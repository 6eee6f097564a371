#include <cmath>
#include <vector>

#include "doctest.h"
#include "grank/baselines.hpp"
#include "grank/rng.hpp"
#include "support/dense_oracle.hpp"

using namespace grank;
using namespace grank::baselines;
using grank::testing::dense_ppr;
using grank::testing::to_dense;

namespace {

RatingRecord rec(user_id u, item_id i, double r) { return {u, i, r, 0}; }

PprConfig tight() {
    PprConfig cfg;
    cfg.tolerance = 1e-13;
    cfg.max_iterations = 5000;
    return cfg;
}

}  // namespace

TEST_CASE("a single rated item is excluded, leaving an empty list") {
    const std::vector<RatingRecord> train{rec(0, 0, 4)};
    const auto g = BipartiteGraph::build(1, 1, train, false);
    const std::vector<item_id> profile{0};
    const auto list = bgr_recommend(g, 0, 5, tight(), profile);
    CHECK(list.entries.empty());
}

TEST_CASE("rating weight pulls walk mass toward the heavier item") {
    const std::vector<RatingRecord> train{rec(0, 0, 5), rec(0, 1, 1)};
    const auto g = BipartiteGraph::build(1, 2, train, true);
    REQUIRE(g.weighted());

    const TransitionModel model(g.adjacency());
    const auto ppr = personalized_pagerank(model, g.user_node(0), tight());
    CHECK(ppr.values[g.item_node(0)] > ppr.values[g.item_node(1)]);

    // weighted dense solve agrees
    const auto oracle = dense_ppr(to_dense(g.adjacency()), g.user_node(0), 0.85);
    CHECK(oracle[g.item_node(0)] > oracle[g.item_node(1)]);
    double l1 = 0.0;
    for (std::size_t i = 0; i < oracle.size(); ++i) l1 += std::abs(oracle[i] - ppr.values[i]);
    CHECK(l1 < 1e-8);

    const auto list = bgr_recommend(g, 0, 2, tight(), {});
    REQUIRE(list.entries.size() == 2);
    CHECK(list.entries[0].item == 0);
}

TEST_CASE("without weights the same star is perfectly symmetric") {
    const std::vector<RatingRecord> train{rec(0, 0, 5), rec(0, 1, 1)};
    const auto g = BipartiteGraph::build(1, 2, train, false);
    const TransitionModel model(g.adjacency());
    const auto ppr = personalized_pagerank(model, g.user_node(0), tight());
    CHECK(ppr.values[g.item_node(0)] == ppr.values[g.item_node(1)]);

    // equal scores fall back to ascending item ids
    const auto list = bgr_recommend(g, 0, 2, tight(), {});
    REQUIRE(list.entries.size() == 2);
    CHECK(list.entries[0].item == 0);
    CHECK(list.entries[1].item == 1);
}

TEST_CASE("bgr walk scores rank co-consumed items above disconnected ones") {
    // users 0,1 share item 0; user 1 also rated item 1; item 2 belongs to user 2 only
    const std::vector<RatingRecord> train{rec(0, 0, 4), rec(1, 0, 5), rec(1, 1, 3), rec(2, 2, 2)};
    const auto g = BipartiteGraph::build(3, 3, train, false);
    const std::vector<item_id> profile{0};
    const auto list = bgr_recommend(g, 0, 3, tight(), profile);
    REQUIRE(list.entries.size() == 2);
    CHECK(list.entries[0].item == 1);
    CHECK(list.entries[0].score > list.entries[1].score);
}

TEST_CASE("bgr refuses users outside or disconnected from the graph") {
    const std::vector<RatingRecord> train{rec(0, 0, 4)};
    const auto g = BipartiteGraph::build(2, 1, train, false);
    CHECK_THROWS_AS(bgr_recommend(g, 1, 2, tight(), {}), cold_start_error);
    CHECK_THROWS_AS(bgr_recommend(g, 7, 2, tight(), {}), validation_error);
}

TEST_CASE("bipartite construction validates records") {
    const std::vector<RatingRecord> outside{rec(0, 5, 4)};
    CHECK_THROWS_AS(BipartiteGraph::build(1, 2, outside, false), build_error);
    const std::vector<RatingRecord> nonpositive{rec(0, 0, 0.0)};
    CHECK_THROWS_AS(BipartiteGraph::build(1, 2, nonpositive, true), build_error);
}

TEST_CASE("identical rating vectors have Kendall tau of one") {
    const std::vector<RatingRecord> train{rec(0, 0, 5), rec(0, 1, 3), rec(0, 2, 1),
                                          rec(1, 0, 5), rec(1, 1, 3), rec(1, 2, 1)};
    const auto m = RatingMatrix::build(2, 3, train);
    const auto sim = kendall_similarity(0, 1, m);
    REQUIRE(sim.defined());
    CHECK(sim.tau == 1.0);
    CHECK(sim.common_pairs == 3);
}

TEST_CASE("reversed preferences have Kendall tau of minus one") {
    const std::vector<RatingRecord> train{rec(0, 0, 5), rec(0, 1, 3), rec(0, 2, 1),
                                          rec(1, 0, 1), rec(1, 1, 3), rec(1, 2, 5)};
    const auto m = RatingMatrix::build(2, 3, train);
    CHECK(kendall_similarity(0, 1, m).tau == -1.0);
}

TEST_CASE("one discordant common pair gives tau minus one") {
    // u:{A=5,B=3}, v:{A=2,B=4}: zero concordant, one discordant
    const std::vector<RatingRecord> train{rec(0, 0, 5), rec(0, 1, 3), rec(1, 0, 2), rec(1, 1, 4)};
    const auto m = RatingMatrix::build(2, 2, train);
    const auto sim = kendall_similarity(0, 1, m);
    CHECK(sim.common_pairs == 1);
    CHECK(sim.tau == -1.0);
}

TEST_CASE("ties on either side drop the pair from the count") {
    const std::vector<RatingRecord> train{rec(0, 0, 3), rec(0, 1, 3), rec(1, 0, 2), rec(1, 1, 5)};
    const auto m = RatingMatrix::build(2, 2, train);
    const auto sim = kendall_similarity(0, 1, m);
    CHECK_FALSE(sim.defined());
    CHECK(sim.tau == 0.0);
}

TEST_CASE("users with no common items have undefined similarity") {
    const std::vector<RatingRecord> train{rec(0, 0, 3), rec(1, 1, 2)};
    const auto m = RatingMatrix::build(2, 2, train);
    CHECK_FALSE(kendall_similarity(0, 1, m).defined());
}

TEST_CASE("Kendall similarity is symmetric in its users") {
    for (std::uint64_t trial = 0; trial < 10; ++trial) {
        KeyedRng rng(53, trial);
        std::vector<RatingRecord> train;
        for (user_id u = 0; u < 2; ++u)
            for (item_id i = 0; i < 6; ++i)
                if (rng.below(3) != 0) train.push_back(rec(u, i, 1.0 + static_cast<double>(rng.below(5))));
        const auto m = RatingMatrix::build(2, 6, train);
        const auto uv = kendall_similarity(0, 1, m);
        const auto vu = kendall_similarity(1, 0, m);
        CHECK(uv.tau == vu.tau);
        CHECK(uv.common_pairs == vu.common_pairs);
    }
}

TEST_CASE("a single tau-one neighbor hands over its rating order") {
    // target shares items 0,1 with the neighbor; the neighbor also rated item 2
    const std::vector<RatingRecord> train{rec(0, 0, 5), rec(0, 1, 3),
                                          rec(1, 0, 5), rec(1, 1, 3), rec(1, 2, 1)};
    const auto m = RatingMatrix::build(2, 3, train);
    EigenRankConfig cfg;

    const auto pm = eigenrank_preference_matrix(m, 0, cfg);
    REQUIRE(pm.chain_items == std::vector<item_id>{0, 1, 2});
    // neighbor's strict pairs, weighted by tau=1: psi = rating differences
    CHECK(pm.at(0, 1) == 2.0);
    CHECK(pm.at(0, 2) == 4.0);
    CHECK(pm.at(1, 2) == 2.0);

    const auto scores = eigenrank_scores(m, 0, cfg);
    REQUIRE(scores.stationary.size() == 3);
    CHECK(scores.stationary[0] > scores.stationary[1]);
    CHECK(scores.stationary[1] > scores.stationary[2]);

    // the returned vector satisfies the damped balance equation
    const std::size_t nc = 3;
    for (std::size_t j = 0; j < nc; ++j) {
        double acc = (1.0 - cfg.epsilon) / nc;
        for (std::size_t i = 0; i < nc; ++i) {
            double total = 0.0;
            for (std::size_t jj = 0; jj < nc; ++jj) total += std::exp(pm.at(jj, i));
            acc += cfg.epsilon * scores.stationary[i] * std::exp(pm.at(j, i)) / total;
        }
        CHECK(acc == doctest::Approx(scores.stationary[j]).epsilon(1e-9));
    }

    // full ranking over unseen items: 2 is the only one left
    const std::vector<item_id> profile{0, 1};
    const auto list = eigenrank_recommend(m, 0, 5, cfg, profile);
    REQUIRE(list.entries.size() == 1);
    CHECK(list.entries[0].item == 2);
    CHECK(list.entries[0].defined);
}

TEST_CASE("preference matrix is skew-symmetric with a zero diagonal") {
    KeyedRng rng(59);
    std::vector<RatingRecord> train;
    for (user_id u = 0; u < 6; ++u)
        for (item_id i = 0; i < 8; ++i)
            if (rng.below(4) != 0) train.push_back(rec(u, i, 1.0 + static_cast<double>(rng.below(5))));
    const auto m = RatingMatrix::build(6, 8, train);
    EigenRankConfig cfg;
    for (user_id target = 0; target < 6; ++target) {
        PreferenceMatrix pm;
        try {
            pm = eigenrank_preference_matrix(m, target, cfg);
        } catch (const cold_start_error&) {
            continue;
        }
        const std::size_t nc = pm.size();
        for (std::size_t i = 0; i < nc; ++i) {
            CHECK(pm.at(i, i) == 0.0);
            for (std::size_t j = 0; j < nc; ++j)
                CHECK(pm.at(i, j) == doctest::Approx(-pm.at(j, i)).epsilon(1e-12));
        }
    }
}

TEST_CASE("items the neighborhood never compared stay level and split by id") {
    // neighbor rates items 2 and 3 identically, so no preference flows between them
    const std::vector<RatingRecord> train{rec(0, 0, 5), rec(0, 1, 1),
                                          rec(1, 0, 5), rec(1, 1, 1), rec(1, 2, 3), rec(1, 3, 3)};
    const auto m = RatingMatrix::build(2, 4, train);
    EigenRankConfig cfg;

    const auto pm = eigenrank_preference_matrix(m, 0, cfg);
    const auto scores = eigenrank_scores(m, 0, cfg);
    REQUIRE(scores.chain_items == std::vector<item_id>{0, 1, 2, 3});
    CHECK(pm.at(2, 3) == 0.0);
    CHECK(scores.stationary[2] == scores.stationary[3]);

    const std::vector<item_id> profile{0, 1};
    const auto list = eigenrank_recommend(m, 0, 5, cfg, profile);
    REQUIRE(list.entries.size() == 2);
    CHECK(list.entries[0].item == 2);  // equal score, smaller id first
    CHECK(list.entries[1].item == 3);
}

TEST_CASE("an empty neighborhood is a cold start") {
    // both users rated the same single item: no comparable pair anywhere
    const std::vector<RatingRecord> train{rec(0, 0, 5), rec(1, 0, 3)};
    const auto m = RatingMatrix::build(2, 1, train);
    EigenRankConfig cfg;
    CHECK_THROWS_AS(eigenrank_preference_matrix(m, 0, cfg), cold_start_error);

    // a neighborhood capped at zero behaves the same
    const std::vector<RatingRecord> rich{rec(0, 0, 5), rec(0, 1, 3), rec(1, 0, 5), rec(1, 1, 3)};
    const auto m2 = RatingMatrix::build(2, 2, rich);
    EigenRankConfig zero;
    zero.neighborhood_size = 0;
    CHECK_THROWS_AS(eigenrank_recommend(m2, 0, 2, zero, {}), cold_start_error);

    // a user with no ratings at all is cold before any neighborhood forms
    const auto m3 = RatingMatrix::build(2, 1, std::vector<RatingRecord>{rec(1, 0, 3)});
    CHECK_THROWS_AS(eigenrank_recommend(m3, 0, 2, cfg, {}), cold_start_error);
}

TEST_CASE("the neighborhood cap keeps the highest-tau users") {
    // target agrees with users 1,2 and disagrees with user 3
    const std::vector<RatingRecord> train{
        rec(0, 0, 5), rec(0, 1, 1),
        rec(1, 0, 5), rec(1, 1, 1), rec(1, 2, 4),
        rec(2, 0, 4), rec(2, 1, 2), rec(2, 3, 4),
        rec(3, 0, 1), rec(3, 1, 5), rec(3, 4, 4),
    };
    const auto m = RatingMatrix::build(4, 5, train);
    EigenRankConfig cfg;
    cfg.neighborhood_size = 2;

    // with the cap at 2, user 3's items never enter the chain
    const auto pm = eigenrank_preference_matrix(m, 0, cfg);
    CHECK(pm.chain_items == std::vector<item_id>{0, 1, 2, 3});

    EigenRankConfig wide;
    const auto pm_all = eigenrank_preference_matrix(m, 0, wide);
    CHECK(pm_all.chain_items == std::vector<item_id>{0, 1, 2, 3, 4});
}

TEST_CASE("rating matrix rows come back sorted by item") {
    const std::vector<RatingRecord> train{rec(0, 2, 1), rec(0, 0, 5), rec(0, 1, 3)};
    const auto m = RatingMatrix::build(1, 3, train);
    const auto row = m.row(0);
    REQUIRE(row.size() == 3);
    CHECK(row[0].first == 0);
    CHECK(row[1].first == 1);
    CHECK(row[2].first == 2);
    CHECK_THROWS_AS(RatingMatrix::build(1, 1, std::vector<RatingRecord>{rec(0, 5, 3)}),
                    build_error);
}
