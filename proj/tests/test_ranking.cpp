#include <algorithm>
#include <set>
#include <vector>

#include "doctest.h"
#include "grank/ranking.hpp"
#include "support/dense_oracle.hpp"
#include "support/fixtures.hpp"

using namespace grank;
using grank::testing::dense_ppr;
using grank::testing::five_user_fixture;
using grank::testing::to_dense;
using grank::testing::two_item_fixture;

namespace {

PprConfig tight() {
    PprConfig cfg;
    cfg.tolerance = 1e-13;
    cfg.max_iterations = 5000;
    return cfg;
}

// PPR vector carrier for hand-planted representative masses
PprVector planted(const Tpg& g, std::vector<std::pair<std::uint32_t, double>> entries) {
    PprVector ppr;
    ppr.values.assign(g.node_count(), 0.0);
    for (auto [node, v] : entries) ppr.values[node] = v;
    return ppr;
}

}  // namespace

TEST_CASE("equal representative mass scores exactly one half") {
    const auto g = Tpg::build(1, 2, ObservationSet::from_unsorted({{0, 0, 1}}));
    const auto ppr = planted(g, {{g.representative_node(0, Side::desirable), 0.125},
                                 {g.representative_node(0, Side::undesirable), 0.125}});
    const auto scores = gr_scores(g, ppr);
    REQUIRE(scores.size() == 2);
    CHECK(scores[0].defined);
    CHECK(scores[0].gr == 0.5);  // exact, not approximate
}

TEST_CASE("an unreached undesirable side scores exactly one") {
    const auto g = Tpg::build(1, 2, ObservationSet::from_unsorted({{0, 0, 1}}));
    const auto ppr = planted(g, {{g.representative_node(0, Side::desirable), 0.2}});
    const auto scores = gr_scores(g, ppr);
    CHECK(scores[0].gr == 1.0);
}

TEST_CASE("both sides unreached leaves the score undefined and ranked last") {
    const auto g = Tpg::build(1, 2, ObservationSet::from_unsorted({{0, 0, 1}}));
    auto scores = gr_scores(g, planted(g, {{g.representative_node(1, Side::desirable), 0.3},
                                           {g.representative_node(1, Side::undesirable), 0.1}}));
    CHECK_FALSE(scores[0].defined);
    CHECK(scores[1].defined);
    sort_by_gr(scores);
    CHECK(scores[0].item == 1);
    CHECK(scores[1].item == 0);
}

TEST_CASE("every defined score stays inside the unit interval") {
    const auto g = Tpg::build(5, 4, five_user_fixture());
    const TransitionModel model(g.adjacency());
    for (user_id u = 0; u < 5; ++u) {
        const auto ppr = personalized_pagerank(model, g.user_node(u), tight());
        for (const auto& s : gr_scores(g, ppr)) {
            REQUIRE(s.defined);
            CHECK(s.gr >= 0.0);
            CHECK(s.gr <= 1.0);
        }
    }
}

TEST_CASE("a single observation ranks the preferred item first, oracle-checked") {
    const auto obs = ObservationSet::from_unsorted({{0, 0, 1}});  // A > B
    const auto g = Tpg::build(1, 2, obs);
    const auto list = recommend(g, 0, 2, tight(), {});
    REQUIRE(list.entries.size() == 2);
    CHECK(list.entries[0].item == 0);
    CHECK(list.entries[0].gr > 0.5);
    CHECK(list.entries[1].gr < 0.5);

    // independent dense solve of the same walk
    const auto oracle = dense_ppr(to_dense(g.adjacency()), g.user_node(0), 0.85);
    const double a_d = oracle[g.representative_node(0, Side::desirable)];
    const double a_u = oracle[g.representative_node(0, Side::undesirable)];
    const double b_d = oracle[g.representative_node(1, Side::desirable)];
    const double b_u = oracle[g.representative_node(1, Side::undesirable)];
    CHECK(a_d / (a_d + a_u) == doctest::Approx(list.entries[0].gr).epsilon(1e-8));
    CHECK(b_d / (b_d + b_u) == doctest::Approx(list.entries[1].gr).epsilon(1e-8));
    CHECK(a_d / (a_d + a_u) > 0.5);
    CHECK(b_d / (b_d + b_u) < 0.5);
}

TEST_CASE("walk mass favors the agreeing user over the opposing one") {
    // users 0 and 1 share a preference node; user 2 holds the opposite view
    const auto g = Tpg::build(3, 2, two_item_fixture());
    const auto oracle = dense_ppr(to_dense(g.adjacency()), g.user_node(0), 0.85);
    CHECK(oracle[g.user_node(1)] > oracle[g.user_node(2)]);

    const TransitionModel model(g.adjacency());
    const auto ppr = personalized_pagerank(model, g.user_node(0), tight());
    CHECK(ppr.values[g.user_node(1)] > ppr.values[g.user_node(2)]);
}

TEST_CASE("fixture ranking matches the exhaustive dense-oracle ordering") {
    const auto g = Tpg::build(5, 4, five_user_fixture());
    for (user_id u = 0; u < 5; ++u) {
        const auto ranked = rank_all(g, u, tight(), {});
        const auto oracle = dense_ppr(to_dense(g.adjacency()), g.user_node(u), 0.85);

        std::vector<GrScore> expect;
        for (item_id i = 0; i < 4; ++i) {
            GrScore s;
            s.item = i;
            s.ppr_desirable = oracle[g.representative_node(i, Side::desirable)];
            s.ppr_undesirable = oracle[g.representative_node(i, Side::undesirable)];
            const double denom = s.ppr_desirable + s.ppr_undesirable;
            s.defined = denom > 0.0;
            if (s.defined) s.gr = s.ppr_desirable / denom;
            expect.push_back(s);
        }
        sort_by_gr(expect);
        REQUIRE(ranked.size() == expect.size());
        for (std::size_t i = 0; i < ranked.size(); ++i) {
            CHECK(ranked[i].item == expect[i].item);
            CHECK(ranked[i].gr == doctest::Approx(expect[i].gr).epsilon(1e-7));
        }
    }
}

TEST_CASE("scaling the walk vector does not move the scores") {
    const auto g = Tpg::build(5, 4, five_user_fixture());
    const TransitionModel model(g.adjacency());
    auto ppr = personalized_pagerank(model, g.user_node(2), tight());
    const auto base = gr_scores(g, ppr);
    for (auto& v : ppr.values) v *= 40.0;
    const auto scaled = gr_scores(g, ppr);
    for (std::size_t i = 0; i < base.size(); ++i) {
        CHECK(scaled[i].gr == doctest::Approx(base[i].gr).epsilon(1e-12));
        CHECK(scaled[i].defined == base[i].defined);
    }
}

TEST_CASE("training items never reappear in the recommendation") {
    const auto g = Tpg::build(5, 4, five_user_fixture());
    const std::vector<item_id> train{0, 3};
    const auto list = recommend(g, 2, 10, tight(), train);
    for (const auto& e : list.entries) {
        CHECK(e.item != 0);
        CHECK(e.item != 3);
    }
    CHECK(list.entries.size() == 2);  // only items 1 and 2 remain
}

TEST_CASE("an oversized k returns the eligible list without padding") {
    const auto g = Tpg::build(5, 4, five_user_fixture());
    const auto list = recommend(g, 0, 50, tight(), {});
    CHECK(list.entries.size() == 4);
    CHECK(list.k == 50);
}

TEST_CASE("recommend is the k-prefix of rank_all") {
    const auto g = Tpg::build(5, 4, five_user_fixture());
    const auto all = rank_all(g, 3, tight(), {});
    const auto top2 = recommend(g, 3, 2, tight(), {});
    REQUIRE(top2.entries.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) CHECK(top2.entries[i].item == all[i].item);

    // and the full order is a permutation of the item universe
    std::set<item_id> seen;
    for (const auto& s : all) seen.insert(s.item);
    CHECK(seen.size() == 4);
}

TEST_CASE("a user with no observations is a cold start") {
    // user 1 exists but never expressed a preference
    const auto g = Tpg::build(2, 2, ObservationSet::from_unsorted({{0, 0, 1}}));
    CHECK_THROWS_AS(recommend(g, 1, 2, tight(), {}), cold_start_error);
    CHECK_THROWS_AS(rank_all(g, 1, tight(), {}), cold_start_error);
}

TEST_CASE("rank_all rejects k of zero and foreign ppr vectors") {
    const auto g = Tpg::build(1, 2, ObservationSet::from_unsorted({{0, 0, 1}}));
    CHECK_THROWS_AS(recommend(g, 0, 0, tight(), {}), validation_error);

    PprVector wrong;
    wrong.values.assign(3, 0.0);
    CHECK_THROWS_AS(gr_scores(g, wrong), validation_error);
}

TEST_CASE("gr ties break toward the smaller item id") {
    const auto g = Tpg::build(1, 2, ObservationSet::from_unsorted({{0, 0, 1}}));
    std::vector<GrScore> scores;
    GrScore a;
    a.item = 1;
    a.gr = 0.5;
    a.defined = true;
    GrScore b = a;
    b.item = 0;
    scores.push_back(a);
    scores.push_back(b);
    sort_by_gr(scores);
    CHECK(scores[0].item == 0);
    CHECK(scores[1].item == 1);
}
