#include "grank/ranking.hpp"

#include <algorithm>

namespace grank {

namespace {

GrScore score_one(const Tpg& graph, const PprVector& ppr, item_id i) {
    GrScore s;
    s.item = i;
    s.ppr_desirable = ppr.values[graph.representative_node(i, Side::desirable)];
    s.ppr_undesirable = ppr.values[graph.representative_node(i, Side::undesirable)];
    const double denom = s.ppr_desirable + s.ppr_undesirable;
    if (denom > 0.0) {
        s.gr = s.ppr_desirable / denom;
        s.defined = true;
    }
    return s;
}

}  // namespace

std::vector<GrScore> gr_scores(const Tpg& graph, const PprVector& ppr) {
    if (ppr.values.size() != graph.node_count())
        throw validation_error("gr_scores: ppr vector does not match the graph");
    std::vector<GrScore> out;
    out.reserve(graph.item_count());
    for (item_id i = 0; i < graph.item_count(); ++i) out.push_back(score_one(graph, ppr, i));
    return out;
}

std::vector<GrScore> score_items(const Tpg& graph, const PprVector& ppr,
                                 std::span<const item_id> items) {
    if (ppr.values.size() != graph.node_count())
        throw validation_error("score_items: ppr vector does not match the graph");
    std::vector<GrScore> out;
    out.reserve(items.size());
    for (item_id i : items) out.push_back(score_one(graph, ppr, i));
    return out;
}

void sort_by_gr(std::vector<GrScore>& scores) {
    std::sort(scores.begin(), scores.end(), [](const GrScore& a, const GrScore& b) {
        if (a.defined != b.defined) return a.defined;
        if (a.defined && a.gr != b.gr) return a.gr > b.gr;
        return a.item < b.item;
    });
}

std::vector<GrScore> rank_all(const Tpg& graph, user_id user, const PprConfig& cfg,
                              std::span<const item_id> train_profile) {
    const std::uint32_t unode = graph.user_node(user);
    if (graph.degree(unode) == 0)
        throw cold_start_error("user " + std::to_string(user) +
                               " has no training observations in the graph");

    TransitionModel model(graph.adjacency());
    const PprVector ppr = personalized_pagerank(model, unode, cfg);

    std::vector<bool> seen(graph.item_count(), false);
    for (item_id i : train_profile)
        if (i < graph.item_count()) seen[i] = true;

    std::vector<GrScore> scores;
    scores.reserve(graph.item_count());
    for (item_id i = 0; i < graph.item_count(); ++i)
        if (!seen[i]) scores.push_back(score_one(graph, ppr, i));
    sort_by_gr(scores);
    return scores;
}

RecommendationList recommend(const Tpg& graph, user_id user, std::uint32_t k, const PprConfig& cfg,
                             std::span<const item_id> train_profile) {
    if (k < 1) throw validation_error("recommend: k must be >= 1");
    RecommendationList list;
    list.user = user;
    list.k = k;
    list.entries = rank_all(graph, user, cfg, train_profile);
    if (list.entries.size() > k) list.entries.resize(k);
    return list;
}

}  // namespace grank
