#include "grank/baselines.hpp"

#include <algorithm>
#include <cmath>

namespace grank::baselines {

BipartiteGraph BipartiteGraph::build(std::uint32_t user_count, std::uint32_t item_count,
                                     std::span<const RatingRecord> train, bool weighted) {
    BipartiteGraph g;
    g.m_ = user_count;
    g.n_ = item_count;
    g.weighted_ = weighted;

    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    std::vector<double> weights;
    edges.reserve(train.size());
    if (weighted) weights.reserve(train.size());
    for (const auto& r : train) {
        if (r.user >= user_count || r.item >= item_count)
            throw build_error("bipartite: record outside the declared universe");
        if (weighted && r.rating <= 0.0)
            throw build_error("bipartite: weighted mode requires positive ratings");
        edges.emplace_back(r.user, g.item_node(r.item));
        if (weighted) weights.push_back(r.rating);
    }
    g.adj_ = CsrGraph::from_edges(user_count + item_count, edges, weights);
    return g;
}

ScoredList bgr_recommend(const BipartiteGraph& graph, user_id user, std::uint32_t k,
                         const PprConfig& cfg, std::span<const item_id> train_profile) {
    if (user >= graph.user_count()) throw validation_error("bgr: user id out of range");
    const std::uint32_t unode = graph.user_node(user);
    if (graph.adjacency().degree(unode) == 0)
        throw cold_start_error("user " + std::to_string(user) + " has no training ratings");

    TransitionModel model(graph.adjacency());
    const PprVector ppr = personalized_pagerank(model, unode, cfg);

    std::vector<bool> seen(graph.item_count(), false);
    for (item_id i : train_profile)
        if (i < graph.item_count()) seen[i] = true;

    ScoredList list;
    list.user = user;
    list.k = k;
    list.entries.reserve(graph.item_count());
    for (item_id i = 0; i < graph.item_count(); ++i)
        if (!seen[i]) list.entries.push_back({i, ppr.values[graph.item_node(i)], true});
    std::sort(list.entries.begin(), list.entries.end(), [](const ScoredItem& a, const ScoredItem& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.item < b.item;
    });
    if (list.entries.size() > k) list.entries.resize(k);
    return list;
}

RatingMatrix RatingMatrix::build(std::uint32_t user_count, std::uint32_t item_count,
                                 std::span<const RatingRecord> records) {
    RatingMatrix m;
    m.m_ = user_count;
    m.n_ = item_count;
    m.by_user_.resize(user_count);
    for (const auto& r : records) {
        if (r.user >= user_count || r.item >= item_count)
            throw build_error("rating matrix: record outside the declared universe");
        m.by_user_[r.user].emplace_back(r.item, r.rating);
    }
    for (auto& row : m.by_user_) std::sort(row.begin(), row.end());
    return m;
}

KendallSimilarity kendall_similarity(user_id u, user_id v, const RatingMatrix& train) {
    KendallSimilarity sim{u, v, 0.0, 0};

    // ratings on common items, via merge over the sorted rows
    std::vector<std::pair<double, double>> common;
    auto ru = train.row(u);
    auto rv = train.row(v);
    std::size_t a = 0, b = 0;
    while (a < ru.size() && b < rv.size()) {
        if (ru[a].first < rv[b].first) {
            ++a;
        } else if (rv[b].first < ru[a].first) {
            ++b;
        } else {
            common.emplace_back(ru[a].second, rv[b].second);
            ++a;
            ++b;
        }
    }

    std::uint64_t concordant = 0, discordant = 0;
    for (std::size_t i = 0; i < common.size(); ++i) {
        for (std::size_t j = i + 1; j < common.size(); ++j) {
            const double du = common[i].first - common[j].first;
            const double dv = common[i].second - common[j].second;
            if (du == 0.0 || dv == 0.0) continue;  // tie for either user: not comparable
            if (du * dv > 0.0)
                ++concordant;
            else
                ++discordant;
        }
    }
    sim.common_pairs = concordant + discordant;
    if (sim.common_pairs > 0)
        sim.tau = (static_cast<double>(concordant) - static_cast<double>(discordant)) /
                  static_cast<double>(sim.common_pairs);
    return sim;
}

namespace {

// top-`size` users by tau (descending, ties by id), defined similarities only
std::vector<KendallSimilarity> select_neighborhood(const RatingMatrix& train, user_id target,
                                                   std::uint32_t size) {
    std::vector<KendallSimilarity> sims;
    for (user_id v = 0; v < train.user_count(); ++v) {
        if (v == target) continue;
        KendallSimilarity s = kendall_similarity(target, v, train);
        if (s.defined()) sims.push_back(s);
    }
    std::sort(sims.begin(), sims.end(), [](const KendallSimilarity& a, const KendallSimilarity& b) {
        if (a.tau != b.tau) return a.tau > b.tau;
        return a.v < b.v;
    });
    if (sims.size() > size) sims.resize(size);
    return sims;
}

}  // namespace

PreferenceMatrix eigenrank_preference_matrix(const RatingMatrix& train, user_id target,
                                             const EigenRankConfig& cfg) {
    if (target >= train.user_count()) throw validation_error("eigenrank: user id out of range");
    const auto neighborhood = select_neighborhood(train, target, cfg.neighborhood_size);
    if (neighborhood.empty())
        throw cold_start_error("user " + std::to_string(target) +
                               " has no neighbor with a defined Kendall similarity");

    // chain = items rated inside the neighborhood
    std::vector<item_id> chain;
    for (const auto& s : neighborhood)
        for (const auto& [item, rating] : train.row(s.v)) chain.push_back(item);
    std::sort(chain.begin(), chain.end());
    chain.erase(std::unique(chain.begin(), chain.end()), chain.end());

    std::vector<std::uint32_t> chain_index(train.item_count(), 0);
    for (std::size_t c = 0; c < chain.size(); ++c) chain_index[chain[c]] = static_cast<std::uint32_t>(c);

    const std::size_t nc = chain.size();
    std::vector<double> num(nc * nc, 0.0), den(nc * nc, 0.0);
    for (const auto& s : neighborhood) {
        const auto row = train.row(s.v);
        const double w = s.tau;
        const double aw = std::abs(s.tau);
        for (std::size_t a = 0; a < row.size(); ++a) {
            for (std::size_t b = a + 1; b < row.size(); ++b) {
                if (row[a].second == row[b].second) continue;  // a tie states no preference
                const std::size_t i = chain_index[row[a].first];
                const std::size_t j = chain_index[row[b].first];
                const double diff = row[a].second - row[b].second;
                num[i * nc + j] += w * diff;
                num[j * nc + i] -= w * diff;
                den[i * nc + j] += aw;
                den[j * nc + i] += aw;
            }
        }
    }

    PreferenceMatrix pm;
    pm.chain_items = std::move(chain);
    pm.psi.assign(nc * nc, 0.0);
    for (std::size_t e = 0; e < pm.psi.size(); ++e)
        if (den[e] > 0.0) pm.psi[e] = num[e] / den[e];
    return pm;
}

EigenScores eigenrank_scores(const RatingMatrix& train, user_id target,
                             const EigenRankConfig& cfg) {
    const PreferenceMatrix pm = eigenrank_preference_matrix(train, target, cfg);
    const std::size_t nc = pm.size();

    // column-stochastic chain: P(i -> j) proportional to exp(psi(j, i))
    std::vector<double> transition(nc * nc);
    for (std::size_t i = 0; i < nc; ++i) {
        double total = 0.0;
        for (std::size_t j = 0; j < nc; ++j) {
            const double w = std::exp(pm.at(j, i));
            transition[i * nc + j] = w;
            total += w;
        }
        for (std::size_t j = 0; j < nc; ++j) transition[i * nc + j] /= total;
    }

    const double eps = cfg.epsilon;
    const double uniform = (1.0 - eps) / static_cast<double>(nc);
    std::vector<double> pi(nc, 1.0 / static_cast<double>(nc)), next(nc);
    for (std::uint32_t t = 0; t < cfg.max_iterations; ++t) {
        std::fill(next.begin(), next.end(), uniform);
        for (std::size_t i = 0; i < nc; ++i) {
            const double share = eps * pi[i];
            if (share == 0.0) continue;
            for (std::size_t j = 0; j < nc; ++j) next[j] += share * transition[i * nc + j];
        }
        double diff = 0.0;
        for (std::size_t j = 0; j < nc; ++j) diff += std::abs(next[j] - pi[j]);
        pi.swap(next);
        if (diff < cfg.tolerance) break;
    }

    EigenScores scores;
    scores.chain_items = pm.chain_items;
    scores.stationary = std::move(pi);
    return scores;
}

ScoredList eigenrank_recommend(const RatingMatrix& train, user_id target, std::uint32_t k,
                               const EigenRankConfig& cfg, std::span<const item_id> train_profile) {
    if (train.row(target).empty())
        throw cold_start_error("user " + std::to_string(target) + " has no training ratings");
    const EigenScores scores = eigenrank_scores(train, target, cfg);

    std::vector<double> by_item(train.item_count(), 0.0);
    std::vector<bool> in_chain(train.item_count(), false);
    for (std::size_t c = 0; c < scores.chain_items.size(); ++c) {
        by_item[scores.chain_items[c]] = scores.stationary[c];
        in_chain[scores.chain_items[c]] = true;
    }

    std::vector<bool> seen(train.item_count(), false);
    for (item_id i : train_profile)
        if (i < train.item_count()) seen[i] = true;

    ScoredList list;
    list.user = target;
    list.k = k;
    for (item_id i = 0; i < train.item_count(); ++i)
        if (!seen[i]) list.entries.push_back({i, by_item[i], in_chain[i]});
    std::sort(list.entries.begin(), list.entries.end(), [](const ScoredItem& a, const ScoredItem& b) {
        if (a.defined != b.defined) return a.defined;
        if (a.defined && a.score != b.score) return a.score > b.score;
        return a.item < b.item;
    });
    if (list.entries.size() > k) list.entries.resize(k);
    return list;
}

}  // namespace grank::baselines
