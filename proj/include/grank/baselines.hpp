#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "grank/csr.hpp"
#include "grank/ppr.hpp"
#include "grank/types.hpp"

namespace grank::baselines {

struct ScoredItem {
    item_id item;
    double score;
    bool defined = true;
};

struct ScoredList {
    user_id user;
    std::uint32_t k = 0;
    std::vector<ScoredItem> entries;
};

/// User-item interaction graph: users occupy [0, M), items [M, M+N). Weighted
/// mode carries the rating on each edge.
class BipartiteGraph {
public:
    static BipartiteGraph build(std::uint32_t user_count, std::uint32_t item_count,
                                std::span<const RatingRecord> train, bool weighted);

    std::uint32_t user_count() const { return m_; }
    std::uint32_t item_count() const { return n_; }
    bool weighted() const { return weighted_; }
    std::uint32_t user_node(user_id u) const { return u; }
    std::uint32_t item_node(item_id i) const { return m_ + i; }
    const CsrGraph& adjacency() const { return adj_; }

private:
    std::uint32_t m_ = 0;
    std::uint32_t n_ = 0;
    bool weighted_ = false;
    CsrGraph adj_;
};

/// Random walk with restart at the user; items ranked by their node's walk
/// probability, training items excluded.
ScoredList bgr_recommend(const BipartiteGraph& graph, user_id user, std::uint32_t k,
                         const PprConfig& cfg, std::span<const item_id> train_profile);

/// Train ratings in per-user sorted rows.
class RatingMatrix {
public:
    static RatingMatrix build(std::uint32_t user_count, std::uint32_t item_count,
                              std::span<const RatingRecord> records);

    std::uint32_t user_count() const { return m_; }
    std::uint32_t item_count() const { return n_; }
    std::span<const std::pair<item_id, double>> row(user_id u) const { return by_user_[u]; }

private:
    std::uint32_t m_ = 0;
    std::uint32_t n_ = 0;
    std::vector<std::vector<std::pair<item_id, double>>> by_user_;
};

struct KendallSimilarity {
    user_id u;
    user_id v;
    double tau = 0.0;
    std::uint64_t common_pairs = 0;

    bool defined() const { return common_pairs > 0; }
};

/// Kendall rank correlation over the items both users rated, counting only
/// pairs strictly ordered by both. Undefined when no such pair exists.
KendallSimilarity kendall_similarity(user_id u, user_id v, const RatingMatrix& train);

struct EigenRankConfig {
    std::uint32_t neighborhood_size = 100;
    double epsilon = 0.85;
    double tolerance = 1e-12;
    std::uint32_t max_iterations = 500;
};

/// Target user's pairwise preference scores over the chain items (the items
/// rated by the selected neighborhood), psi(i,j) = -psi(j,i) > 0 when the
/// neighborhood prefers i over j. Entries with no supporting neighbor stay 0.
struct PreferenceMatrix {
    std::vector<item_id> chain_items;  // ascending
    std::vector<double> psi;           // row-major, chain x chain

    std::size_t size() const { return chain_items.size(); }
    double at(std::size_t i, std::size_t j) const { return psi[i * chain_items.size() + j]; }
};

PreferenceMatrix eigenrank_preference_matrix(const RatingMatrix& train, user_id target,
                                             const EigenRankConfig& cfg);

/// Stationary distribution of the epsilon-damped item chain induced by the
/// preference matrix. Parallel to chain_items.
struct EigenScores {
    std::vector<item_id> chain_items;
    std::vector<double> stationary;
};

EigenScores eigenrank_scores(const RatingMatrix& train, user_id target,
                             const EigenRankConfig& cfg);

/// Neighborhood random-walk ranking: Kendall-selected neighborhood, preference
/// matrix, damped Markov chain over items. Items outside the chain are
/// undefined and rank last; training items are excluded.
ScoredList eigenrank_recommend(const RatingMatrix& train, user_id target, std::uint32_t k,
                               const EigenRankConfig& cfg, std::span<const item_id> train_profile);

}  // namespace grank::baselines
