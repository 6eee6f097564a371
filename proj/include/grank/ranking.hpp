#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "grank/ppr.hpp"
#include "grank/tpg.hpp"
#include "grank/types.hpp"

namespace grank {

/// Per-item goodness: the share of walk mass on the item's desirable side.
/// Undefined (defined=false) when neither representative was reached; such
/// items sort after every defined score.
struct GrScore {
    item_id item;
    double ppr_desirable = 0.0;
    double ppr_undesirable = 0.0;
    double gr = 0.0;
    bool defined = false;
};

struct RecommendationList {
    user_id user;
    std::uint32_t k = 0;
    std::vector<GrScore> entries;  // sorted: defined desc by gr, ties by item id; undefined last
};

/// GR(i) = PPR(i_d) / (PPR(i_d) + PPR(i_u)) for every item of the graph.
std::vector<GrScore> gr_scores(const Tpg& graph, const PprVector& ppr);

/// GR for a chosen subset of items (reads two vector entries per item).
std::vector<GrScore> score_items(const Tpg& graph, const PprVector& ppr,
                                 std::span<const item_id> items);

/// Sorts scores into ranking order: defined before undefined, higher gr first,
/// ascending item id on ties.
void sort_by_gr(std::vector<GrScore>& scores);

/// Top-k recommendation: personalized walk from the user node, GR scoring,
/// training items excluded, deterministic tie-break. Throws cold_start_error
/// for a user node with no edges.
RecommendationList recommend(const Tpg& graph, user_id user, std::uint32_t k, const PprConfig& cfg,
                             std::span<const item_id> train_profile);

/// Total GR order over all eligible (non-train) items; recommend(k) is its
/// k-prefix.
std::vector<GrScore> rank_all(const Tpg& graph, user_id user, const PprConfig& cfg,
                              std::span<const item_id> train_profile);

}  // namespace grank
