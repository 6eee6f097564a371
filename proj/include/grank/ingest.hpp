#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "grank/types.hpp"

namespace grank::ingest {

enum class DatasetFormat {
    movielens_tab,  // "u.data": user \t item \t rating \t timestamp
    movielens_dat,  // "ratings.dat": user::item::rating::timestamp
};

DatasetFormat format_from_name(const std::string& name);
std::string format_name(DatasetFormat fmt);

/// Bidirectional raw-id <-> dense-id mapping. Dense ids are assigned in
/// ascending raw-id order, so the mapping depends only on the id universe.
class IdMap {
public:
    static IdMap from_raw_ids(std::vector<std::int64_t> raw_ids);  // dedups and sorts

    std::uint32_t dense(std::int64_t raw) const;
    std::int64_t raw(std::uint32_t dense) const { return dense_to_raw_.at(dense); }
    std::uint32_t size() const { return static_cast<std::uint32_t>(dense_to_raw_.size()); }
    const std::vector<std::int64_t>& raw_ids() const { return dense_to_raw_; }

private:
    std::vector<std::int64_t> dense_to_raw_;
    std::unordered_map<std::int64_t, std::uint32_t> raw_to_dense_;
};

struct RatingData {
    std::vector<RatingRecord> records;  // dense ids
    IdMap users;
    IdMap items;
    double scale_min = 1.0;
    double scale_max = 5.0;
};

/// Parses a ratings file, validates the rating scale, and remaps all ids to
/// dense 0-based indices. Malformed lines and out-of-scale ratings carry the
/// offending line number in the thrown message.
RatingData parse_ratings(const std::string& path, DatasetFormat fmt);

/// Rule 1: every ordered pair of items rated by the same user with strictly
/// greater rating on the first becomes an observation. Ties produce nothing.
ObservationSet ratings_to_observations(std::span<const RatingRecord> records);

/// Sparse binary user x item feedback (per-user item lists).
struct BinaryFeedback {
    std::uint32_t user_count = 0;
    std::uint32_t item_count = 0;
    std::vector<std::vector<item_id>> items_by_user;  // size user_count

    void validate() const;
};

/// Rule 2: liked x disliked cross product per user. An item liked and disliked
/// by the same user keeps the rule's literal output (both orientations against
/// other items) and is reported through `warnings` when provided.
ObservationSet feedback_to_observations(const BinaryFeedback& likes, const BinaryFeedback& dislikes,
                                        std::vector<std::string>* warnings = nullptr);

/// Rule 3: bought x clicked-not-bought cross product per session, unioned.
ObservationSet sessions_to_observations(std::span<const Session> sessions);

/// Per-variant protocol split: users holding fewer than train_per_user +
/// min_test_items records are dropped outright; survivors contribute exactly
/// train_per_user uniformly sampled records to train, the rest to test.
/// Sampling streams are keyed by (seed, variant, user).
std::vector<Dataset> split(std::span<const RatingRecord> records, const SplitSpec& spec,
                           std::uint32_t user_count, std::uint32_t item_count);

}  // namespace grank::ingest
