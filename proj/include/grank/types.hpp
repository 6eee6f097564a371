#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace grank {

using user_id = std::uint32_t;
using item_id = std::uint32_t;

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct parse_error : error {
    using error::error;
};
struct validation_error : error {
    using error::error;
};
struct build_error : error {
    using error::error;
};
struct cold_start_error : error {
    using error::error;
};
struct io_error : error {
    using error::error;
};

/// One stated preference: `user` prefers `desirable` over `undesirable`.
struct Observation {
    user_id user;
    item_id desirable;
    item_id undesirable;

    friend auto operator<=>(const Observation&, const Observation&) = default;
};

struct RatingRecord {
    user_id user;
    item_id item;
    double rating;
    std::int64_t timestamp = 0;  // parsed but unused by the sampling protocol
};

/// One implicit-feedback session: items bought and items clicked but not bought.
struct Session {
    user_id user;
    std::vector<item_id> bought;
    std::vector<item_id> clicked_not_bought;
};

struct SplitSpec {
    std::uint32_t train_per_user = 50;
    std::uint32_t min_test_items = 10;
    std::uint32_t variants = 5;
    std::uint64_t rng_seed = 0;

    void validate() const {
        if (train_per_user < 1) throw validation_error("split: train_per_user must be >= 1");
        if (min_test_items < 1) throw validation_error("split: min_test_items must be >= 1");
        if (variants < 1) throw validation_error("split: variants must be >= 1");
    }
};

/// One train/test variant over a dense user/item universe. Dropped users keep
/// their ids (the universe is stable) but own no records in either partition.
struct Dataset {
    std::uint32_t user_count = 0;
    std::uint32_t item_count = 0;
    std::vector<RatingRecord> train;
    std::vector<RatingRecord> test;
};

/// Deduplicated, order-canonical observation set O.
class ObservationSet {
public:
    ObservationSet() = default;

    static ObservationSet from_unsorted(std::vector<Observation> obs) {
        std::sort(obs.begin(), obs.end());
        obs.erase(std::unique(obs.begin(), obs.end()), obs.end());
        ObservationSet s;
        s.obs_ = std::move(obs);
        return s;
    }

    bool contains(const Observation& o) const {
        return std::binary_search(obs_.begin(), obs_.end(), o);
    }

    std::size_t size() const { return obs_.size(); }
    bool empty() const { return obs_.empty(); }
    auto begin() const { return obs_.begin(); }
    auto end() const { return obs_.end(); }
    const Observation& operator[](std::size_t i) const { return obs_[i]; }

private:
    std::vector<Observation> obs_;
};

}  // namespace grank
