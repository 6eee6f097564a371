#pragma once

#include <cstdint>
#include <vector>

#include "grank/types.hpp"

namespace grank::synth {

/// Latent-factor rating generator. Users and items get fixed random factor
/// vectors; each user rates a popularity-skewed item sample; the rating is the
/// rounded, clamped factor affinity plus noise. Fully determined by the seed.
struct SynthConfig {
    std::uint32_t user_count = 943;
    std::uint32_t item_count = 1682;
    double mean_ratings_per_user = 106.0;
    std::uint32_t min_ratings_per_user = 20;
    std::uint32_t max_ratings_per_user = 740;
    std::uint32_t latent_dim = 8;
    double signal_gain = 2.2;   // scales the user x item factor affinity
    double rating_noise = 0.35; // stddev of the additive noise
    std::uint64_t seed = 7;

    void validate() const;
};

std::vector<RatingRecord> synthesize_ratings(const SynthConfig& cfg);

}  // namespace grank::synth
