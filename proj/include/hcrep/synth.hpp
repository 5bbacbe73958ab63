#pragma once

#include <cstdint>
#include <filesystem>

#include "hcrep/matrix.hpp"

namespace hcrep {

/// Grouped-taste rating data for benchmarks and the acceptance suite. Users
/// belong to one of `groups` taste groups; item 0 stores the group id
/// exactly (a clean low-divergence feature for the selector to find) and
/// every other rated item sits near a per-(group, item) mean with one-step
/// noise. Because co-rating across groups is sparse, plain user CF picks up
/// spurious perfect-similarity neighbors from tiny overlaps; restricting the
/// pool to the user's group removes them, so the hyper-class route is both
/// faster and more accurate here — the effect the benchmarks measure.
struct SynthConfig {
    std::size_t n_users = 300;
    std::size_t n_items = 400;
    std::size_t groups = 5;            // at most 5: item 0 stores group id as a 1-5 rating
    std::size_t ratings_per_user = 12;  // including item 0; keep << n_items for tiny overlaps
    double noise = 0.3;                 // chance a rating steps one off its group mean
    std::uint64_t seed = 42;
};

RatingMatrix make_synthetic(const SynthConfig& config);

/// The same dataset as a MovieLens-format file (tab-separated
/// `user \t item \t rating \t timestamp`, 1-based ids, timestamp 0).
void write_synthetic_movielens(const SynthConfig& config, const std::filesystem::path& path);

}  // namespace hcrep
