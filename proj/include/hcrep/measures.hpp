#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hcrep/relation.hpp"

namespace hcrep {

enum class Measure { info, ce, kl, js };

std::string to_string(Measure measure);

/// The only thing the entropy/divergence formulas read from a division: the
/// multiset of block cardinalities and |U|. For info_entropy the sizes are
/// the per-sample neighbor counts (one per sample, not deduplicated); for
/// the pairwise measures they are deduplicated cover block sizes.
struct SizeProfile {
    std::vector<std::size_t> sizes;
    std::size_t universe_size = 0;

    bool operator==(const SizeProfile&) const = default;
};

SizeProfile profile_of(const Cover& cover);
SizeProfile per_sample_profile(const FeatureView& view, std::span<const std::size_t> features);

/// Sum over samples of (|R(x_i)|/|U|)(1 - |R(x_i)|/|U|). Bounded by n/4.
double info_entropy(const SizeProfile& per_sample);

/// Sum over block pairs of (|a_i|/|U|)(1 - |b_j|/|U|). Asymmetric; collapses
/// to (number of b blocks) - 1 when both profiles are true partitions.
double cross_entropy(const SizeProfile& a, const SizeProfile& b);

/// Sum over block pairs of |a_i|*||a_i| - |b_j|| / |U|^2. Asymmetric, and
/// deliberately nonzero for equal non-uniform partitions: the formula reads
/// every cross pair, not just the diagonal (pinned regression downstream).
double kl_divergence(const SizeProfile& a, const SizeProfile& b);

/// (1/(4|U|^2)) * sum over block pairs of (|a_i|+|b_j|)*||a_i|-|b_j||.
/// Summed over unordered size pairs so js(a,b) and js(b,a) are bit-for-bit
/// identical, not just mathematically equal.
double js_divergence(const SizeProfile& a, const SizeProfile& b);

/// One computed measure value with enough context to report it.
struct MeasureValue {
    double value = 0.0;
    Measure measure = Measure::ce;
    std::string operands;  // human-readable description of the two divisions
};

}  // namespace hcrep
