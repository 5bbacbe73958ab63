#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hcrep/matrix.hpp"

namespace hcrep {

enum class NormKind { chebyshev, euclidean };

std::string to_string(NormKind norm);
NormKind norm_from_string(const std::string& name);  // ConfigError on unknown names

/// Parameters of the binary neighborhood relation: two samples are related
/// when their distance over the active feature subset is <= delta. delta = 0
/// degenerates to exact-value equivalence classes; with normalization on,
/// delta >= 1 relates everything to everything.
struct NeighborhoodConfig {
    double delta = 0.0;
    NormKind norm = NormKind::chebyshev;
    bool normalize = true;  // per-feature min-max to [0,1] before any distance

    bool operator==(const NeighborhoodConfig&) const = default;
};

/// Which division a cover describes: the one induced by a single feature, or
/// the one induced by all remaining features jointly.
struct CoverSource {
    enum class Kind { feature, complement };

    Kind kind = Kind::feature;
    std::size_t feature = 0;

    bool operator==(const CoverSource&) const = default;
};

/// The deduplicated neighbor sets {R(x_i) : i in U} of one relation. Every
/// block holds ascending sample indices; blocks are ordered by smallest
/// member, then size, then lexicographically. Blocks of a delta=0 relation
/// partition the universe; with delta > 0 they may overlap, so downstream
/// code must not assume the sizes sum to universe_size.
struct Cover {
    std::vector<std::vector<std::uint32_t>> blocks;
    std::size_t universe_size = 0;
    CoverSource source;

    std::vector<std::size_t> block_sizes() const;
    std::string debug_json() const;  // {"source":…, "universe_size":…, "blocks":[[…]]}
};

/// Dense samples x features table derived from a rating matrix: one row per
/// user, one column per item, missing ratings filled with 0.0, then the
/// config's optional min-max scaling applied per column (constant columns
/// scale to all zeros). Every relation/hyper-class computation reads feature
/// values through this view so the distance predicate sees identical numbers
/// no matter which code path evaluates it.
class FeatureView {
public:
    FeatureView(const RatingMatrix& matrix, const NeighborhoodConfig& config);

    std::size_t n_samples() const { return n_; }
    std::size_t n_features() const { return d_; }
    const NeighborhoodConfig& config() const { return config_; }

    /// Post-transform value of one cell.
    double at(std::size_t sample, std::size_t feature) const {
        return values_[sample * d_ + feature];
    }

    /// The raw column range the transform was fitted on (after zero-fill).
    double raw_min(std::size_t feature) const { return min_.at(feature); }
    double raw_max(std::size_t feature) const { return max_.at(feature); }

    /// Apply the same per-column scaling used at construction to a new raw
    /// value (identity when the config does not normalize).
    double transform(std::size_t feature, double raw) const;

    /// Distance between two samples restricted to `features`, under the
    /// config's norm. This expression is the single source of truth for the
    /// relation predicate.
    double distance(std::size_t a, std::size_t b, std::span<const std::size_t> features) const;

    bool related(std::size_t a, std::size_t b, std::span<const std::size_t> features) const {
        return distance(a, b, features) <= config_.delta;
    }

private:
    NeighborhoodConfig config_;
    std::size_t n_ = 0;
    std::size_t d_ = 0;
    std::vector<double> values_;  // sample-major, post-transform
    std::vector<double> min_;     // raw per-column ranges
    std::vector<double> max_;
};

/// Deduplicate raw neighbor sets (each ascending) and put the survivors in
/// canonical block order. All cover construction funnels through here.
Cover make_cover(std::vector<std::vector<std::uint32_t>> neighbor_sets, std::size_t universe_size,
                 CoverSource source);

/// R(x_sample) over the given feature subset: ascending indices of all
/// samples within delta, always including the sample itself.
std::vector<std::uint32_t> relation_set(const FeatureView& view,
                                        std::span<const std::size_t> features,
                                        std::size_t sample);
std::vector<std::uint32_t> relation_set(const RatingMatrix& matrix,
                                        std::span<const std::size_t> features,
                                        std::size_t sample, const NeighborhoodConfig& config);

/// |R(x_i)| for every sample, in sample order — the per-sample size multiset
/// consumed by info_entropy (deliberately not deduplicated).
std::vector<std::size_t> neighbor_counts(const FeatureView& view,
                                         std::span<const std::size_t> features);

/// Deduplicated {R(x_i)} induced by feature k alone. Grouping by distinct
/// column value keeps this O(n + D^2) in the number D of distinct values
/// while evaluating the exact same predicate as relation_set.
Cover cover_of_feature(const FeatureView& view, std::size_t k);
Cover cover_of_feature(const RatingMatrix& matrix, std::size_t k,
                       const NeighborhoodConfig& config);

/// Deduplicated {R(x_i)} induced by all features except k jointly. Requires
/// at least two features. O(n^2 * d); batch callers that need every k should
/// go through score_features, which shares work across features.
Cover cover_of_complement(const FeatureView& view, std::size_t k);
Cover cover_of_complement(const RatingMatrix& matrix, std::size_t k,
                          const NeighborhoodConfig& config);

}  // namespace hcrep
