#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hcrep/measures.hpp"

namespace hcrep {

/// Which divergence scores the features (the selector CF_CE / CF_KL / CF_JS).
enum class MeasureKind { ce, kl, js };

std::string to_string(MeasureKind kind);
MeasureKind measure_kind_from_string(const std::string& name);  // ConfigError on unknown
Measure to_measure(MeasureKind kind);

/// One score per feature: divergence between the feature's own division and
/// the division induced by all remaining features.
struct FeatureScores {
    std::vector<double> scores;
    MeasureKind measure = MeasureKind::ce;
    NeighborhoodConfig config;
};

/// The selected decision feature with its division and per-block mean values
/// (in post-transform space), plus everything needed to place a new sample:
/// the raw column range the transform was fitted on at build time.
struct HyperClass {
    MeasureKind measure = MeasureKind::ce;
    std::size_t decision_feature = 0;
    double score = 0.0;
    Cover blocks;
    std::vector<double> representatives;
    NeighborhoodConfig config;
    double feature_min = 0.0;
    double feature_max = 0.0;

    std::string to_json() const;
    static HyperClass from_json(const std::string& text);
};

/// scores[k] = measure(division by feature k, division by all features but
/// k), for every k. Work is shared across features: delta = 0 groups by
/// exact complement-row identity, delta > 0 under the chebyshev norm reuses
/// per-pair top-two coordinate gaps; both reproduce the per-feature
/// cover_of_complement blocks exactly. Remaining cases fall back to the
/// direct per-feature construction.
FeatureScores score_features(const RatingMatrix& matrix, MeasureKind measure,
                             const NeighborhoodConfig& config);

/// Smallest index attaining the minimum score (first-minimum tie rule).
std::size_t select_decision_feature(const FeatureScores& scores);

/// score_features -> select_decision_feature -> division of the winner, with
/// per-block representative values attached.
HyperClass build_hyperclass(const RatingMatrix& matrix, MeasureKind measure,
                            const NeighborhoodConfig& config);

/// Block whose representative is nearest (absolute difference, ties to the
/// lower index) to the sample's raw decision-feature value after applying
/// the build-time transform; a missing value falls back to the largest block.
std::size_t assign(const HyperClass& hc, std::optional<double> raw_value);

}  // namespace hcrep
