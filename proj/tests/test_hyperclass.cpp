#include <doctest.h>

#include <cstdint>
#include <optional>
#include <vector>

#include <json.hpp>

#include "hcrep/errors.hpp"
#include "hcrep/hyperclass.hpp"
#include "hcrep/measures.hpp"
#include "hcrep/relation.hpp"
#include "hcrep/rng.hpp"
#include "fixtures.hpp"
#include "oracle.hpp"

using namespace hcrep;

namespace {

using Blocks = std::vector<std::vector<std::uint32_t>>;

doctest::Approx tight(double expected) { return doctest::Approx(expected).epsilon(1e-12); }

NeighborhoodConfig config_of(double delta, NormKind norm, bool normalize) {
    NeighborhoodConfig config;
    config.delta = delta;
    config.norm = norm;
    config.normalize = normalize;
    return config;
}

// The straightforward one-feature-at-a-time scorer the batch implementation
// must reproduce: both covers built directly, then the measure applied.
std::vector<double> direct_scores(const RatingMatrix& matrix, MeasureKind measure,
                                  const NeighborhoodConfig& config) {
    const FeatureView view(matrix, config);
    std::vector<double> scores;
    for (std::size_t k = 0; k < matrix.n_items(); ++k) {
        const SizeProfile a = profile_of(cover_of_feature(view, k));
        const SizeProfile b = profile_of(cover_of_complement(view, k));
        switch (measure) {
            case MeasureKind::ce: scores.push_back(cross_entropy(a, b)); break;
            case MeasureKind::kl: scores.push_back(kl_divergence(a, b)); break;
            case MeasureKind::js: scores.push_back(js_divergence(a, b)); break;
        }
    }
    return scores;
}

}  // namespace

TEST_SUITE_BEGIN("hyperclass");

TEST_CASE("toy3x3 feature scores per measure") {
    const RatingMatrix matrix = fixtures::toy3x3();
    const NeighborhoodConfig config;

    const FeatureScores ce = score_features(matrix, MeasureKind::ce, config);
    REQUIRE(ce.scores.size() == 3);
    for (std::size_t k = 0; k < 3; ++k) CHECK(ce.scores[k] == tight(fixtures::kToyCe[k]));

    const FeatureScores kl = score_features(matrix, MeasureKind::kl, config);
    for (std::size_t k = 0; k < 3; ++k) CHECK(kl.scores[k] == tight(fixtures::kToyKl[k]));

    const FeatureScores js = score_features(matrix, MeasureKind::js, config);
    for (std::size_t k = 0; k < 3; ++k) CHECK(js.scores[k] == tight(fixtures::kToyJs[k]));

    // Feature 0 ties feature 1 on every measure; the first minimum wins.
    CHECK(select_decision_feature(ce) == fixtures::kToyWinner);
    CHECK(select_decision_feature(kl) == fixtures::kToyWinner);
    CHECK(select_decision_feature(js) == fixtures::kToyWinner);
}

TEST_CASE("toy3x3 full build") {
    const RatingMatrix matrix = fixtures::toy3x3();
    for (const MeasureKind measure : {MeasureKind::ce, MeasureKind::kl, MeasureKind::js}) {
        const HyperClass hc = build_hyperclass(matrix, measure, NeighborhoodConfig{});
        CHECK(hc.measure == measure);
        CHECK(hc.decision_feature == fixtures::kToyWinner);
        CHECK(hc.blocks.blocks == fixtures::kToyWinnerBlocks);
        REQUIRE(hc.representatives.size() == 2);
        CHECK(hc.representatives[0] == fixtures::kToyWinnerReps[0]);
        CHECK(hc.representatives[1] == fixtures::kToyWinnerReps[1]);
        // Raw range of feature 0 (ratings 1,1,2 — fully rated, no zero fill).
        CHECK(hc.feature_min == 1.0);
        CHECK(hc.feature_max == 2.0);
    }
}

TEST_CASE("identical columns tie and the first feature wins") {
    RatingMatrixBuilder builder;
    builder.add("u0", "i0", 1);
    builder.add("u0", "i1", 1);
    builder.add("u1", "i0", 4);
    builder.add("u1", "i1", 4);
    builder.add("u2", "i0", 4);
    builder.add("u2", "i1", 4);
    const RatingMatrix matrix = std::move(builder).build();

    const FeatureScores scores = score_features(matrix, MeasureKind::ce, NeighborhoodConfig{});
    REQUIRE(scores.scores.size() == 2);
    CHECK(scores.scores[0] == scores.scores[1]);
    CHECK(select_decision_feature(scores) == 0);
}

TEST_CASE("batch scorer reproduces the direct per-feature construction") {
    DetRng rng(66);
    for (int round = 0; round < 6; ++round) {
        const RatingMatrix matrix =
            oracle::random_matrix(rng, 4 + rng.bounded(30), 2 + rng.bounded(5), 0.5);
        const NeighborhoodConfig configs[] = {
            config_of(0.0, NormKind::chebyshev, true),    // interned-class strategy
            config_of(0.0, NormKind::euclidean, false),   // interned classes, raw values
            config_of(0.3, NormKind::chebyshev, true),    // pair-gap-table strategy
            config_of(0.3, NormKind::euclidean, true),    // direct fallback
        };
        for (const auto& config : configs)
            for (const MeasureKind measure :
                 {MeasureKind::ce, MeasureKind::kl, MeasureKind::js}) {
                const FeatureScores batch = score_features(matrix, measure, config);
                const std::vector<double> expected = direct_scores(matrix, measure, config);
                REQUIRE(batch.scores.size() == expected.size());
                for (std::size_t k = 0; k < expected.size(); ++k)
                    CHECK(batch.scores[k] == tight(expected[k]));
            }
    }
}

TEST_CASE("scores against the full-stack reference on small matrices") {
    DetRng rng(77);
    for (int round = 0; round < 4; ++round) {
        const RatingMatrix matrix =
            oracle::random_matrix(rng, 3 + rng.bounded(10), 2 + rng.bounded(3), 0.5);
        for (const double delta : {0.0, 0.4}) {
            const NeighborhoodConfig config = config_of(delta, NormKind::chebyshev, true);
            const oracle::Table table = oracle::dense_table(matrix, true);
            const FeatureScores got = score_features(matrix, MeasureKind::js, config);
            for (std::size_t k = 0; k < matrix.n_items(); ++k) {
                std::vector<std::size_t> rest;
                for (std::size_t f = 0; f < matrix.n_items(); ++f)
                    if (f != k) rest.push_back(f);
                const auto a = oracle::sizes_of(oracle::neighbor_blocks(table, {k}, delta, false));
                const auto b = oracle::sizes_of(oracle::neighbor_blocks(table, rest, delta, false));
                CHECK(got.scores[k] == tight(oracle::js_divergence(a, b, matrix.n_users())));
            }
        }
    }
}

TEST_CASE("scoring requires at least two features") {
    RatingMatrixBuilder builder;
    builder.add("u0", "i0", 1);
    builder.add("u1", "i0", 2);
    const RatingMatrix matrix = std::move(builder).build();
    CHECK_THROWS_AS(score_features(matrix, MeasureKind::ce, NeighborhoodConfig{}),
                    ContractViolation);
}

TEST_CASE("assign places raw values onto blocks") {
    HyperClass hc;
    hc.blocks.blocks = {{0, 1}, {2}};
    hc.blocks.universe_size = 3;
    hc.representatives = {0.0, 1.0};
    hc.config = NeighborhoodConfig{};  // normalize = true
    hc.feature_min = 1.0;
    hc.feature_max = 3.0;

    CHECK(assign(hc, 1.0) == 0);  // scales to 0.0
    CHECK(assign(hc, 3.0) == 1);  // scales to 1.0
    CHECK(assign(hc, 2.0) == 0);  // scales to 0.5: equidistant, lower index wins
    CHECK(assign(hc, 2.2) == 1);
    CHECK(assign(hc, std::nullopt) == 0);  // missing -> largest block

    // Largest-block fallback prefers the earlier block only on strict ties.
    hc.blocks.blocks = {{0}, {1, 2}};
    hc.representatives = {0.0, 1.0};
    CHECK(assign(hc, std::nullopt) == 1);

    // Without normalization the raw value is compared directly.
    hc.config.normalize = false;
    hc.representatives = {1.0, 3.0};
    CHECK(assign(hc, 1.4) == 0);
    CHECK(assign(hc, 2.9) == 1);
}

TEST_CASE("json round trip and rejection of malformed models") {
    const HyperClass hc = build_hyperclass(fixtures::toy3x3(), MeasureKind::js,
                                           config_of(0.0, NormKind::chebyshev, true));
    const std::string text = hc.to_json();

    const HyperClass back = HyperClass::from_json(text);
    CHECK(back.measure == hc.measure);
    CHECK(back.decision_feature == hc.decision_feature);
    CHECK(back.score == hc.score);
    CHECK(back.blocks.blocks == hc.blocks.blocks);
    CHECK(back.blocks.universe_size == hc.blocks.universe_size);
    CHECK(back.representatives == hc.representatives);
    CHECK(back.config == hc.config);
    CHECK(back.feature_min == hc.feature_min);
    CHECK(back.feature_max == hc.feature_max);

    CHECK_THROWS_AS(HyperClass::from_json("not json at all"), ParseError);
    CHECK_THROWS_AS(HyperClass::from_json("{}"), SchemaError);

    auto tampered = nlohmann::json::parse(text);
    tampered["format_version"] = 99;
    CHECK_THROWS_AS(HyperClass::from_json(tampered.dump()), SchemaError);

    auto mismatched = nlohmann::json::parse(text);
    mismatched["representatives"].erase(0);
    CHECK_THROWS_AS(HyperClass::from_json(mismatched.dump()), SchemaError);
}

TEST_CASE("delta >= 1 collapses to a single block") {
    const RatingMatrix matrix = fixtures::toy3x3();
    const HyperClass hc =
        build_hyperclass(matrix, MeasureKind::ce, config_of(1.0, NormKind::chebyshev, true));
    REQUIRE(hc.blocks.blocks.size() == 1);
    CHECK(hc.blocks.blocks[0].size() == 3);
    CHECK(hc.decision_feature == 0);
    CHECK(hc.score == 0.0);
    CHECK(assign(hc, std::nullopt) == 0);
    CHECK(assign(hc, 2.5) == 0);
}

TEST_SUITE_END();
