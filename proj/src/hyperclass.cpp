#include "hcrep/hyperclass.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <fmt/format.h>
#include <map>
#include <unordered_map>

#include <json.hpp>

#include "hcrep/errors.hpp"

namespace hcrep {

std::string to_string(MeasureKind kind) {
    switch (kind) {
        case MeasureKind::ce: return "ce";
        case MeasureKind::kl: return "kl";
        case MeasureKind::js: return "js";
    }
    throw ContractViolation("unreachable measure kind");
}

MeasureKind measure_kind_from_string(const std::string& name) {
    if (name == "ce") return MeasureKind::ce;
    if (name == "kl") return MeasureKind::kl;
    if (name == "js") return MeasureKind::js;
    throw ConfigError(fmt::format("unknown measure '{}' (expected ce, kl or js)", name));
}

Measure to_measure(MeasureKind kind) {
    switch (kind) {
        case MeasureKind::ce: return Measure::ce;
        case MeasureKind::kl: return Measure::kl;
        case MeasureKind::js: return Measure::js;
    }
    throw ContractViolation("unreachable measure kind");
}

namespace {

double apply_measure(MeasureKind kind, const SizeProfile& a, const SizeProfile& b) {
    switch (kind) {
        case MeasureKind::ce: return cross_entropy(a, b);
        case MeasureKind::kl: return kl_divergence(a, b);
        case MeasureKind::js: return js_divergence(a, b);
    }
    throw ContractViolation("unreachable measure kind");
}

// Collapse -0.0 onto +0.0 so grouping by bit pattern agrees with grouping by
// double equality (the predicate distance == 0 uses double equality).
std::uint64_t value_bits(double v) { return std::bit_cast<std::uint64_t>(v == 0.0 ? 0.0 : v); }

// delta = 0: two samples share a complement block exactly when their rows
// agree on every feature but k. Interned class ids of every row prefix and
// suffix give each sample a (prefix, suffix) key per k, so all d groupings
// cost O(n*d) instead of O(n^2*d).
std::vector<std::vector<std::size_t>> complement_sizes_exact(const FeatureView& view) {
    const std::size_t n = view.n_samples();
    const std::size_t d = view.n_features();

    struct PairHash {
        std::size_t operator()(const std::pair<std::uint32_t, std::uint64_t>& p) const {
            return std::hash<std::uint64_t>()(p.second * 0x9e3779b97f4a7c15ULL + p.first);
        }
    };

    auto interned_ids = [&](bool forward) {
        // ids[i][k] identifies the class of sample i's features [0,k) when
        // forward, or (d-1-k, d) mirrored when backward.
        std::vector<std::vector<std::uint32_t>> ids(n, std::vector<std::uint32_t>(d + 1, 0));
        for (std::size_t step = 0; step < d; ++step) {
            const std::size_t f = forward ? step : d - 1 - step;
            std::unordered_map<std::pair<std::uint32_t, std::uint64_t>, std::uint32_t, PairHash>
                intern;
            for (std::size_t i = 0; i < n; ++i) {
                const std::pair<std::uint32_t, std::uint64_t> key{ids[i][step],
                                                                  value_bits(view.at(i, f))};
                const std::uint32_t next_id = static_cast<std::uint32_t>(intern.size());
                ids[i][step + 1] = intern.emplace(key, next_id).first->second;
            }
        }
        return ids;
    };

    const auto prefix = interned_ids(true);
    const auto suffix = interned_ids(false);

    std::vector<std::vector<std::size_t>> sizes(d);
    for (std::size_t k = 0; k < d; ++k) {
        std::unordered_map<std::uint64_t, std::size_t> classes;
        for (std::size_t i = 0; i < n; ++i) {
            // prefix of [0,k) combined with suffix of (k, d)
            const std::uint64_t key =
                (static_cast<std::uint64_t>(prefix[i][k]) << 32) | suffix[i][d - 1 - k];
            ++classes[key];
        }
        sizes[k].reserve(classes.size());
        for (const auto& kv : classes) sizes[k].push_back(kv.second);
    }
    return sizes;
}

// delta > 0, chebyshev: the distance excluding feature k is the largest
// coordinate gap if the largest is not at k, otherwise the second largest.
// One O(n^2*d) sweep then serves every k.
class PairGapTable {
public:
    explicit PairGapTable(const FeatureView& view) : n_(view.n_samples()) {
        const std::size_t pairs = n_ * (n_ - 1) / 2;
        max1_.resize(pairs);
        max2_.resize(pairs);
        argmax_.resize(pairs);
        std::size_t p = 0;
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = i + 1; j < n_; ++j, ++p) {
                double m1 = -1.0, m2 = -1.0;
                std::uint32_t arg = 0;
                for (std::size_t f = 0; f < view.n_features(); ++f) {
                    const double gap = std::abs(view.at(i, f) - view.at(j, f));
                    if (gap > m1) {
                        m2 = m1;
                        m1 = gap;
                        arg = static_cast<std::uint32_t>(f);
                    } else if (gap > m2) {
                        m2 = gap;
                    }
                }
                max1_[p] = m1;
                max2_[p] = m2;
                argmax_[p] = arg;
            }
    }

    static std::size_t memory_bytes(std::size_t n) { return n * (n - 1) / 2 * 20; }

    bool related_excluding(std::size_t i, std::size_t j, std::size_t k, double delta) const {
        if (i == j) return true;
        if (i > j) std::swap(i, j);
        const std::size_t p = index(i, j);
        const double gap = argmax_[p] == k ? max2_[p] : max1_[p];
        return gap <= delta;
    }

private:
    std::size_t index(std::size_t i, std::size_t j) const {
        return i * n_ - i * (i + 1) / 2 + (j - i - 1);
    }

    std::size_t n_;
    std::vector<double> max1_;
    std::vector<double> max2_;
    std::vector<std::uint32_t> argmax_;
};

std::vector<std::size_t> complement_sizes_from_gaps(const PairGapTable& gaps, std::size_t n,
                                                    std::size_t k, double delta) {
    std::vector<std::vector<std::uint32_t>> sets;
    sets.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::uint32_t> related;
        for (std::size_t j = 0; j < n; ++j)
            if (gaps.related_excluding(i, j, k, delta))
                related.push_back(static_cast<std::uint32_t>(j));
        sets.push_back(std::move(related));
    }
    const Cover cover =
        make_cover(std::move(sets), n, CoverSource{CoverSource::Kind::complement, k});
    return cover.block_sizes();
}

// Keep the per-pair table well under control on large universes; past this
// the direct per-feature construction is used instead.
constexpr std::size_t kPairTableBudgetBytes = std::size_t{512} << 20;

FeatureScores score_features_on(const FeatureView& view, MeasureKind measure) {
    const std::size_t n = view.n_samples();
    const std::size_t d = view.n_features();
    if (d < 2) throw ContractViolation("feature scoring needs at least two features");

    std::vector<std::vector<std::size_t>> complement_sizes;
    const bool exact_classes = view.config().delta == 0.0;
    const bool use_gap_table = !exact_classes && view.config().norm == NormKind::chebyshev &&
                               n >= 2 && PairGapTable::memory_bytes(n) <= kPairTableBudgetBytes;

    if (exact_classes) {
        complement_sizes = complement_sizes_exact(view);
    } else if (use_gap_table) {
        const PairGapTable gaps(view);
        complement_sizes.resize(d);
        for (std::size_t k = 0; k < d; ++k)
            complement_sizes[k] = complement_sizes_from_gaps(gaps, n, k, view.config().delta);
    } else {
        complement_sizes.resize(d);
        for (std::size_t k = 0; k < d; ++k)
            complement_sizes[k] = cover_of_complement(view, k).block_sizes();
    }

    FeatureScores result;
    result.measure = measure;
    result.config = view.config();
    result.scores.resize(d);
    for (std::size_t k = 0; k < d; ++k) {
        const SizeProfile a = profile_of(cover_of_feature(view, k));
        const SizeProfile b{std::move(complement_sizes[k]), n};
        result.scores[k] = apply_measure(measure, a, b);
    }
    return result;
}

}  // namespace

FeatureScores score_features(const RatingMatrix& matrix, MeasureKind measure,
                             const NeighborhoodConfig& config) {
    return score_features_on(FeatureView(matrix, config), measure);
}

std::size_t select_decision_feature(const FeatureScores& scores) {
    if (scores.scores.empty()) throw ContractViolation("cannot select from empty scores");
    std::size_t best = 0;
    for (std::size_t k = 1; k < scores.scores.size(); ++k)
        if (scores.scores[k] < scores.scores[best]) best = k;
    return best;
}

HyperClass build_hyperclass(const RatingMatrix& matrix, MeasureKind measure,
                            const NeighborhoodConfig& config) {
    const FeatureView view(matrix, config);
    const FeatureScores scores = score_features_on(view, measure);
    const std::size_t winner = select_decision_feature(scores);

    HyperClass hc;
    hc.measure = measure;
    hc.decision_feature = winner;
    hc.score = scores.scores[winner];
    hc.blocks = cover_of_feature(view, winner);
    hc.config = config;
    hc.feature_min = view.raw_min(winner);
    hc.feature_max = view.raw_max(winner);
    hc.representatives.reserve(hc.blocks.blocks.size());
    for (const auto& block : hc.blocks.blocks) {
        long double total = 0.0L;
        for (std::uint32_t member : block) total += view.at(member, winner);
        hc.representatives.push_back(static_cast<double>(total / block.size()));
    }
    return hc;
}

std::size_t assign(const HyperClass& hc, std::optional<double> raw_value) {
    const auto& blocks = hc.blocks.blocks;
    if (blocks.empty()) throw ContractViolation("hyper-class has no blocks");
    if (blocks.size() != hc.representatives.size())
        throw ContractViolation("hyper-class representatives out of sync with blocks");

    if (!raw_value) {
        std::size_t best = 0;
        for (std::size_t b = 1; b < blocks.size(); ++b)
            if (blocks[b].size() > blocks[best].size()) best = b;
        return best;
    }

    // Same min-max mapping the view applied when the hyper-class was built.
    double v = *raw_value;
    if (hc.config.normalize) {
        const double range = hc.feature_max - hc.feature_min;
        v = range == 0.0 ? 0.0 : (v - hc.feature_min) / range;
    }
    std::size_t best = 0;
    double best_gap = std::abs(hc.representatives[0] - v);
    for (std::size_t b = 1; b < blocks.size(); ++b) {
        const double gap = std::abs(hc.representatives[b] - v);
        if (gap < best_gap) {
            best = b;
            best_gap = gap;
        }
    }
    return best;
}

std::string HyperClass::to_json() const {
    nlohmann::ordered_json j;
    j["format_version"] = 1;
    j["measure"] = hcrep::to_string(measure);
    j["decision_feature"] = decision_feature;
    j["score"] = score;
    j["config"] = {{"delta", config.delta},
                   {"norm", hcrep::to_string(config.norm)},
                   {"normalize", config.normalize}};
    j["feature_min"] = feature_min;
    j["feature_max"] = feature_max;
    j["universe_size"] = blocks.universe_size;
    j["blocks"] = blocks.blocks;
    j["representatives"] = representatives;
    return j.dump(2);
}

HyperClass HyperClass::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(fmt::format("hyper-class JSON: {}", e.what()));
    }
    try {
        if (j.at("format_version").get<int>() != 1)
            throw SchemaError("unsupported hyper-class format version");
        HyperClass hc;
        hc.measure = measure_kind_from_string(j.at("measure").get<std::string>());
        hc.decision_feature = j.at("decision_feature").get<std::size_t>();
        hc.score = j.at("score").get<double>();
        const auto& cfg = j.at("config");
        hc.config.delta = cfg.at("delta").get<double>();
        hc.config.norm = norm_from_string(cfg.at("norm").get<std::string>());
        hc.config.normalize = cfg.at("normalize").get<bool>();
        hc.feature_min = j.at("feature_min").get<double>();
        hc.feature_max = j.at("feature_max").get<double>();
        hc.blocks.universe_size = j.at("universe_size").get<std::size_t>();
        hc.blocks.source = CoverSource{CoverSource::Kind::feature, hc.decision_feature};
        hc.blocks.blocks = j.at("blocks").get<std::vector<std::vector<std::uint32_t>>>();
        hc.representatives = j.at("representatives").get<std::vector<double>>();
        if (hc.representatives.size() != hc.blocks.blocks.size())
            throw SchemaError("hyper-class representatives out of sync with blocks");
        return hc;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(fmt::format("hyper-class JSON: {}", e.what()));
    }
}

}  // namespace hcrep
