#include "hcrep/relation.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <map>
#include <sstream>

#include "hcrep/errors.hpp"

namespace hcrep {

std::string to_string(NormKind norm) {
    return norm == NormKind::chebyshev ? "chebyshev" : "euclidean";
}

NormKind norm_from_string(const std::string& name) {
    if (name == "chebyshev") return NormKind::chebyshev;
    if (name == "euclidean") return NormKind::euclidean;
    throw ConfigError(fmt::format("unknown norm '{}' (expected chebyshev or euclidean)", name));
}

namespace {

void check_config(const NeighborhoodConfig& config) {
    if (!(config.delta >= 0.0))
        throw ContractViolation(fmt::format("delta must be nonnegative, got {}", config.delta));
}

// Blocks are kept ordered by smallest member, then size, then
// lexicographically, so every downstream sum and tie-break is reproducible.
bool block_less(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
    if (a.front() != b.front()) return a.front() < b.front();
    if (a.size() != b.size()) return a.size() < b.size();
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

Cover make_cover(std::vector<std::vector<std::uint32_t>> neighbor_sets, std::size_t universe_size,
                 CoverSource source) {
    std::sort(neighbor_sets.begin(), neighbor_sets.end(), block_less);
    neighbor_sets.erase(std::unique(neighbor_sets.begin(), neighbor_sets.end()),
                        neighbor_sets.end());
    return Cover{std::move(neighbor_sets), universe_size, source};
}

std::vector<std::size_t> Cover::block_sizes() const {
    std::vector<std::size_t> sizes;
    sizes.reserve(blocks.size());
    for (const auto& block : blocks) sizes.push_back(block.size());
    return sizes;
}

std::string Cover::debug_json() const {
    std::ostringstream out;
    out << "{\"source\":{\"kind\":\""
        << (source.kind == CoverSource::Kind::feature ? "feature" : "complement")
        << "\",\"feature\":" << source.feature << "},\"universe_size\":" << universe_size
        << ",\"blocks\":[";
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        if (b) out << ',';
        out << '[';
        for (std::size_t m = 0; m < blocks[b].size(); ++m) {
            if (m) out << ',';
            out << blocks[b][m];
        }
        out << ']';
    }
    out << "]}";
    return out.str();
}

FeatureView::FeatureView(const RatingMatrix& matrix, const NeighborhoodConfig& config)
    : config_(config), n_(matrix.n_users()), d_(matrix.n_items()) {
    check_config(config_);
    values_.assign(n_ * d_, 0.0);
    for (const Entry& e : matrix.entries()) values_[e.user * d_ + e.item] = e.rating;

    min_.assign(d_, 0.0);
    max_.assign(d_, 0.0);
    for (std::size_t f = 0; f < d_; ++f) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s < n_; ++s) {
            lo = std::min(lo, values_[s * d_ + f]);
            hi = std::max(hi, values_[s * d_ + f]);
        }
        if (n_ == 0) lo = hi = 0.0;
        min_[f] = lo;
        max_[f] = hi;
    }
    if (config_.normalize)
        for (std::size_t s = 0; s < n_; ++s)
            for (std::size_t f = 0; f < d_; ++f)
                values_[s * d_ + f] = transform(f, values_[s * d_ + f]);
}

double FeatureView::transform(std::size_t feature, double raw) const {
    if (!config_.normalize) return raw;
    const double range = max_.at(feature) - min_.at(feature);
    if (range == 0.0) return 0.0;
    return (raw - min_[feature]) / range;
}

double FeatureView::distance(std::size_t a, std::size_t b,
                             std::span<const std::size_t> features) const {
    if (config_.norm == NormKind::chebyshev) {
        double worst = 0.0;
        for (std::size_t f : features) worst = std::max(worst, std::abs(at(a, f) - at(b, f)));
        return worst;
    }
    double ssq = 0.0;
    for (std::size_t f : features) {
        const double diff = at(a, f) - at(b, f);
        ssq += diff * diff;
    }
    return std::sqrt(ssq);
}

namespace {

void check_features(const FeatureView& view, std::span<const std::size_t> features,
                    std::size_t sample) {
    if (features.empty()) throw ContractViolation("feature set must be nonempty");
    if (sample >= view.n_samples())
        throw ContractViolation(fmt::format("sample {} out of range (n={})", sample,
                                            view.n_samples()));
    for (std::size_t f : features)
        if (f >= view.n_features())
            throw ContractViolation(fmt::format("feature {} out of range (d={})", f,
                                                view.n_features()));
}

}  // namespace

std::vector<std::uint32_t> relation_set(const FeatureView& view,
                                        std::span<const std::size_t> features,
                                        std::size_t sample) {
    check_features(view, features, sample);
    std::vector<std::uint32_t> related;
    for (std::size_t j = 0; j < view.n_samples(); ++j)
        if (view.related(sample, j, features)) related.push_back(static_cast<std::uint32_t>(j));
    return related;
}

std::vector<std::uint32_t> relation_set(const RatingMatrix& matrix,
                                        std::span<const std::size_t> features,
                                        std::size_t sample, const NeighborhoodConfig& config) {
    return relation_set(FeatureView(matrix, config), features, sample);
}

std::vector<std::size_t> neighbor_counts(const FeatureView& view,
                                         std::span<const std::size_t> features) {
    if (view.n_samples() == 0) return {};
    check_features(view, features, 0);
    std::vector<std::size_t> counts(view.n_samples(), 0);

    if (features.size() == 1) {
        // Group samples by distinct column value; every member of a value
        // group has the same neighbor count.
        const std::size_t k = features[0];
        std::map<double, std::size_t> group_sizes;
        for (std::size_t s = 0; s < view.n_samples(); ++s) ++group_sizes[view.at(s, k)];
        std::map<double, std::size_t> neighbors;  // value -> |R| for that value
        for (const auto& [va, _] : group_sizes) {
            std::size_t total = 0;
            for (const auto& [vb, cnt] : group_sizes) {
                const double dist = view.config().norm == NormKind::chebyshev
                                        ? std::abs(va - vb)
                                        : std::sqrt((va - vb) * (va - vb));
                if (dist <= view.config().delta) total += cnt;
            }
            neighbors[va] = total;
        }
        for (std::size_t s = 0; s < view.n_samples(); ++s) counts[s] = neighbors[view.at(s, k)];
        return counts;
    }

    for (std::size_t i = 0; i < view.n_samples(); ++i) {
        ++counts[i];  // reflexive
        for (std::size_t j = i + 1; j < view.n_samples(); ++j)
            if (view.related(i, j, features)) {
                ++counts[i];
                ++counts[j];
            }
    }
    return counts;
}

Cover cover_of_feature(const FeatureView& view, std::size_t k) {
    if (k >= view.n_features())
        throw ContractViolation(fmt::format("feature {} out of range (d={})", k,
                                            view.n_features()));

    // Distinct column values with their member lists (members ascending
    // because samples are scanned in order).
    std::map<double, std::vector<std::uint32_t>> groups;
    for (std::size_t s = 0; s < view.n_samples(); ++s)
        groups[view.at(s, k)].push_back(static_cast<std::uint32_t>(s));

    std::vector<double> rep;
    std::vector<const std::vector<std::uint32_t>*> members;
    for (const auto& [value, list] : groups) {
        rep.push_back(value);
        members.push_back(&list);
    }

    std::vector<std::vector<std::uint32_t>> sets;
    sets.reserve(rep.size());
    for (std::size_t a = 0; a < rep.size(); ++a) {
        std::vector<std::uint32_t> related;
        for (std::size_t b = 0; b < rep.size(); ++b) {
            const double dist = view.config().norm == NormKind::chebyshev
                                    ? std::abs(rep[a] - rep[b])
                                    : std::sqrt((rep[a] - rep[b]) * (rep[a] - rep[b]));
            if (dist <= view.config().delta)
                related.insert(related.end(), members[b]->begin(), members[b]->end());
        }
        std::sort(related.begin(), related.end());
        sets.push_back(std::move(related));
    }
    return make_cover(std::move(sets), view.n_samples(),
                         CoverSource{CoverSource::Kind::feature, k});
}

Cover cover_of_feature(const RatingMatrix& matrix, std::size_t k,
                       const NeighborhoodConfig& config) {
    return cover_of_feature(FeatureView(matrix, config), k);
}

Cover cover_of_complement(const FeatureView& view, std::size_t k) {
    if (view.n_features() < 2)
        throw ContractViolation("complement cover needs at least two features");
    if (k >= view.n_features())
        throw ContractViolation(fmt::format("feature {} out of range (d={})", k,
                                            view.n_features()));

    std::vector<std::size_t> rest;
    rest.reserve(view.n_features() - 1);
    for (std::size_t f = 0; f < view.n_features(); ++f)
        if (f != k) rest.push_back(f);

    std::vector<std::vector<std::uint32_t>> sets;
    sets.reserve(view.n_samples());
    for (std::size_t i = 0; i < view.n_samples(); ++i) sets.push_back(relation_set(view, rest, i));
    return make_cover(std::move(sets), view.n_samples(),
                         CoverSource{CoverSource::Kind::complement, k});
}

Cover cover_of_complement(const RatingMatrix& matrix, std::size_t k,
                          const NeighborhoodConfig& config) {
    return cover_of_complement(FeatureView(matrix, config), k);
}

}  // namespace hcrep
