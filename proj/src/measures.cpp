#include "hcrep/measures.hpp"

#include <fmt/format.h>
#include <map>

#include "hcrep/errors.hpp"

namespace hcrep {

std::string to_string(Measure measure) {
    switch (measure) {
        case Measure::info: return "info";
        case Measure::ce: return "ce";
        case Measure::kl: return "kl";
        case Measure::js: return "js";
    }
    throw ContractViolation("unreachable measure kind");
}

SizeProfile profile_of(const Cover& cover) {
    return SizeProfile{cover.block_sizes(), cover.universe_size};
}

SizeProfile per_sample_profile(const FeatureView& view, std::span<const std::size_t> features) {
    return SizeProfile{neighbor_counts(view, features), view.n_samples()};
}

namespace {

// size -> multiplicity, ascending. Equal block sizes contribute identical
// terms, so summing per distinct size with an integer weight is exact and
// gives one fixed, platform-independent summation order.
using Histogram = std::map<std::size_t, std::uint64_t>;

Histogram histogram(const SizeProfile& profile) {
    Histogram h;
    for (std::size_t size : profile.sizes) ++h[size];
    return h;
}

void check_profile(const SizeProfile& profile, const char* role) {
    if (profile.universe_size < 1)
        throw ContractViolation(fmt::format("{} profile has empty universe", role));
    for (std::size_t size : profile.sizes) {
        if (size < 1) throw ContractViolation(fmt::format("{} profile has an empty block", role));
        if (size > profile.universe_size)
            throw ContractViolation(fmt::format("{} profile block size {} exceeds universe {}",
                                                role, size, profile.universe_size));
    }
}

void check_pair(const SizeProfile& a, const SizeProfile& b) {
    check_profile(a, "first");
    check_profile(b, "second");
    if (a.sizes.empty() || b.sizes.empty())
        throw ContractViolation("divergence measures need at least one block on each side");
    if (a.universe_size != b.universe_size)
        throw ContractViolation(fmt::format("universe sizes differ: {} vs {}", a.universe_size,
                                            b.universe_size));
}

}  // namespace

double info_entropy(const SizeProfile& per_sample) {
    check_profile(per_sample, "per-sample");
    const long double u = static_cast<long double>(per_sample.universe_size);
    long double total = 0.0L;
    for (const auto& [size, count] : histogram(per_sample)) {
        const long double p = static_cast<long double>(size) / u;
        total += static_cast<long double>(count) * p * (1.0L - p);
    }
    return static_cast<double>(total);
}

double cross_entropy(const SizeProfile& a, const SizeProfile& b) {
    check_pair(a, b);
    const long double u = static_cast<long double>(a.universe_size);
    long double total = 0.0L;
    for (const auto& [sa, ca] : histogram(a))
        for (const auto& [sb, cb] : histogram(b))
            total += static_cast<long double>(ca) * static_cast<long double>(cb) *
                     (static_cast<long double>(sa) / u) * (1.0L - static_cast<long double>(sb) / u);
    return static_cast<double>(total);
}

double kl_divergence(const SizeProfile& a, const SizeProfile& b) {
    check_pair(a, b);
    // Every term's numerator |a_i|*||a_i|-|b_j|| is a product of integers, so
    // accumulating the numerators exactly and dividing once keeps desk-scale
    // results exact.
    long double numerator = 0.0L;
    for (const auto& [sa, ca] : histogram(a))
        for (const auto& [sb, cb] : histogram(b)) {
            const std::uint64_t gap = sa > sb ? sa - sb : sb - sa;
            numerator += static_cast<long double>(ca) * static_cast<long double>(cb) *
                         static_cast<long double>(sa) * static_cast<long double>(gap);
        }
    const long double u = static_cast<long double>(a.universe_size);
    return static_cast<double>(numerator / (u * u));
}

double js_divergence(const SizeProfile& a, const SizeProfile& b) {
    check_pair(a, b);
    // Summed over unordered size pairs {s, t} with the combined weight
    // ca(s)*cb(t) + ca(t)*cb(s): swapping the arguments leaves every term's
    // factors unchanged, making js(a,b) == js(b,a) bit-for-bit.
    const Histogram ha = histogram(a);
    const Histogram hb = histogram(b);
    Histogram combined = ha;
    for (const auto& kv : hb) combined.try_emplace(kv.first, 0);

    auto mult = [](const Histogram& h, std::size_t size) -> long double {
        auto it = h.find(size);
        return it == h.end() ? 0.0L : static_cast<long double>(it->second);
    };

    long double numerator = 0.0L;
    for (auto it = combined.begin(); it != combined.end(); ++it)
        for (auto jt = std::next(it); jt != combined.end(); ++jt) {
            const std::size_t s = it->first;
            const std::size_t t = jt->first;  // s < t, so the diagonal (zero terms) is skipped
            const long double weight = mult(ha, s) * mult(hb, t) + mult(ha, t) * mult(hb, s);
            numerator += weight * static_cast<long double>(s + t) *
                         static_cast<long double>(t - s);
        }
    const long double u = static_cast<long double>(a.universe_size);
    return static_cast<double>(numerator / (4.0L * u * u));
}

}  // namespace hcrep
