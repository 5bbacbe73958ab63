#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "hcrep/errors.hpp"
#include "hcrep/measures.hpp"
#include "hcrep/rng.hpp"
#include "fixtures.hpp"
#include "oracle.hpp"

using namespace hcrep;

namespace {

SizeProfile profile(std::vector<std::size_t> sizes, std::size_t universe) {
    return SizeProfile{std::move(sizes), universe};
}

doctest::Approx tight(double expected) { return doctest::Approx(expected).epsilon(1e-12); }

}  // namespace

TEST_SUITE_BEGIN("measures");

TEST_CASE("pinned cross entropy examples") {
    // Values double-checked against the naive reference before pinning.
    CHECK(oracle::cross_entropy({2, 2}, {1, 1, 2}, 4) == tight(fixtures::kPinCe221120));
    CHECK(oracle::cross_entropy({2, 2, 2}, {3, 3}, 4) == tight(fixtures::kPinCe22233));

    CHECK(cross_entropy(profile({2, 2}, 4), profile({1, 1, 2}, 4)) == fixtures::kPinCe221120);
    CHECK(cross_entropy(profile({2, 2, 2}, 4), profile({3, 3}, 4)) == fixtures::kPinCe22233);
}

TEST_CASE("pinned divergence values, including the nonzero self-divergence") {
    CHECK(oracle::kl_divergence({2, 2}, {1, 3}, 4) == tight(fixtures::kPinKl2213));
    CHECK(oracle::kl_divergence({1, 3}, {1, 3}, 4) == tight(fixtures::kPinKl1313));
    CHECK(oracle::js_divergence({2, 2}, {1, 3}, 4) == tight(fixtures::kPinJs2213));

    CHECK(kl_divergence(profile({2, 2}, 4), profile({1, 3}, 4)) == fixtures::kPinKl2213);
    CHECK(js_divergence(profile({2, 2}, 4), profile({1, 3}, 4)) == fixtures::kPinJs2213);

    // The divergence of a non-uniform profile against itself does not vanish:
    // the formula sums over all block pairs, not just matching ones.
    CHECK(kl_divergence(profile({1, 3}, 4), profile({1, 3}, 4)) == fixtures::kPinKl1313);
    // A uniform partition against itself does.
    CHECK(kl_divergence(profile({2, 2}, 4), profile({2, 2}, 4)) == 0.0);
    CHECK(js_divergence(profile({2, 2}, 4), profile({2, 2}, 4)) == 0.0);
}

TEST_CASE("info entropy hand example, empty case, and bound") {
    // Per-sample sizes [1,2,3] over 3 samples: 1/3*2/3 + 2/3*1/3 + 1*0 = 4/9.
    CHECK(info_entropy(profile({1, 2, 3}, 3)) == tight(4.0 / 9.0));
    CHECK(oracle::info_entropy({1, 2, 3}, 3) == tight(4.0 / 9.0));

    // No samples -> zero entropy (an empty sum, not an error).
    CHECK(info_entropy(profile({}, 3)) == 0.0);

    // Singletons and the full universe both give the extremes.
    CHECK(info_entropy(profile({4, 4, 4, 4}, 4)) == 0.0);
    CHECK(info_entropy(profile({2, 2, 2, 2}, 4)) == tight(1.0));  // the n/4 maximum
}

TEST_CASE("partition collapse: cross entropy of true partitions is m - 1") {
    DetRng rng(101);
    for (int round = 0; round < 100; ++round) {
        const std::size_t n = 2 + rng.bounded(49);
        const auto a = oracle::random_partition_sizes(rng, n);
        const auto b = oracle::random_partition_sizes(rng, n);
        const double expected = static_cast<double>(b.size()) - 1.0;
        const double got = cross_entropy(profile(a, n), profile(b, n));
        CHECK(std::fabs(got - expected) <= 1e-12 * std::max(1.0, expected));
    }
}

TEST_CASE("random cover pairs agree with the reference implementation") {
    DetRng rng(202);
    for (int round = 0; round < 200; ++round) {
        const std::size_t n = 2 + rng.bounded(49);
        const auto a = oracle::sizes_of(oracle::random_cover(rng, n));
        const auto b = oracle::sizes_of(oracle::random_cover(rng, n));
        const SizeProfile pa = profile(a, n);
        const SizeProfile pb = profile(b, n);

        const double ce = cross_entropy(pa, pb);
        const double kl = kl_divergence(pa, pb);
        const double js = js_divergence(pa, pb);

        CHECK(ce >= 0.0);
        CHECK(kl >= 0.0);
        CHECK(js >= 0.0);
        CHECK(ce <= static_cast<double>(a.size() * b.size()));

        CHECK(ce == tight(oracle::cross_entropy(a, b, n)));
        CHECK(kl == tight(oracle::kl_divergence(a, b, n)));
        CHECK(js == tight(oracle::js_divergence(a, b, n)));

        // Symmetry must be bit-exact, not merely approximate.
        CHECK(js == js_divergence(pb, pa));

        std::vector<std::size_t> per_sample(n);
        for (auto& size : per_sample) size = 1 + rng.bounded(n);
        const double info = info_entropy(profile(per_sample, n));
        CHECK(info >= 0.0);
        CHECK(info <= static_cast<double>(n) / 4.0 + 1e-12);
        CHECK(info == tight(oracle::info_entropy(per_sample, n)));
    }
}

TEST_CASE("divergence-identity gap for a pinned profile pair") {
    // kl(a,b) vs |ce(a,b) - info| where the info side treats a's sizes as
    // per-sample counts: the identity misses by exactly 0.5 here.
    const SizeProfile a = profile({2, 2}, 4);
    const SizeProfile b = profile({1, 3}, 4);
    const double info = info_entropy(profile({2, 2, 2, 2}, 4));
    const double gap = std::fabs(kl_divergence(a, b) - std::fabs(cross_entropy(a, b) - info));
    CHECK(gap == tight(0.5));
}

TEST_CASE("malformed profiles are rejected") {
    const SizeProfile ok = profile({2, 2}, 4);

    CHECK_THROWS_AS(cross_entropy(ok, profile({2, 2}, 5)), ContractViolation);  // universes differ
    CHECK_THROWS_AS(cross_entropy(profile({}, 4), ok), ContractViolation);      // empty side
    CHECK_THROWS_AS(cross_entropy(ok, profile({}, 4)), ContractViolation);
    CHECK_THROWS_AS(kl_divergence(profile({0, 2}, 4), ok), ContractViolation);  // empty block
    CHECK_THROWS_AS(js_divergence(ok, profile({5}, 4)), ContractViolation);     // block > universe
    CHECK_THROWS_AS(info_entropy(profile({1}, 0)), ContractViolation);          // empty universe
    CHECK_THROWS_AS(info_entropy(profile({9}, 4)), ContractViolation);
}

TEST_SUITE_END();
