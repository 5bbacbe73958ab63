#pragma once

#include <cstddef>
#include <vector>

#include "hcrep/matrix.hpp"

// Tiny matrices whose every intermediate value has been worked out by hand
// and cross-checked with the reference implementations in oracle.*. The
// pinned numbers live next to the builders so a fixture change cannot drift
// away from its expectations.
namespace fixtures {

// Fully rated 3 users x 3 items:
//
//            i0   i1   i2
//   u0        1    5    4
//   u1        1    3    4
//   u2        2    3    4
//
// With delta = 0 (min-max normalized, though delta = 0 makes that moot):
//   classes by i0: {u0,u1},{u2}   by i1: {u0},{u1,u2}   by i2: {u0,u1,u2}
//   complement of i0: {u0},{u1,u2}   of i1: {u0,u1},{u2}   of i2: singletons
hcrep::RatingMatrix toy3x3();

// Expected per-feature scores on toy3x3 (hand-traced, oracle-confirmed).
inline const std::vector<double> kToyCe{1.0, 1.0, 2.0};
inline const std::vector<double> kToyKl{1.0 / 3.0, 1.0 / 3.0, 2.0};
inline const std::vector<double> kToyJs{1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0};
// All three score vectors bottom out at index 0 (tied with 1; first wins).
inline constexpr std::size_t kToyWinner = 0;
// The winner's division and its per-block mean normalized values.
inline const std::vector<std::vector<std::uint32_t>> kToyWinnerBlocks{{0, 1}, {2}};
inline const std::vector<double> kToyWinnerReps{0.0, 1.0};

// Sparse 3 users x 3 items for the recommender:
//
//            i0   i1   i2
//   u0        5    3    .
//   u1        4    2    5
//   u2        1    5    1
hcrep::RatingMatrix cf3();

// Cosine similarities of u0 against the other two (co-rated items only):
//   sim(u0,u1) = (5*4 + 3*2) / (sqrt(34) * sqrt(20)) = 26 / sqrt(680)
//   sim(u0,u2) = (5*1 + 3*5) / (sqrt(34) * sqrt(26)) = 20 / sqrt(884)
inline constexpr double kCf3SimU0U1 = 0.9970544855015815;
inline constexpr double kCf3SimU0U2 = 0.6726727939963124;
// usercf(u0, i2, K=2): both neighbors rated i2 (5 and 1):
//   (s1*5 + s2*1) / (s1 + s2)
inline constexpr double kCf3UsercfPrediction = 3.38854451920174;
// itemcf(u0, i2, K=2): neighbors are i0 and i1,
//   sim(i2,i0) = 21/sqrt(442), sim(i2,i1) = 15/sqrt(754), ratings 5 and 3.
inline constexpr double kCf3ItemcfPrediction = 4.292919446001791;

// Pinned profile-level divergence values (sizes over |U| = 4), each verified
// against the double-sum oracle before use:
//   ce({2,2},   {1,1,2}) = 2.0
//   ce({2,2,2}, {3,3})   = 0.75
//   kl({2,2},   {1,3})   = 0.5
//   kl({1,3},   {1,3})   = 0.5   (nonzero for identical non-uniform profiles)
//   js({2,2},   {1,3})   = 0.25
inline constexpr double kPinCe221120 = 2.0;
inline constexpr double kPinCe22233 = 0.75;
inline constexpr double kPinKl2213 = 0.5;
inline constexpr double kPinKl1313 = 0.5;
inline constexpr double kPinJs2213 = 0.25;

}  // namespace fixtures
