// Copyright 2026 The puma3pc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <random>

#include "puma/ring.hpp"

namespace puma {
namespace {

constexpr RingElem kTwo64Minus(RingElem v) { return RingElem{0} - v; }

TEST(FixedCodec, EncodeExamples) {
  const FixedCodec c;
  EXPECT_EQ(c.encode(1.0), 262144u);
  EXPECT_EQ(c.encode(0.0), 0u);
  EXPECT_EQ(c.encode(-1.0), kTwo64Minus(262144));
}

TEST(FixedCodec, DecodeExamples) {
  const FixedCodec c;
  EXPECT_EQ(c.decode(262144), 1.0);
  EXPECT_EQ(c.decode(kTwo64Minus(262144)), -1.0);
  EXPECT_EQ(c.decode(131072), 0.5);
}

TEST(FixedCodec, RoundsHalfAwayFromZero) {
  const FixedCodec c;
  const double half = std::ldexp(1.0, -19);
  EXPECT_EQ(c.encode(half), 1u);
  EXPECT_EQ(c.encode(-half), kTwo64Minus(1));
  EXPECT_EQ(c.encode(3 * half), 2u);
}

TEST(FixedCodec, RejectsOutOfRange) {
  const FixedCodec c;
  EXPECT_THROW(c.encode(1048576.0), MagnitudeError);
  EXPECT_THROW(c.encode(-1048576.0), MagnitudeError);
  EXPECT_THROW(c.encode(std::nan("")), MagnitudeError);
  EXPECT_NO_THROW(c.encode(1048575.5));
}

TEST(FixedCodec, RoundTripErrorWithinHalfUlp) {
  const FixedCodec c;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> d(-1048575.0, 1048575.0);
  for (int i = 0; i < 100000; ++i) {
    const double v = d(rng);
    ASSERT_LE(std::fabs(c.decode(c.encode(v)) - v), std::ldexp(1.0, -19)) << v;
  }
}

TEST(PartyId, Neighbours) {
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(PartyId(i).next().value(), (i + 1) % 3);
    EXPECT_EQ(PartyId(i).prev().value(), (i + 2) % 3);
  }
  EXPECT_THROW(PartyId(3), std::invalid_argument);
}

TEST(Sharing, ExplicitComponents) {
  const auto s = make_shares_from(5, 2, 7);
  EXPECT_EQ(s[1].hi, kTwo64Minus(4));
  EXPECT_EQ(s[0], (ArithShare{2, 7}));
  EXPECT_EQ(s[2], (ArithShare{kTwo64Minus(4), 2}));
  EXPECT_EQ(reconstruct(s[0], s[1], s[2]), 5u);

  const auto z = make_shares_from(0, 0, 0);
  for (const auto& sh : z) EXPECT_EQ(sh, (ArithShare{0, 0}));
}

TEST(Sharing, RoundTrip) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 100000; ++i) {
    const RingElem x = rng();
    const auto s = make_shares(x, rng);
    ASSERT_EQ(reconstruct(s[0], s[1], s[2]), x);
  }
  const FixedCodec c;
  const auto s = make_shares(c.encode(1.5), rng);
  EXPECT_EQ(c.decode(reconstruct(s[0], s[1], s[2])), 1.5);
}

TEST(Sharing, TamperedOverlapIsRejected) {
  std::mt19937_64 rng(2);
  auto s = make_shares(42, rng);
  EXPECT_EQ(reconstruct(s[0], s[1], s[2]), 42u);
  s[1].lo += 1;
  EXPECT_THROW(reconstruct(s[0], s[1], s[2]), ShareConsistencyError);

  auto b = make_bool_shares(0b1011, rng);
  EXPECT_EQ(reconstruct(b[0], b[1], b[2]), 0b1011u);
  b[2].hi ^= 1;
  EXPECT_THROW(reconstruct(b[0], b[1], b[2]), ShareConsistencyError);
}

TEST(Sharing, LocalAlgebra) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 10000; ++i) {
    const RingElem x = rng(), y = rng(), c1 = rng(), c2 = rng(), c3 = rng();
    const auto sx = make_shares(x, rng), sy = make_shares(y, rng);
    std::array<ArithShare, 3> sum, aff;
    for (int p = 0; p < 3; ++p) {
      sum[p] = local_add(sx[p], sy[p]);
      aff[p] = local_affine(PartyId(p), c1, sx[p], c2, sy[p], c3);
    }
    ASSERT_EQ(reconstruct(sum[0], sum[1], sum[2]), x + y);
    ASSERT_EQ(reconstruct(aff[0], aff[1], aff[2]), c1 * x + c2 * y + c3);
  }
}

TEST(Sharing, AffineExamples) {
  const FixedCodec c;
  std::mt19937_64 rng(4);
  const auto x = make_shares(c.encode(1.0), rng), y = make_shares(c.encode(1.0), rng);
  auto eval = [&](RingElem c1, RingElem c2, RingElem c3) {
    std::array<ArithShare, 3> r;
    for (int p = 0; p < 3; ++p) r[p] = local_affine(PartyId(p), c1, x[p], c2, y[p], c3);
    return c.decode(reconstruct(r[0], r[1], r[2]));
  };
  EXPECT_EQ(eval(1, 1, 0), 2.0);
  EXPECT_EQ(eval(1, 0, 0), 1.0);
  EXPECT_EQ(eval(2, 3, c.encode(1.0)), 6.0);
}

// Pearson statistic of the top byte of each party's lo component over 10^4
// sharings of one secret, against the 0.999 quantile of chi-square(255).
TEST(Sharing, LowComponentLooksUniform) {
  constexpr double kChi2Critical = 330.51974363400586;
  std::mt19937_64 rng(5);
  std::array<std::array<int, 256>, 3> bins{};
  constexpr int kSamples = 10000;
  for (int i = 0; i < kSamples; ++i) {
    const auto s = make_shares(123456789, rng);
    for (int p = 0; p < 3; ++p) bins[p][s[p].lo >> 56] += 1;
  }
  const double expected = kSamples / 256.0;
  for (int p = 0; p < 3; ++p) {
    double chi2 = 0;
    for (int b : bins[p]) chi2 += (b - expected) * (b - expected) / expected;
    EXPECT_LT(chi2, kChi2Critical) << "party " << p;
  }
}

TEST(Ring, SignedView) {
  EXPECT_EQ(to_signed(kTwo64Minus(1)), -1);
  EXPECT_EQ(from_signed(-262144), kTwo64Minus(262144));
  EXPECT_EQ(to_signed(RingElem{1} << 63), std::numeric_limits<std::int64_t>::min());
}

}  // namespace
}  // namespace puma
