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


#pragma once

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "puma/errors.hpp"

namespace puma {

// Elements of Z_{2^64}. Unsigned arithmetic gives the wrap-around for free.
using RingElem = std::uint64_t;
inline constexpr int kRingBits = 64;

// Two's-complement view of a ring element.
constexpr std::int64_t to_signed(RingElem v) { return static_cast<std::int64_t>(v); }
constexpr RingElem from_signed(std::int64_t v) { return static_cast<RingElem>(v); }

// Fixed-point encoding of reals into the ring: v -> round(v * 2^frac_bits).
// Rounding is half away from zero; decode treats residues >= 2^63 as negative.
struct FixedCodec {
  int frac_bits = 18;
  double max_magnitude = 1048576.0;  // 2^20

  double scale() const { return std::ldexp(1.0, frac_bits); }
  double ulp() const { return std::ldexp(1.0, -frac_bits); }
  RingElem one() const { return RingElem{1} << frac_bits; }

  RingElem encode(double v) const {
    if (!(std::fabs(v) < max_magnitude)) {
      throw MagnitudeError("fixed-point encode: |" + std::to_string(v) +
                           "| is not below " + std::to_string(max_magnitude));
    }
    return from_signed(std::llround(v * scale()));
  }

  double decode(RingElem r) const {
    return static_cast<double>(to_signed(r)) / scale();
  }
};

// Identity of one of the three computing parties.
class PartyId {
 public:
  constexpr PartyId() = default;
  constexpr explicit PartyId(int id) : id_(id) {
    if (id < 0 || id > 2) throw std::invalid_argument("party id must be 0, 1 or 2");
  }
  constexpr int value() const { return id_; }
  constexpr PartyId next() const { return PartyId((id_ + 1) % 3); }
  constexpr PartyId prev() const { return PartyId((id_ + 2) % 3); }
  constexpr bool operator==(const PartyId&) const = default;

 private:
  int id_ = 0;
};

// Party i's view of a 2-out-of-3 replicated sharing x = x_0 + x_1 + x_2:
// lo = x_i, hi = x_{i+1} (indices mod 3).
struct ArithShare {
  RingElem lo = 0;
  RingElem hi = 0;
  constexpr bool operator==(const ArithShare&) const = default;
};

// Same layout over GF(2)^64; each bit position is an independent XOR sharing.
struct BoolShare {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  constexpr bool operator==(const BoolShare&) const = default;
};

// Builds the three replicated pairs from explicit components x_0, x_1.
constexpr std::array<ArithShare, 3> make_shares_from(RingElem x, RingElem x0, RingElem x1) {
  const RingElem x2 = x - x0 - x1;
  return {ArithShare{x0, x1}, ArithShare{x1, x2}, ArithShare{x2, x0}};
}

// Shares x with x_0, x_1 drawn uniformly from `rng` (a 64-bit URBG).
template <class Rng>
std::array<ArithShare, 3> make_shares(RingElem x, Rng& rng) {
  static_assert(std::numeric_limits<typename Rng::result_type>::digits == 64);
  const RingElem x0 = rng();
  const RingElem x1 = rng();
  return make_shares_from(x, x0, x1);
}

inline RingElem reconstruct(const ArithShare& s0, const ArithShare& s1, const ArithShare& s2) {
  if (s0.hi != s1.lo || s1.hi != s2.lo || s2.hi != s0.lo) {
    throw ShareConsistencyError("replicated share components disagree");
  }
  return s0.lo + s1.lo + s2.lo;
}

template <class Rng>
std::array<BoolShare, 3> make_bool_shares(std::uint64_t x, Rng& rng) {
  const std::uint64_t x0 = rng();
  const std::uint64_t x1 = rng();
  const std::uint64_t x2 = x ^ x0 ^ x1;
  return {BoolShare{x0, x1}, BoolShare{x1, x2}, BoolShare{x2, x0}};
}

inline std::uint64_t reconstruct(const BoolShare& s0, const BoolShare& s1, const BoolShare& s2) {
  if (s0.hi != s1.lo || s1.hi != s2.lo || s2.hi != s0.lo) {
    throw ShareConsistencyError("replicated boolean share components disagree");
  }
  return s0.lo ^ s1.lo ^ s2.lo;
}

// ---- local (communication-free) share algebra ----

constexpr ArithShare local_add(const ArithShare& a, const ArithShare& b) {
  return {a.lo + b.lo, a.hi + b.hi};
}

constexpr ArithShare local_sub(const ArithShare& a, const ArithShare& b) {
  return {a.lo - b.lo, a.hi - b.hi};
}

constexpr ArithShare local_neg(const ArithShare& a) { return {RingElem{0} - a.lo, RingElem{0} - a.hi}; }

constexpr ArithShare local_scale(const ArithShare& a, RingElem c) { return {a.lo * c, a.hi * c}; }

// Adds a public constant. The constant lands in component x_0, which is held
// by party 0 (as lo) and party 2 (as hi).
constexpr ArithShare local_add_public(PartyId p, const ArithShare& a, RingElem c) {
  ArithShare out = a;
  if (p.value() == 0) out.lo += c;
  if (p.value() == 2) out.hi += c;
  return out;
}

// Share of c1*x + c2*y + c3.
constexpr ArithShare local_affine(PartyId p, RingElem c1, const ArithShare& x, RingElem c2,
                                  const ArithShare& y, RingElem c3) {
  return local_add_public(p, local_add(local_scale(x, c1), local_scale(y, c2)), c3);
}

constexpr BoolShare local_xor(const BoolShare& a, const BoolShare& b) {
  return {a.lo ^ b.lo, a.hi ^ b.hi};
}

constexpr BoolShare local_xor_public(PartyId p, const BoolShare& a, std::uint64_t c) {
  BoolShare out = a;
  if (p.value() == 0) out.lo ^= c;
  if (p.value() == 2) out.hi ^= c;
  return out;
}

}  // namespace puma
