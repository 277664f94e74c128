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

#include <cmath>
#include <utility>
#include <vector>

#include "puma/primitives.hpp"

namespace puma {

// Bit positions considered when normalizing by bit length. Inputs to recip and
// rsqrt must be below 2^kNormBits as ring integers.
inline constexpr unsigned kNormBits = 41;

// One-hot boolean sharing of the highest set bit of a positive x (bits
// [0, width)). Prefix-OR towards the low end, then h = o xor (o >> 1).
inline BoolTensor msb_onehot(Party& p, const SharedTensor& x, unsigned width = kNormBits) {
  const std::uint64_t mask = low_mask(width);
  BoolTensor o = bmap(a2b(p, x), width, [mask](std::uint64_t v) { return v & mask; });
  for (unsigned k = 1; k < width; k <<= 1) {
    const BoolTensor shifted = bmap(o, width, [k](std::uint64_t v) { return v >> k; });
    o = bxor(bxor(o, shifted), band(p, o, shifted));
  }
  return bxor(o, bmap(o, width, [](std::uint64_t v) { return v >> 1; }));
}

// For each table, shares of table[j] where j is the bit length minus one of x.
// All kNormBits one-hot bits are injected in one batch.
inline std::vector<SharedTensor> bit_length_lookup(Party& p, const SharedTensor& x,
                                                   const std::vector<std::vector<RingElem>>& tables) {
  const std::size_t n = x.size();
  const BoolTensor h = msb_onehot(p, x);
  BoolTensor bits(Shape{n * kNormBits}, 1);
  for (std::size_t i = 0; i < n; ++i)
    for (unsigned j = 0; j < kNormBits; ++j) bits[i * kNormBits + j] = {(h[i].lo >> j) & 1u, (h[i].hi >> j) & 1u};
  const SharedTensor inj = inject(p, bits);
  std::vector<SharedTensor> out;
  for (const auto& table : tables) {
    SharedTensor acc(Shape{n});
    for (std::size_t i = 0; i < n; ++i)
      for (unsigned j = 0; j < kNormBits; ++j) acc[i] = local_add(acc[i], local_scale(inj[i * kNormBits + j], table[j]));
    out.push_back(std::move(acc));
  }
  return out;
}

namespace detail {

// u = x / 2^(bit_length(x)) in [0.5, 1) with the codec's fractional bits, plus
// any extra lookups requested by the caller (appended after u).
inline std::vector<SharedTensor> normalize(Party& p, const SharedTensor& x, std::vector<std::vector<RingElem>> extra) {
  const int f = p.frac_bits();
  std::vector<RingElem> pow(kNormBits);
  for (unsigned j = 0; j < kNormBits; ++j) pow[j] = RingElem{1} << (kNormBits - 1 - j);
  extra.insert(extra.begin(), std::move(pow));
  auto looked = bit_length_lookup(p, x, extra);
  looked[0] = trunc(p, mul(p, x, looked[0]), static_cast<int>(kNormBits) - f);
  return looked;
}

}  // namespace detail

// 1/x for decode(x) in [2^-9, 2^18]. Goldschmidt iteration on the normalized
// u in [0.5, 1) starting from w0 = 48/17 - 32/17 u, then rescaled by a public
// power of two selected by the bit length. A `scale` other than 1 is folded
// into that table and gives scale/x at no extra cost.
inline SharedTensor recip(Party& p, const SharedTensor& x, int iterations = 4, double scale = 1.0) {
  const int f = p.frac_bits();
  const auto& codec = p.codec();
  const std::size_t n = x.size();
  const SharedTensor xf = x.reshaped(Shape{n});
  const int k = std::max(0, static_cast<int>(kNormBits) - f);
  std::vector<RingElem> rescale(kNormBits);
  for (unsigned j = 0; j < kNormBits; ++j) {
    rescale[j] = static_cast<RingElem>(std::llround(std::ldexp(scale, f - static_cast<int>(j) - 1 + k)));
  }

  auto parts = detail::normalize(p, xf, {rescale});
  const SharedTensor& u = parts[0];
  SharedTensor w = add_public(p.id(), neg(mul_public_fixed(p, u, 32.0 / 17.0)), codec.encode(48.0 / 17.0));
  SharedTensor e = add_public(p.id(), neg(mul_fixed(p, u, w)), codec.one());
  for (int it = 0; it < iterations; ++it) {
    const SharedTensor one_plus_e = add_public(p.id(), e, codec.one());
    if (it + 1 == iterations) {
      w = mul_fixed(p, w, one_plus_e);
      break;
    }
    const SharedTensor prod = mul_fixed(p, concat(w, e), concat(one_plus_e, e));
    w = slice(prod, 0, Shape{n});
    e = slice(prod, n, Shape{n});
  }
  return trunc(p, mul(p, w, parts[1]), k).reshaped(x.shape());
}

// x^(-1/2) for decode(x) in [2^-10, 2^20]. Newton iteration
// y <- y (3 - u y^2) / 2 on the normalized u, from a minimax linear start.
// The final scale 2^((f - j - 1)/2) is a public table indexed by bit length,
// which also absorbs the sqrt(2) factor of odd exponents.
inline SharedTensor rsqrt(Party& p, const SharedTensor& x, int iterations = 3) {
  const int f = p.frac_bits();
  const auto& codec = p.codec();
  const std::size_t n = x.size();
  const SharedTensor xf = x.reshaped(Shape{n});
  const int k = 59 - (3 * f) / 2;
  std::vector<RingElem> rescale(kNormBits);
  for (unsigned j = 0; j < kNormBits; ++j) {
    rescale[j] = static_cast<RingElem>(std::llround(std::ldexp(1.0, k) * std::pow(2.0, (f - static_cast<int>(j) - 1) / 2.0)));
  }

  auto parts = detail::normalize(p, xf, {rescale});
  const SharedTensor& u = parts[0];
  SharedTensor y = add_public(p.id(), neg(mul_public_fixed(p, u, 0.80998685)), codec.encode(1.78772748));
  for (int it = 0; it < iterations; ++it) {
    const SharedTensor uy2 = mul_fixed(p, u, square(p, y));
    const SharedTensor t = add_public(p.id(), neg(uy2), codec.encode(3.0));
    y = trunc(p, mul(p, y, t), f + 1);
  }
  return trunc(p, mul(p, y, parts[1]), k).reshaped(x.shape());
}

struct NegExpParams {
  double threshold = -14.0;  // exp(-14) < 2^-18
  int t = 5;
};

// exp(x) for x <= 0 as (1 + x/2^t)^(2^t), forced to exactly 0 below the
// threshold. Also returns the keep bit 1{threshold < x}.
inline std::pair<SharedTensor, BoolTensor> neg_exp_masked(Party& p, const SharedTensor& x, NegExpParams params = {}) {
  const BoolTensor keep = lt(p, params.threshold, x);
  SharedTensor z = add_public(p.id(), trunc(p, x, params.t), p.codec().one());
  for (int i = 0; i < params.t; ++i) z = square(p, z);
  return {mul_ba(p, keep, z), keep};
}

inline SharedTensor neg_exp(Party& p, const SharedTensor& x, NegExpParams params = {}) {
  return neg_exp_masked(p, x, params).first;
}

}  // namespace puma
