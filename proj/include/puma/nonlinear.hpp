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
#include <cmath>
#include <span>
#include <vector>

#include "puma/fxp_math.hpp"
#include "puma/linalg.hpp"

namespace puma {

// Piecewise GeLU: 0 below -4, cubic F0 on [-4, -1.95), degree-6 even-plus-
// linear F1 on [-1.95, 3], identity above 3.
struct GeluConstants {
  double lo = -4.0;
  double mid = -1.95;
  double hi = 3.0;
  // F0(x) = f0[0] + f0[1] x + f0[2] x^2 + f0[3] x^3
  std::array<double, 4> f0 = {-0.5054031199708174, -0.42226581151983866, -0.11807612951181953,
                              -0.011034134030615728};
  // F1(x) = f1[0] + f1[1] x + f1[2] x^2 + f1[4] x^4 + f1[6] x^6
  std::array<double, 7> f1 = {0.008526321541038084, 0.5, 0.3603292692789629, 0.0, -0.037688200365904236, 0.0,
                              0.0018067462606141187};
  // Polynomial coefficients carry this many extra fractional bits; the
  // products are summed and truncated once. At 18 bits the rounding of the x^6
  // coefficient alone would cost 2^-19 * 3^6.
  int coeff_extra_bits = 12;
};

// Interval selectors from one msb batch over 3n differences:
// below = 1{x < lo}, and the one-hot z0 (F0), z1 (F1), z2 (identity).
struct GeluSelectors {
  BoolTensor below, z0, z1, z2;
};

inline GeluSelectors gelu_selectors(Party& p, const SharedTensor& x, const GeluConstants& k = {}) {
  const PartyId me = p.id();
  const auto& codec = p.codec();
  const std::size_t n = x.size();
  const SharedTensor xf = x.reshaped(Shape{n});
  // b0 = 1{x < lo}, b1 = 1{x < mid}, b2 = 1{hi < x}
  const SharedTensor diffs = concat(add_public(me, xf, RingElem{0} - codec.encode(k.lo)),
                                    add_public(me, xf, RingElem{0} - codec.encode(k.mid)),
                                    add_public(me, neg(xf), codec.encode(k.hi)));
  const BoolTensor b = msb(p, diffs);
  const BoolTensor b0 = slice(b, 0, Shape{n}), b1 = slice(b, n, Shape{n}), b2 = slice(b, 2 * n, Shape{n});
  return {b0, bxor(b0, b1), bnot(me, bxor(b1, b2)), b2};
}

inline SharedTensor secure_gelu(Party& p, const SharedTensor& x, const GeluConstants& k = {}) {
  const PartyId me = p.id();
  const auto& codec = p.codec();
  const int f = p.frac_bits();
  const std::size_t n = x.size();
  const SharedTensor xf = x.reshaped(Shape{n});
  const auto [below, z0, z1, z2] = gelu_selectors(p, xf, k);

  const SharedTensor x2 = square(p, xf);
  const SharedTensor x3 = mul_fixed(p, xf, x2);
  const SharedTensor x4 = square(p, x2);
  const SharedTensor x6 = square(p, x3);

  const int cbits = f + k.coeff_extra_bits;
  auto coeff = [cbits](double c) { return from_signed(std::llround(std::ldexp(c, cbits))); };
  auto poly = [&](std::initializer_list<std::pair<double, const SharedTensor*>> terms) {
    SharedTensor acc(Shape{n});
    for (const auto& [c, t] : terms) acc = add(acc, scale(*t, coeff(c)));
    return acc;
  };
  const SharedTensor f0_raw = poly({{k.f0[1], &xf}, {k.f0[2], &x2}, {k.f0[3], &x3}});
  const SharedTensor f1_raw = poly({{k.f1[1], &xf}, {k.f1[2], &x2}, {k.f1[4], &x4}, {k.f1[6], &x6}});
  const SharedTensor polys = trunc(p, concat(f0_raw, f1_raw), cbits);
  const SharedTensor f0v = add_public(me, slice(polys, 0, Shape{n}), codec.encode(k.f0[0]));
  const SharedTensor f1v = add_public(me, slice(polys, n, Shape{n}), codec.encode(k.f1[0]));

  const SharedTensor sel = mul_ba(p, concat(z0, z1, z2), concat(f0v, f1v, xf));
  return add(add(slice(sel, 0, Shape{n}), slice(sel, n, Shape{n})), slice(sel, 2 * n, Shape{n})).reshaped(x.shape());
}

struct SoftmaxConstants {
  NegExpParams neg_exp;
  // The shift epsilon keeps every exponent strictly negative. 1e-6 is below
  // the fixed-point resolution, so it is applied as one ulp.
  RingElem epsilon_ulps = 1;
  // The row sum's reciprocal is taken as recip_scale / sum. Rounding in recip
  // and the final product can otherwise lift a dominant entry 3 ulp above 1;
  // 1 - 2^-15 pulls it back by 8 ulp and every output down by 2^-15 relative.
  double recip_scale = 1.0 - std::ldexp(1.0, -15);
};

// Row-wise softmax over the last axis: one max tournament, one clipped negExp
// and one reciprocal per row.
inline SharedTensor secure_softmax(Party& p, const SharedTensor& x, const SoftmaxConstants& k = {}) {
  if (x.empty() || x.cols() == 0) throw ShapeError("softmax of an empty row");
  const PartyId me = p.id();
  const SharedTensor m = max_rows(p, x);
  const SharedTensor shifted = add_public(me, sub(x, broadcast_cols(m, x.shape())), RingElem{0} - k.epsilon_ulps);
  auto [z, keep] = neg_exp_masked(p, shifted, k.neg_exp);
  const SharedTensor denom = recip(p, row_sum(z), 4, k.recip_scale);
  const SharedTensor q = mul_fixed(p, z, broadcast_cols(denom, x.shape()));
  return mul_ba(p, keep, q);
}

enum class LayerNormMode {
  standard,  // gamma (x - mu) / sqrt(var + eps) + beta, var = sigma / n
  paper,     // gamma (x - mu) / sqrt(sigma) + beta, sigma = sum (x - mu)^2
};

inline constexpr double kLayerNormEps = 1e-5;

// LayerNorm over the last axis; gamma and beta have length cols.
inline SharedTensor secure_layernorm(Party& p, const SharedTensor& x, const SharedTensor& gamma,
                                     const SharedTensor& beta, LayerNormMode mode = LayerNormMode::standard) {
  const std::size_t n = x.cols();
  if (n < 2) throw ShapeError("layernorm needs rows of length >= 2");
  if (gamma.size() != n || beta.size() != n) throw ShapeError("layernorm gamma/beta length mismatch");
  const PartyId me = p.id();
  const auto& codec = p.codec();
  const double inv_n = 1.0 / static_cast<double>(n);

  const SharedTensor mu = mul_public_fixed(p, row_sum(x), inv_n);
  const SharedTensor d = sub(x, broadcast_cols(mu, x.shape()));
  SharedTensor sigma = row_sum(square(p, d));
  if (mode == LayerNormMode::standard) {
    sigma = add_public(me, mul_public_fixed(p, sigma, inv_n), codec.encode(kLayerNormEps));
  }
  const SharedTensor r = rsqrt(p, sigma);
  const SharedTensor c = mul_fixed(p, d, broadcast_cols(r, x.shape()));
  return add(mul_fixed(p, broadcast_rows(gamma, x.shape()), c), broadcast_rows(beta, x.shape()));
}

// Embedding lookup for a batch of secret token ids (ring integers, not
// fixed point): one-hot o[t, i] = eq(i, id[t]) injected to arithmetic shares,
// then an exact ring product with the table. Out-of-range ids give zero rows.
inline SharedTensor secure_embedding(Party& p, const SharedTensor& ids, const SharedTensor& table) {
  if (table.shape().size() != 2) throw ShapeError("embedding table must be rank 2");
  const std::size_t vocab = table.shape()[0];
  const std::size_t s = ids.size();
  std::vector<RingElem> index(s * vocab);
  SharedTensor repeated(Shape{s * vocab});
  for (std::size_t t = 0; t < s; ++t)
    for (std::size_t i = 0; i < vocab; ++i) {
      index[t * vocab + i] = i;
      repeated[t * vocab + i] = ids[t];
    }
  const SharedTensor onehot = inject(p, eq(p, index, repeated)).reshaped(Shape{s, vocab});
  return matmul_raw(p, onehot, table);
}

}  // namespace puma
