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

// Analytic communication model: bytes sent by each party (all parties send
// the same amount in every protocol below). Derived from the message pattern
// of each protocol, independently of the runtime counters, so tests can
// assert that the measured counts match exactly.

#include <cstdint>

#include "puma/fxp_math.hpp"
#include "puma/transformer.hpp"
#include "puma/wire.hpp"

namespace puma::cost {

using Bytes = std::uint64_t;

inline Bytes packed(std::size_t n, unsigned width) { return wire::packed_size(n, width); }

inline Bytes reshare(std::size_t n) { return 8 * Bytes(n); }
inline Bytes open(std::size_t n) { return 8 * Bytes(n); }
inline Bytes mul(std::size_t n) { return reshare(n); }
inline Bytes trunc(std::size_t n) { return 16 * Bytes(n); }
inline Bytes mul_fixed(std::size_t n) { return mul(n) + trunc(n); }
inline Bytes square(std::size_t n) { return mul_fixed(n); }

inline Bytes a2b(std::size_t n) {
  // boolean reshare, G = M & N, five double-width levels, one single level
  return packed(n, 64) + packed(n, 64) + 5 * packed(2 * n, 64) + packed(n, 64);
}

inline Bytes msb(std::size_t n) {
  Bytes b = packed(n, 64) + packed(n, 64);
  for (unsigned half = 32; half > 1; half /= 2) b += packed(2 * n, half);
  return b + packed(n, 1);
}

inline Bytes eq_zero(std::size_t n) {
  Bytes b = packed(n, 64);
  for (unsigned half = 32; half >= 1; half /= 2) b += packed(n, half);
  return b;
}

inline Bytes inject(std::size_t n) { return 2 * mul(n); }
inline Bytes mul_ba(std::size_t n) { return inject(n) + mul(n); }

inline Bytes max_rows(std::size_t rows, std::size_t n) {
  Bytes b = 0;
  while (n > 1) {
    const std::size_t m = rows * (n / 2);
    b += msb(m) + mul_ba(m);
    n = (n + 1) / 2;
  }
  return b;
}

inline Bytes msb_onehot(std::size_t n) {
  Bytes b = a2b(n);
  for (unsigned k = 1; k < kNormBits; k <<= 1) b += packed(n, kNormBits);
  return b;
}

inline Bytes normalize(std::size_t n) { return msb_onehot(n) + inject(n * kNormBits) + mul(n) + trunc(n); }

inline Bytes recip(std::size_t n, int iterations = 4) {
  Bytes b = normalize(n) + trunc(n) + mul_fixed(n);
  b += Bytes(iterations - 1) * mul_fixed(2 * n) + mul_fixed(n);
  return b + mul(n) + trunc(n);
}

inline Bytes rsqrt(std::size_t n, int iterations = 3) {
  Bytes b = normalize(n) + trunc(n);
  b += Bytes(iterations) * (square(n) + mul_fixed(n) + mul(n) + trunc(n));
  return b + mul(n) + trunc(n);
}

inline Bytes neg_exp(std::size_t n, int t = NegExpParams{}.t) {
  return msb(n) + trunc(n) + Bytes(t) * square(n) + mul_ba(n);
}

inline Bytes gelu(std::size_t n) {
  return msb(3 * n) + 3 * square(n) + mul_fixed(n) + trunc(2 * n) + mul_ba(3 * n);
}

inline Bytes softmax(std::size_t rows, std::size_t n) {
  const std::size_t total = rows * n;
  return max_rows(rows, n) + neg_exp(total) + recip(rows) + mul_fixed(total) + mul_ba(total);
}

inline Bytes layernorm(std::size_t rows, std::size_t n, LayerNormMode mode = LayerNormMode::standard) {
  const std::size_t total = rows * n;
  Bytes b = trunc(rows) + square(total);
  if (mode == LayerNormMode::standard) b += trunc(rows);
  return b + rsqrt(rows) + 2 * mul_fixed(total);
}

inline Bytes embedding(std::size_t s, std::size_t vocab, std::size_t d) {
  return eq_zero(s * vocab) + inject(s * vocab) + reshare(s * d);
}

// Fixed-point matmul with `outputs` result elements.
inline Bytes matmul(std::size_t outputs) { return reshare(outputs) + trunc(outputs); }

inline Bytes attention(std::size_t heads, std::size_t s, std::size_t dh, bool scale_scores) {
  const std::size_t scores = heads * s * s;
  Bytes b = matmul(scores);
  if (scale_scores) b += trunc(scores);
  return b + softmax(heads * s, s) + matmul(heads * s * dh);
}

inline Bytes multihead(std::size_t s, const ModelConfig& c) {
  return matmul(s * 3 * c.d_model) + attention(c.n_heads, s, c.d_head(), c.attn_scale) + matmul(s * c.d_model);
}

inline Bytes ffn(std::size_t s, const ModelConfig& c) {
  return matmul(s * c.d_ff) + gelu(s * c.d_ff) + matmul(s * c.d_model);
}

inline Bytes block(std::size_t s, const ModelConfig& c) {
  return 2 * layernorm(s, c.d_model, c.ln_mode) + multihead(s, c) + ffn(s, c);
}

inline Bytes forward(std::size_t s, const ModelConfig& c, bool debug_checks = false) {
  Bytes b = embedding(s, c.vocab_size, c.d_model);
  b += Bytes(c.n_layers) * block(s, c);
  if (debug_checks) b += Bytes(c.n_layers) * 2 * open(s * c.d_model);
  return b + layernorm(s, c.d_model, c.ln_mode) + matmul(s * c.vocab_size);
}

}  // namespace puma::cost
