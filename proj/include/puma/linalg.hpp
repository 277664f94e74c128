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

#include <cstddef>
#include <span>
#include <vector>

#include "puma/primitives.hpp"

namespace puma {

namespace detail {

struct MatDims {
  std::size_t batch, m, k, n;
};

// A is [m, k] or [b, m, k]; B is [k, n] or [b, k, n] (a rank-2 B is shared
// across the batch).
inline MatDims matmul_dims(const Shape& a, const Shape& b) {
  if ((a.size() != 2 && a.size() != 3) || (b.size() != 2 && b.size() != 3)) {
    throw ShapeError("matmul expects rank-2 or rank-3 operands, got " + shape_str(a) + " x " + shape_str(b));
  }
  const std::size_t batch = a.size() == 3 ? a[0] : 1;
  if (b.size() == 3 && (a.size() != 3 || b[0] != batch)) {
    throw ShapeError("matmul batch mismatch " + shape_str(a) + " x " + shape_str(b));
  }
  const std::size_t m = a[a.size() - 2], k = a.back();
  const std::size_t kb = b[b.size() - 2], n = b.back();
  if (k != kb) throw ShapeError("matmul inner dimension mismatch " + shape_str(a) + " x " + shape_str(b));
  return {batch, m, k, n};
}

inline Shape matmul_shape(const Shape& a, const MatDims& d) {
  return a.size() == 3 ? Shape{d.batch, d.m, d.n} : Shape{d.m, d.n};
}

// out[b] += A[b] * B[b] over uint64 (wrapping).
template <class GetA, class GetB>
void ring_matmul(const MatDims& d, bool b_batched, GetA a, GetB b, std::vector<RingElem>& out) {
  for (std::size_t t = 0; t < d.batch; ++t) {
    const std::size_t bo = b_batched ? t * d.k * d.n : 0;
    for (std::size_t i = 0; i < d.m; ++i) {
      RingElem* row = out.data() + (t * d.m + i) * d.n;
      for (std::size_t kk = 0; kk < d.k; ++kk) {
        const RingElem av = a((t * d.m + i) * d.k + kk);
        if (av == 0) continue;
        for (std::size_t j = 0; j < d.n; ++j) row[j] += av * b(bo + kk * d.n + j);
      }
    }
  }
}

}  // namespace detail

// Ring matrix product without rescaling: the local cross terms of every
// output element are summed and reshared once.
inline SharedTensor matmul_raw(Party& p, const SharedTensor& a, const SharedTensor& b) {
  const auto d = detail::matmul_dims(a.shape(), b.shape());
  const bool b_batched = b.shape().size() == 3;
  std::vector<RingElem> lo_sum(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) lo_sum[i] = b[i].lo + b[i].hi;
  // z = A_lo (B_lo + B_hi) + A_hi B_lo
  std::vector<RingElem> z(d.batch * d.m * d.n, 0);
  detail::ring_matmul(
      d, b_batched, [&](std::size_t i) { return a[i].lo; }, [&](std::size_t i) { return lo_sum[i]; }, z);
  detail::ring_matmul(
      d, b_batched, [&](std::size_t i) { return a[i].hi; }, [&](std::size_t i) { return b[i].lo; }, z);
  return SharedTensor(detail::matmul_shape(a.shape(), d), reshare(p, std::move(z)));
}

// Fixed-point matrix product: one reshare and one truncation per output.
inline SharedTensor secure_matmul(Party& p, const SharedTensor& a, const SharedTensor& b) {
  return trunc(p, matmul_raw(p, a, b), p.frac_bits());
}

// Product with a public ring matrix [k, n]. Local on both components; only the
// truncation communicates.
inline SharedTensor matmul_public_raw(const SharedTensor& a, std::span<const RingElem> b, const Shape& b_shape) {
  const auto d = detail::matmul_dims(a.shape(), b_shape);
  if (b.size() != numel(b_shape)) throw ShapeError("public matrix length mismatch");
  std::vector<RingElem> lo(d.batch * d.m * d.n, 0), hi(lo.size(), 0);
  auto get_b = [&](std::size_t i) { return b[i]; };
  detail::ring_matmul(d, b_shape.size() == 3, [&](std::size_t i) { return a[i].lo; }, get_b, lo);
  detail::ring_matmul(d, b_shape.size() == 3, [&](std::size_t i) { return a[i].hi; }, get_b, hi);
  SharedTensor out(detail::matmul_shape(a.shape(), d));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = {lo[i], hi[i]};
  return out;
}

inline SharedTensor secure_matmul_public(Party& p, const SharedTensor& a, std::span<const RingElem> b,
                                         const Shape& b_shape) {
  return trunc(p, matmul_public_raw(a, b, b_shape), p.frac_bits());
}

}  // namespace puma
