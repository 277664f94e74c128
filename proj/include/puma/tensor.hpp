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

#include <algorithm>
#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "puma/errors.hpp"
#include "puma/ring.hpp"

namespace puma {

using Shape = std::vector<std::size_t>;

inline std::size_t numel(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

inline std::string shape_str(const Shape& shape) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) os << (i ? "," : "") << shape[i];
  os << ']';
  return os.str();
}

// Row-major tensor of one party's share pairs. Layer protocols treat the
// last axis as the "row" axis (softmax, layernorm, max).
template <class Elem>
class BasicShareTensor {
 public:
  BasicShareTensor() = default;
  explicit BasicShareTensor(Shape shape) : shape_(std::move(shape)), data_(numel(shape_)) {}
  BasicShareTensor(Shape shape, std::vector<Elem> data)
      : shape_(std::move(shape)), data_(std::move(data)) {
    if (data_.size() != numel(shape_)) {
      throw ShapeError("tensor data length " + std::to_string(data_.size()) +
                       " does not match shape " + shape_str(shape_));
    }
  }

  const Shape& shape() const { return shape_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }
  std::size_t cols() const { return shape_.empty() ? 1 : shape_.back(); }
  std::size_t rows() const { return cols() == 0 ? 0 : size() / cols(); }

  Elem& operator[](std::size_t i) { return data_[i]; }
  const Elem& operator[](std::size_t i) const { return data_[i]; }
  std::span<Elem> data() { return data_; }
  std::span<const Elem> data() const { return data_; }

  BasicShareTensor reshaped(Shape shape) const& {
    return BasicShareTensor(std::move(shape), data_);
  }
  BasicShareTensor reshaped(Shape shape) && {
    return BasicShareTensor(std::move(shape), std::move(data_));
  }

 private:
  Shape shape_;
  std::vector<Elem> data_;
};

using SharedTensor = BasicShareTensor<ArithShare>;

// Boolean-shared tensor. Only the low `width` bits of each word are meaningful;
// width also decides how many bits go on the wire.
class BoolTensor : public BasicShareTensor<BoolShare> {
 public:
  BoolTensor() = default;
  BoolTensor(Shape shape, unsigned width)
      : BasicShareTensor<BoolShare>(std::move(shape)), width_(width) {}
  BoolTensor(Shape shape, std::vector<BoolShare> data, unsigned width)
      : BasicShareTensor<BoolShare>(std::move(shape), std::move(data)), width_(width) {}

  unsigned width() const { return width_; }

 private:
  unsigned width_ = 64;
};

namespace detail {

inline void require_same_shape(const Shape& a, const Shape& b, const char* op) {
  if (a != b) {
    throw ShapeError(std::string(op) + ": shape mismatch " + shape_str(a) + " vs " + shape_str(b));
  }
}

}  // namespace detail

// ---- arithmetic tensors, local ops ----

inline SharedTensor add(const SharedTensor& a, const SharedTensor& b) {
  detail::require_same_shape(a.shape(), b.shape(), "add");
  SharedTensor out(a.shape());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = local_add(a[i], b[i]);
  return out;
}

inline SharedTensor sub(const SharedTensor& a, const SharedTensor& b) {
  detail::require_same_shape(a.shape(), b.shape(), "sub");
  SharedTensor out(a.shape());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = local_sub(a[i], b[i]);
  return out;
}

inline SharedTensor neg(const SharedTensor& a) {
  SharedTensor out(a.shape());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = local_neg(a[i]);
  return out;
}

// Multiplies by a public ring integer (no rescaling).
inline SharedTensor scale(const SharedTensor& a, RingElem c) {
  SharedTensor out(a.shape());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = local_scale(a[i], c);
  return out;
}

// Elementwise product with public ring integers; the result carries
// the sum of both operands' fractional bits.
inline SharedTensor scale(const SharedTensor& a, std::span<const RingElem> c) {
  if (c.size() != a.size()) throw ShapeError("scale: public operand length mismatch");
  SharedTensor out(a.shape());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = local_scale(a[i], c[i]);
  return out;
}

inline SharedTensor add_public(PartyId p, const SharedTensor& a, RingElem c) {
  SharedTensor out(a.shape());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = local_add_public(p, a[i], c);
  return out;
}

inline SharedTensor add_public(PartyId p, const SharedTensor& a, std::span<const RingElem> c) {
  if (c.size() != a.size()) throw ShapeError("add_public: public operand length mismatch");
  SharedTensor out(a.shape());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = local_add_public(p, a[i], c[i]);
  return out;
}

// Shares of a public tensor (component x_0 carries the value).
inline SharedTensor public_tensor(PartyId p, Shape shape, std::span<const RingElem> values) {
  return add_public(p, SharedTensor(std::move(shape)), values);
}

// Sum along the last axis; result shape drops the last axis to 1.
inline SharedTensor row_sum(const SharedTensor& a) {
  const std::size_t n = a.cols();
  Shape shape = a.shape();
  if (shape.empty()) shape.push_back(1);
  shape.back() = 1;
  SharedTensor out(shape);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    ArithShare acc;
    for (std::size_t j = 0; j < n; ++j) acc = local_add(acc, a[r * n + j]);
    out[r] = acc;
  }
  return out;
}

// Repeats each element of `col` (one per row) across `n` columns.
inline SharedTensor broadcast_cols(const SharedTensor& col, Shape shape) {
  const std::size_t n = shape.back();
  SharedTensor out(std::move(shape));
  if (out.size() != col.size() * n) throw ShapeError("broadcast_cols: row count mismatch");
  for (std::size_t r = 0; r < col.size(); ++r)
    for (std::size_t j = 0; j < n; ++j) out[r * n + j] = col[r];
  return out;
}

// Repeats a length-n vector over every row of `shape`.
inline SharedTensor broadcast_rows(const SharedTensor& vec, Shape shape) {
  const std::size_t n = shape.back();
  if (vec.size() != n) throw ShapeError("broadcast_rows: vector length mismatch");
  SharedTensor out(std::move(shape));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = vec[i % n];
  return out;
}

// Concatenates flat data; the result is 1-D.
template <class T, class... More>
T concat(const T& first, const More&... more) {
  const T* parts[] = {&first, &more...};
  std::size_t total = 0;
  for (const T* p : parts) total += p->size();
  std::vector<std::remove_cvref_t<decltype(first[0])>> data;
  data.reserve(total);
  for (const T* p : parts) data.insert(data.end(), p->data().begin(), p->data().end());
  if constexpr (std::is_same_v<T, BoolTensor>) {
    return T(Shape{total}, std::move(data), first.width());
  } else {
    return T(Shape{total}, std::move(data));
  }
}

// Flat slice [offset, offset + count) with the given shape.
template <class T>
T slice(const T& a, std::size_t offset, Shape shape) {
  const std::size_t count = numel(shape);
  if (offset + count > a.size()) throw ShapeError("slice out of range");
  std::vector<typename std::remove_cvref_t<decltype(a[0])>> data(a.data().begin() + offset,
                                                                 a.data().begin() + offset + count);
  if constexpr (std::is_same_v<T, BoolTensor>) {
    return T(std::move(shape), std::move(data), a.width());
  } else {
    return T(std::move(shape), std::move(data));
  }
}

// Columns [c0, c0 + count) of a rank-2 view (rows x cols).
inline SharedTensor col_slice(const SharedTensor& a, std::size_t c0, std::size_t count) {
  const std::size_t n = a.cols(), m = a.rows();
  if (c0 + count > n) throw ShapeError("col_slice out of range");
  SharedTensor out(Shape{m, count});
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t j = 0; j < count; ++j) out[r * count + j] = a[r * n + c0 + j];
  return out;
}

inline SharedTensor transpose(const SharedTensor& a) {
  if (a.shape().size() != 2) throw ShapeError("transpose expects rank 2");
  const std::size_t m = a.shape()[0], n = a.shape()[1];
  SharedTensor out(Shape{n, m});
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) out[j * m + i] = a[i * n + j];
  return out;
}

// ---- boolean tensors, local ops ----

inline BoolTensor bxor(const BoolTensor& a, const BoolTensor& b) {
  detail::require_same_shape(a.shape(), b.shape(), "xor");
  BoolTensor out(a.shape(), std::max(a.width(), b.width()));
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = local_xor(a[i], b[i]);
  return out;
}

inline BoolTensor bxor_public(PartyId p, const BoolTensor& a, std::uint64_t c) {
  BoolTensor out(a.shape(), a.width());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = local_xor_public(p, a[i], c);
  return out;
}

inline BoolTensor bnot(PartyId p, const BoolTensor& a) {
  const std::uint64_t mask = a.width() >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << a.width()) - 1;
  return bxor_public(p, a, mask);
}

// Applies fn to both components of every element and relabels the width.
template <class Fn>
BoolTensor bmap(const BoolTensor& a, unsigned width, Fn&& fn) {
  BoolTensor out(a.shape(), width);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = {fn(a[i].lo), fn(a[i].hi)};
  return out;
}

// Bit `pos` of every element, moved to bit 0.
inline BoolTensor extract_bit(const BoolTensor& a, unsigned pos) {
  return bmap(a, 1, [pos](std::uint64_t v) { return (v >> pos) & 1u; });
}

}  // namespace puma
