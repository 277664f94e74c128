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

#include <cstdint>
#include <span>
#include <vector>

#include "puma/errors.hpp"
#include "puma/party.hpp"
#include "puma/tensor.hpp"

namespace puma {

inline std::uint64_t low_mask(unsigned width) {
  return width >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width) - 1;
}

// ---------------------------------------------------------------------------
// Resharing and opening
// ---------------------------------------------------------------------------

// Turns this party's additive component z_i (of a 3-out-of-3 sharing) into
// replicated shares: P_i masks z_i with alpha_i, sends it to P_{i-1} and pairs
// it with the value received from P_{i+1}. One round, 8 bytes per element.
inline std::vector<ArithShare> reshare(Party& p, std::vector<RingElem> z) {
  const auto alpha = p.prf().zero_share(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) z[i] += alpha[i];
  p.send_ring(p.id().prev(), z);
  const auto from_next = p.recv_ring(p.id().next(), z.size());
  std::vector<ArithShare> out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = {z[i], from_next[i]};
  return out;
}

inline std::vector<BoolShare> reshare_bool(Party& p, std::vector<std::uint64_t> z, unsigned width) {
  const auto beta = p.prf().zero_share_xor(z.size());
  const std::uint64_t mask = low_mask(width);
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = (z[i] ^ beta[i]) & mask;
  p.send_bits(p.id().prev(), z, width);
  const auto from_next = p.recv_bits(p.id().next(), z.size(), width);
  std::vector<BoolShare> out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = {z[i], from_next[i]};
  return out;
}

// Reveals x to every party. P_i is missing x_{i+2}, which P_{i+1} holds as its
// hi component, so each party sends hi to its previous party.
inline std::vector<RingElem> open(Party& p, const SharedTensor& x) {
  std::vector<RingElem> hi(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) hi[i] = x[i].hi;
  p.send_ring(p.id().prev(), hi);
  const auto missing = p.recv_ring(p.id().next(), x.size());
  std::vector<RingElem> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i].lo + x[i].hi + missing[i];
  return out;
}

inline std::vector<std::uint64_t> open(Party& p, const BoolTensor& x) {
  std::vector<std::uint64_t> hi(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) hi[i] = x[i].hi;
  p.send_bits(p.id().prev(), hi, x.width());
  const auto missing = p.recv_bits(p.id().next(), x.size(), x.width());
  std::vector<std::uint64_t> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = (x[i].lo ^ x[i].hi ^ missing[i]) & low_mask(x.width());
  return out;
}

// Opening that also cross-checks replication: the missing component arrives
// from both peers and must agree. Used by debug-mode layer checks.
inline std::vector<RingElem> open_checked(Party& p, const SharedTensor& x) {
  std::vector<RingElem> lo(x.size()), hi(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    lo[i] = x[i].lo;
    hi[i] = x[i].hi;
  }
  p.send_ring(p.id().prev(), hi);
  p.send_ring(p.id().next(), lo);
  const auto from_next = p.recv_ring(p.id().next(), x.size());
  const auto from_prev = p.recv_ring(p.id().prev(), x.size());
  std::vector<RingElem> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (from_next[i] != from_prev[i]) {
      throw ShareConsistencyError("party " + std::to_string(p.id().value()) +
                                  ": inconsistent replicated share at element " + std::to_string(i));
    }
    out[i] = x[i].lo + x[i].hi + from_next[i];
  }
  return out;
}

// Secret-shares a tensor known to `owner`. The owner's two components come
// from the keys it shares with each neighbour; the third, x - x_o - x_{o+1},
// is sent to both neighbours. Only `values` at the owner is read.
inline SharedTensor share_input(Party& p, PartyId owner, const Shape& shape, std::span<const RingElem> values = {}) {
  const std::size_t n = numel(shape);
  const PartyId me = p.id();
  auto rnd = p.prf().draw(n, me == owner || me == owner.prev(), me == owner || me == owner.next());
  SharedTensor out(shape);
  if (me == owner) {
    if (values.size() != n) throw ShapeError("share_input: value count does not match shape " + shape_str(shape));
    std::vector<RingElem> third(n);
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = {rnd.with_prev[i], rnd.with_next[i]};
      third[i] = values[i] - rnd.with_prev[i] - rnd.with_next[i];
    }
    p.send_ring(me.next(), third);
    p.send_ring(me.prev(), third);
  } else if (me == owner.next()) {
    const auto third = p.recv_ring(owner, n);
    for (std::size_t i = 0; i < n; ++i) out[i] = {rnd.with_prev[i], third[i]};
  } else {
    const auto third = p.recv_ring(owner, n);
    for (std::size_t i = 0; i < n; ++i) out[i] = {third[i], rnd.with_next[i]};
  }
  return out;
}

// Boolean counterpart of share_input (XOR components, `width` bits).
inline BoolTensor share_input_bool(Party& p, PartyId owner, const Shape& shape, unsigned width,
                                   std::span<const std::uint64_t> values = {}) {
  const std::size_t n = numel(shape);
  const PartyId me = p.id();
  const std::uint64_t mask = low_mask(width);
  auto rnd = p.prf().draw(n, me == owner || me == owner.prev(), me == owner || me == owner.next());
  for (auto& v : rnd.with_next) v &= mask;
  for (auto& v : rnd.with_prev) v &= mask;
  BoolTensor out(shape, width);
  if (me == owner) {
    if (values.size() != n) throw ShapeError("share_input_bool: value count does not match shape " + shape_str(shape));
    std::vector<std::uint64_t> third(n);
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = {rnd.with_prev[i], rnd.with_next[i]};
      third[i] = (values[i] ^ rnd.with_prev[i] ^ rnd.with_next[i]) & mask;
    }
    p.send_bits(me.next(), third, width);
    p.send_bits(me.prev(), third, width);
  } else if (me == owner.next()) {
    const auto third = p.recv_bits(owner, n, width);
    for (std::size_t i = 0; i < n; ++i) out[i] = {rnd.with_prev[i], third[i]};
  } else {
    const auto third = p.recv_bits(owner, n, width);
    for (std::size_t i = 0; i < n; ++i) out[i] = {third[i], rnd.with_next[i]};
  }
  return out;
}

// ---------------------------------------------------------------------------
// Multiplication and truncation
// ---------------------------------------------------------------------------

// Elementwise ring product (no rescaling): z_i = x_i y_i + x_{i+1} y_i + x_i y_{i+1}.
inline SharedTensor mul(Party& p, const SharedTensor& x, const SharedTensor& y) {
  detail::require_same_shape(x.shape(), y.shape(), "mul");
  std::vector<RingElem> z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i].lo * y[i].lo + x[i].hi * y[i].lo + x[i].lo * y[i].hi;
  return SharedTensor(x.shape(), reshare(p, std::move(z)));
}

inline SharedTensor square_raw(Party& p, const SharedTensor& x) {
  std::vector<RingElem> z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i].lo * x[i].lo + 2 * x[i].lo * x[i].hi;
  return SharedTensor(x.shape(), reshare(p, std::move(z)));
}

// Truncation by `bits` with a dealer-assisted masked opening.
//
// P0 holds A = x_0 + x_1 and P1 holds B = x_2, a 2-out-of-2 sharing of x. P2
// knows r = r_A + r_B (r_A from the key it shares with P0, r_B from the key it
// shares with P1) and deals additive shares of r's top bit and of
// floor((r mod 2^63) / 2^bits) to P0/P1. P0 and P1 open c = x + 2^62 + r, then
//   floor(x/2^bits) + e = floor((c mod 2^63)/2^bits) - rc + (c_63 xor r_63) 2^(63-bits) - 2^(62-bits)
// with e in {0, 1}. Requires |x| < 2^62; there is no wrap-around failure mode.
// The result is re-replicated with the pairwise keys in a second exchange.
// Two rounds, 16 bytes per element for every party.
inline SharedTensor trunc(Party& p, const SharedTensor& x, int bits) {
  const std::size_t n = x.size();
  const int me = p.id().value();
  SharedTensor out(x.shape());
  if (bits == 0) return x;

  // Layout of the pairwise stream: [r | rb | rc | s], n values each.
  auto rnd = p.prf().draw(4 * n, me != 0, me != 1);
  const RingElem offset = RingElem{1} << 62;
  const int up = 63 - bits;

  if (me == 2) {
    const auto& with_p0 = rnd.with_next;  // P2's next is P0
    const auto& with_p1 = rnd.with_prev;
    std::vector<RingElem> dealt(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
      const RingElem r = with_p0[i] + with_p1[i];
      dealt[i] = (r >> 63) - with_p0[n + i];
      dealt[n + i] = ((r << 1) >> (bits + 1)) - with_p0[2 * n + i];
      out[i] = {with_p1[3 * n + i], with_p0[3 * n + i]};
    }
    p.send_ring(PartyId(1), dealt);
    return out;
  }

  const bool is_p0 = me == 0;
  const auto& with_p2 = is_p0 ? rnd.with_prev : rnd.with_next;
  const PartyId peer(is_p0 ? 1 : 0);

  std::vector<RingElem> masked(n);
  for (std::size_t i = 0; i < n; ++i) {
    masked[i] = is_p0 ? x[i].lo + x[i].hi + offset + with_p2[i] : x[i].hi + with_p2[i];
  }
  p.send_ring(peer, masked);
  const auto other = p.recv_ring(peer, n);

  std::vector<RingElem> rb(n), rc(n);
  if (is_p0) {
    for (std::size_t i = 0; i < n; ++i) {
      rb[i] = with_p2[n + i];
      rc[i] = with_p2[2 * n + i];
    }
  } else {
    const auto dealt = p.recv_ring(PartyId(2), 2 * n);
    std::copy(dealt.begin(), dealt.begin() + n, rb.begin());
    std::copy(dealt.begin() + n, dealt.end(), rc.begin());
  }

  std::vector<RingElem> y(n), s(n);
  for (std::size_t i = 0; i < n; ++i) {
    const RingElem c = masked[i] + other[i];
    const RingElem c_top = c >> 63;
    RingElem b = rb[i] - 2 * c_top * rb[i];
    RingElem yi = (b << up) - rc[i];
    if (is_p0) {
      b += c_top;
      yi = ((c << 1) >> (bits + 1)) - rc[i] + (b << up) - (RingElem{1} << (62 - bits));
    }
    s[i] = with_p2[3 * n + i];
    y[i] = yi - s[i];
  }
  p.send_ring(peer, y);
  const auto y_other = p.recv_ring(peer, n);
  for (std::size_t i = 0; i < n; ++i) {
    const RingElem mid = y[i] + y_other[i];
    out[i] = is_p0 ? ArithShare{s[i], mid} : ArithShare{mid, s[i]};
  }
  return out;
}

// Share-local probabilistic truncation in the style of ABY3: P1 and P2 agree
// on r; P1 sends ((x_1 + x_2) >> bits) - r to P0. One round, only P1 sends
// (8 bytes per element). Fails with probability about |x| / 2^64, with an error
// of 2^(64-bits). Kept for comparison; trunc() is the default.
inline SharedTensor trunc_probabilistic(Party& p, const SharedTensor& x, int bits) {
  const std::size_t n = x.size();
  const int me = p.id().value();
  auto rnd = p.prf().draw(n, me == 1, me == 2);
  SharedTensor out(x.shape());
  auto ashift = [bits](RingElem v) { return from_signed(to_signed(v) >> bits); };
  if (me == 0) {
    const auto z = p.recv_ring(PartyId(1), n);
    for (std::size_t i = 0; i < n; ++i) out[i] = {ashift(x[i].lo), z[i]};
  } else if (me == 1) {
    std::vector<RingElem> z(n);
    for (std::size_t i = 0; i < n; ++i) {
      z[i] = ashift(x[i].lo + x[i].hi) - rnd.with_next[i];
      out[i] = {z[i], rnd.with_next[i]};
    }
    p.send_ring(PartyId(0), z);
  } else {
    for (std::size_t i = 0; i < n; ++i) out[i] = {rnd.with_prev[i], ashift(x[i].hi)};
  }
  return out;
}

// Fixed-point product: mul followed by truncation by the codec's frac_bits.
inline SharedTensor mul_fixed(Party& p, const SharedTensor& x, const SharedTensor& y) {
  return trunc(p, mul(p, x, y), p.frac_bits());
}

inline SharedTensor square(Party& p, const SharedTensor& x) {
  return trunc(p, square_raw(p, x), p.frac_bits());
}

// Product with public fixed-point constants followed by truncation.
inline SharedTensor mul_public_fixed(Party& p, const SharedTensor& x, double c) {
  return trunc(p, scale(x, p.codec().encode(c)), p.frac_bits());
}

// ---------------------------------------------------------------------------
// Boolean circuits
// ---------------------------------------------------------------------------

// ANDs lhs[k] with rhs[k] for every k in a single round (one message).
// All operands must share one width.
inline std::vector<BoolTensor> and_batch(Party& p, std::span<const BoolTensor> lhs, std::span<const BoolTensor> rhs) {
  if (lhs.size() != rhs.size() || lhs.empty()) throw ShapeError("and_batch: operand count mismatch");
  const unsigned width = lhs[0].width();
  std::vector<std::uint64_t> z;
  for (std::size_t k = 0; k < lhs.size(); ++k) {
    detail::require_same_shape(lhs[k].shape(), rhs[k].shape(), "and");
    if (lhs[k].width() != width || rhs[k].width() != width) throw ShapeError("and_batch: mixed widths");
    for (std::size_t i = 0; i < lhs[k].size(); ++i) {
      const BoolShare& a = lhs[k][i];
      const BoolShare& b = rhs[k][i];
      z.push_back((a.lo & b.lo) ^ (a.hi & b.lo) ^ (a.lo & b.hi));
    }
  }
  const auto shares = reshare_bool(p, std::move(z), width);
  std::vector<BoolTensor> out;
  std::size_t off = 0;
  for (const auto& l : lhs) {
    out.emplace_back(l.shape(), std::vector<BoolShare>(shares.begin() + off, shares.begin() + off + l.size()), width);
    off += l.size();
  }
  return out;
}

inline BoolTensor band(Party& p, const BoolTensor& a, const BoolTensor& b) {
  const BoolTensor l[] = {a}, r[] = {b};
  return std::move(and_batch(p, l, r)[0]);
}

namespace detail {

// Boolean sharings M of x_0 + x_1 (P0 knows both) and N of x_2 (a single
// replicated component held by P1 and P2); x = M + N over the integers mod 2^64.
// `negate_n` yields N = -x_2 instead, so that x == 0 iff M == N bitwise.
inline std::pair<BoolTensor, BoolTensor> split_to_bool(Party& p, const SharedTensor& x, bool negate_n = false) {
  const int me = p.id().value();
  std::vector<std::uint64_t> z(x.size(), 0);
  if (me == 0) {
    for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i].lo + x[i].hi;
  }
  BoolTensor m(x.shape(), reshare_bool(p, std::move(z), 64), 64);
  BoolTensor n(x.shape(), 64);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (me == 1) n[i].hi = negate_n ? RingElem{0} - x[i].hi : x[i].hi;
    if (me == 2) n[i].lo = negate_n ? RingElem{0} - x[i].lo : x[i].lo;
  }
  return {std::move(m), std::move(n)};
}

// Moves the even-indexed bits of v into the low half, in order.
constexpr std::uint64_t compact_even_bits(std::uint64_t v) {
  v &= 0x5555555555555555ull;
  v = (v | (v >> 1)) & 0x3333333333333333ull;
  v = (v | (v >> 2)) & 0x0F0F0F0F0F0F0F0Full;
  v = (v | (v >> 4)) & 0x00FF00FF00FF00FFull;
  v = (v | (v >> 8)) & 0x0000FFFF0000FFFFull;
  v = (v | (v >> 16)) & 0x00000000FFFFFFFFull;
  return v;
}

}  // namespace detail

// Arithmetic-to-boolean conversion: boolean shares of all 64 bits of x.
// The two boolean addends are summed with a Kogge-Stone prefix adder
// (1 reshare + 6 AND levels).
inline BoolTensor a2b(Party& p, const SharedTensor& x) {
  auto [m, n] = detail::split_to_bool(p, x);
  BoolTensor g = band(p, m, n);
  BoolTensor prop = bxor(m, n);
  for (unsigned k = 1; k < 64; k <<= 1) {
    const BoolTensor g_shift = bmap(g, 64, [k](std::uint64_t v) { return v << k; });
    if (k < 32) {
      const BoolTensor p_shift = bmap(prop, 64, [k](std::uint64_t v) { return v << k; });
      const BoolTensor l[] = {prop, prop}, r[] = {g_shift, p_shift};
      auto res = and_batch(p, l, r);
      g = bxor(g, res[0]);
      prop = std::move(res[1]);
    } else {
      g = bxor(g, band(p, prop, g_shift));
    }
  }
  const BoolTensor carries = bmap(g, 64, [](std::uint64_t v) { return v << 1; });
  return bxor(bxor(m, n), carries);
}

// Most significant bit of x (the sign bit under two's complement), as a
// width-1 boolean tensor. Only the carry into bit 63 is computed, with a
// log-depth generate/propagate tree whose operands halve in width each level.
inline BoolTensor msb(Party& p, const SharedTensor& x) {
  const PartyId me = p.id();
  auto [m, n] = detail::split_to_bool(p, x);
  const BoolTensor top = extract_bit(bxor(m, n), 63);

  constexpr std::uint64_t kLow63 = ~(std::uint64_t{1} << 63);
  // Leaf 63 is forced to (generate 0, propagate 1) so the tree yields the carry
  // out of bits [0, 62].
  BoolTensor g = bmap(band(p, m, n), 64, [](std::uint64_t v) { return v & kLow63; });
  BoolTensor prop = bxor_public(me, bmap(bxor(m, n), 64, [](std::uint64_t v) { return v & kLow63; }),
                                std::uint64_t{1} << 63);

  for (unsigned width = 64; width > 1; width /= 2) {
    const unsigned half = width / 2;
    auto even = [](std::uint64_t v) { return detail::compact_even_bits(v); };
    auto odd = [](std::uint64_t v) { return detail::compact_even_bits(v >> 1); };
    const BoolTensor g_lo = bmap(g, half, even), g_hi = bmap(g, half, odd);
    const BoolTensor p_lo = bmap(prop, half, even), p_hi = bmap(prop, half, odd);
    if (half > 1) {
      const BoolTensor l[] = {p_hi, p_hi}, r[] = {g_lo, p_lo};
      auto res = and_batch(p, l, r);
      g = bxor(g_hi, res[0]);
      prop = std::move(res[1]);
    } else {
      g = bxor(g_hi, band(p, p_hi, g_lo));
    }
  }
  return bxor(top, g);
}

// 1{x < y} for signed fixed-point operands, as MSB(x - y).
inline BoolTensor lt(Party& p, const SharedTensor& x, const SharedTensor& y) { return msb(p, sub(x, y)); }

inline BoolTensor lt(Party& p, const SharedTensor& x, double c) {
  return msb(p, add_public(p.id(), x, RingElem{0} - p.codec().encode(c)));
}

inline BoolTensor lt(Party& p, double c, const SharedTensor& x) {
  return msb(p, add_public(p.id(), neg(x), p.codec().encode(c)));
}

// 1{d == 0} (exact ring equality). With d = M + N, d == 0 iff M == -N, so the
// test is a NOT-OR tree over the bits of M xor (-N): 1 reshare + 6 AND levels.
inline BoolTensor eq_zero(Party& p, const SharedTensor& d) {
  auto [m, n] = detail::split_to_bool(p, d, /*negate_n=*/true);
  BoolTensor acc = bnot(p.id(), bxor(m, n));
  for (unsigned width = 64; width > 1; width /= 2) {
    const unsigned half = width / 2;
    const BoolTensor lo = bmap(acc, half, [half](std::uint64_t v) { return v & low_mask(half); });
    const BoolTensor hi = bmap(acc, half, [half](std::uint64_t v) { return (v >> half) & low_mask(half); });
    acc = band(p, lo, hi);
  }
  return acc;
}

inline BoolTensor eq(Party& p, const SharedTensor& x, const SharedTensor& y) { return eq_zero(p, sub(x, y)); }

// 1{c[i] == y[i]} for public ring values c.
inline BoolTensor eq(Party& p, std::span<const RingElem> c, const SharedTensor& y) {
  return eq_zero(p, add_public(p.id(), neg(y), c));
}

// Bit injection: arithmetic shares of a width-1 boolean tensor, as integers
// 0/1. Each replicated bit component c_j is a trivially shared arithmetic
// value; b = c_0 xor c_1 xor c_2 is expanded as a + b - 2ab with two
// sequential multiplications.
inline SharedTensor inject(Party& p, const BoolTensor& b) {
  const int me = p.id().value();
  std::array<SharedTensor, 3> comp{SharedTensor(b.shape()), SharedTensor(b.shape()), SharedTensor(b.shape())};
  for (std::size_t i = 0; i < b.size(); ++i) {
    comp[me][i].lo = b[i].lo & 1u;
    comp[(me + 1) % 3][i].hi = b[i].hi & 1u;
  }
  auto xor_arith = [&](const SharedTensor& u, const SharedTensor& v) {
    return sub(add(u, v), scale(mul(p, u, v), 2));
  };
  return xor_arith(xor_arith(comp[0], comp[1]), comp[2]);
}

// b * x for a boolean-shared bit b and arithmetic x. Exact: no truncation.
inline SharedTensor mul_ba(Party& p, const BoolTensor& b, const SharedTensor& x) {
  if (b.size() != x.size()) throw ShapeError("mul_ba: operand size mismatch");
  return mul(p, inject(p, b).reshaped(x.shape()), x);
}

// Maximum along the last axis by a binary tournament: per level, one lt and
// one mul_ba select. Ties keep the earlier element. Result shape ends in 1.
inline SharedTensor max_rows(Party& p, const SharedTensor& x) {
  std::size_t n = x.cols();
  if (x.empty() || n == 0) throw ShapeError("max of an empty vector");
  const std::size_t rows = x.rows();
  std::vector<ArithShare> cur(x.data().begin(), x.data().end());
  while (n > 1) {
    const std::size_t pairs = n / 2;
    const std::size_t next_n = (n + 1) / 2;
    SharedTensor a(Shape{rows * pairs}), b(Shape{rows * pairs});
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t j = 0; j < pairs; ++j) {
        a[r * pairs + j] = cur[r * n + 2 * j];
        b[r * pairs + j] = cur[r * n + 2 * j + 1];
      }
    const SharedTensor picked = add(a, mul_ba(p, lt(p, a, b), sub(b, a)));
    std::vector<ArithShare> next(rows * next_n);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t j = 0; j < pairs; ++j) next[r * next_n + j] = picked[r * pairs + j];
      if (n % 2) next[r * next_n + pairs] = cur[r * n + n - 1];
    }
    cur = std::move(next);
    n = next_n;
  }
  Shape shape = x.shape();
  if (shape.empty()) shape.push_back(1);
  shape.back() = 1;
  return SharedTensor(shape, std::move(cur));
}

}  // namespace puma
