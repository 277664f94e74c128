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

#include <openssl/evp.h>

#include <array>
#include <cstdint>
#include <cstring>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "puma/ring.hpp"

namespace puma {

using PrfKey = std::array<std::uint8_t, 16>;

// AES-128 as a PRF from 64-bit counters to ring elements:
//   F_k(ctr) = low 64 bits (little-endian) of AES_k(ctr_le64 || 0^64).
class AesPrf {
 public:
  explicit AesPrf(const PrfKey& key) : ctx_(EVP_CIPHER_CTX_new()) {
    if (!ctx_ || EVP_EncryptInit_ex(ctx_.get(), EVP_aes_128_ecb(), nullptr, key.data(), nullptr) != 1) {
      throw std::runtime_error("AES-128 initialisation failed");
    }
    EVP_CIPHER_CTX_set_padding(ctx_.get(), 0);
  }

  // out[j] = F_k(ctr + j)
  void fill(std::uint64_t ctr, std::span<RingElem> out) const {
    constexpr std::size_t kBatch = 1024;
    std::array<std::uint8_t, 16 * kBatch> buf;
    for (std::size_t done = 0; done < out.size();) {
      const std::size_t n = std::min(kBatch, out.size() - done);
      std::memset(buf.data(), 0, 16 * n);
      for (std::size_t j = 0; j < n; ++j) {
        const std::uint64_t c = ctr + done + j;
        for (int b = 0; b < 8; ++b) buf[16 * j + b] = static_cast<std::uint8_t>(c >> (8 * b));
      }
      int len = 0;
      if (EVP_EncryptUpdate(ctx_.get(), buf.data(), &len, buf.data(), static_cast<int>(16 * n)) != 1) {
        throw std::runtime_error("AES-128 encryption failed");
      }
      for (std::size_t j = 0; j < n; ++j) {
        RingElem v = 0;
        for (int b = 0; b < 8; ++b) v |= RingElem{buf[16 * j + b]} << (8 * b);
        out[done + j] = v;
      }
      done += n;
    }
  }

  RingElem operator()(std::uint64_t ctr) const {
    RingElem v;
    fill(ctr, std::span<RingElem>(&v, 1));
    return v;
  }

 private:
  struct CtxFree {
    void operator()(EVP_CIPHER_CTX* c) const { EVP_CIPHER_CTX_free(c); }
  };
  std::unique_ptr<EVP_CIPHER_CTX, CtxFree> ctx_;
};

// Pairwise PRF keys for correlated randomness. key_with_next is held by this
// party and the next one (where it is their key_with_prev). One counter is
// shared by both streams and advances by the same amount at every party on
// every draw, whether or not a party consumes both streams.
class PrfSetup {
 public:
  PrfSetup(const PrfKey& key_with_next, const PrfKey& key_with_prev)
      : next_(key_with_next), prev_(key_with_prev) {}

  std::uint64_t counter() const { return counter_; }

  struct Draw {
    std::vector<RingElem> with_next;
    std::vector<RingElem> with_prev;
  };

  Draw draw(std::size_t n, bool need_next = true, bool need_prev = true) {
    Draw d;
    if (need_next) {
      d.with_next.resize(n);
      next_.fill(counter_, d.with_next);
    }
    if (need_prev) {
      d.with_prev.resize(n);
      prev_.fill(counter_, d.with_prev);
    }
    counter_ += n;
    return d;
  }

  // alpha_i = F(k_next, ctr) - F(k_prev, ctr); the three parties' outputs sum to 0.
  std::vector<RingElem> zero_share(std::size_t n) {
    Draw d = draw(n);
    for (std::size_t j = 0; j < n; ++j) d.with_next[j] -= d.with_prev[j];
    return std::move(d.with_next);
  }

  RingElem zero_share() { return zero_share(1)[0]; }

  // XOR analogue of zero_share for boolean resharing.
  std::vector<std::uint64_t> zero_share_xor(std::size_t n) {
    Draw d = draw(n);
    for (std::size_t j = 0; j < n; ++j) d.with_next[j] ^= d.with_prev[j];
    return std::move(d.with_next);
  }

 private:
  AesPrf next_;
  AesPrf prev_;
  std::uint64_t counter_ = 0;
};

}  // namespace puma
