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
#include <cstdint>
#include <span>
#include <vector>

namespace puma::wire {

// Ring elements travel as raw little-endian 64-bit words.
inline std::vector<std::byte> encode_ring(std::span<const std::uint64_t> values) {
  std::vector<std::byte> out(values.size() * 8);
  for (std::size_t i = 0; i < values.size(); ++i)
    for (int b = 0; b < 8; ++b) out[8 * i + b] = static_cast<std::byte>(values[i] >> (8 * b));
  return out;
}

inline std::vector<std::uint64_t> decode_ring(std::span<const std::byte> bytes) {
  std::vector<std::uint64_t> out(bytes.size() / 8);
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::uint64_t v = 0;
    for (int b = 0; b < 8; ++b) v |= std::uint64_t(std::to_integer<std::uint8_t>(bytes[8 * i + b])) << (8 * b);
    out[i] = v;
  }
  return out;
}

inline std::size_t packed_size(std::size_t n, unsigned width) { return (n * width + 7) / 8; }

// Concatenates the low `width` bits of each word into a bit stream, LSB-first
// within bytes.
inline std::vector<std::byte> pack_bits(std::span<const std::uint64_t> words, unsigned width) {
  std::vector<std::byte> out(packed_size(words.size(), width));
  if (width % 8 == 0) {
    const unsigned nbytes = width / 8;
    for (std::size_t i = 0; i < words.size(); ++i)
      for (unsigned b = 0; b < nbytes; ++b) out[i * nbytes + b] = static_cast<std::byte>(words[i] >> (8 * b));
    return out;
  }
  std::size_t bit = 0;
  for (std::uint64_t w : words) {
    for (unsigned k = 0; k < width; ++k, ++bit) {
      if ((w >> k) & 1u) out[bit / 8] |= static_cast<std::byte>(1u << (bit % 8));
    }
  }
  return out;
}

inline std::vector<std::uint64_t> unpack_bits(std::span<const std::byte> bytes, std::size_t n,
                                              unsigned width) {
  std::vector<std::uint64_t> out(n, 0);
  if (width % 8 == 0) {
    const unsigned nbytes = width / 8;
    for (std::size_t i = 0; i < n; ++i)
      for (unsigned b = 0; b < nbytes; ++b)
        out[i] |= std::uint64_t(std::to_integer<std::uint8_t>(bytes[i * nbytes + b])) << (8 * b);
    return out;
  }
  std::size_t bit = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (unsigned k = 0; k < width; ++k, ++bit) {
      const auto byte = std::to_integer<unsigned>(bytes[bit / 8]);
      out[i] |= std::uint64_t((byte >> (bit % 8)) & 1u) << k;
    }
  }
  return out;
}

}  // namespace puma::wire
