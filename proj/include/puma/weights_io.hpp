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

// PUMAW1 weight files:
//
//   magic   "PUMAW1\0\0"
//   u32     tensor count
//   per tensor:
//     u16   name length, then the UTF-8 name
//     u8    dtype (0 = float32)
//     u8    rank, then u32 dims[rank]
//     f32   data[prod(dims)]
//
// All integers and floats are little-endian.

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "puma/errors.hpp"
#include "puma/transformer.hpp"

namespace puma {

inline constexpr char kWeightMagic[8] = {'P', 'U', 'M', 'A', 'W', '1', '\0', '\0'};

namespace detail {

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> buf) : buf_(buf) {}

  std::size_t offset() const { return off_; }
  bool done() const { return off_ == buf_.size(); }

  std::span<const std::uint8_t> take(std::size_t n, const char* what) {
    if (buf_.size() - off_ < n) {
      throw FormatError("truncated weight file: need " + std::to_string(n) + " bytes for " + what + " at offset " +
                            std::to_string(off_) + ", " + std::to_string(buf_.size() - off_) + " left",
                        off_);
    }
    auto s = buf_.subspan(off_, n);
    off_ += n;
    return s;
  }

  template <class U>
  U le(const char* what) {
    auto s = take(sizeof(U), what);
    U v = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) v |= static_cast<U>(s[i]) << (8 * i);
    return v;
  }

 private:
  std::span<const std::uint8_t> buf_;
  std::size_t off_ = 0;
};

template <class U>
void put_le(std::vector<std::uint8_t>& out, U v) {
  for (std::size_t i = 0; i < sizeof(U); ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

}  // namespace detail

// Values are stored as float32; doubles are rounded on save.
inline std::vector<std::uint8_t> serialize_weights(const ModelWeights& w) {
  std::vector<std::uint8_t> out(std::begin(kWeightMagic), std::end(kWeightMagic));
  detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(w.tensors.size()));
  for (const auto& [name, t] : w.tensors) {
    if (name.size() > 0xFFFF) throw FormatError("tensor name too long: " + name);
    if (t.shape.size() > 0xFF) throw FormatError("tensor rank too large: " + name);
    if (t.data.size() != numel(t.shape)) throw ShapeError("tensor '" + name + "' data does not match its shape");
    detail::put_le<std::uint16_t>(out, static_cast<std::uint16_t>(name.size()));
    out.insert(out.end(), name.begin(), name.end());
    out.push_back(0);
    out.push_back(static_cast<std::uint8_t>(t.shape.size()));
    for (std::size_t d : t.shape) detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(d));
    for (double v : t.data) detail::put_le<std::uint32_t>(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  }
  return out;
}

inline ModelWeights parse_weights(std::span<const std::uint8_t> buf) {
  detail::ByteReader r(buf);
  const auto magic = r.take(sizeof(kWeightMagic), "magic");
  if (std::memcmp(magic.data(), kWeightMagic, sizeof(kWeightMagic)) != 0) {
    throw FormatError("bad magic: not a PUMAW1 weight file", 0);
  }
  const auto count = r.le<std::uint32_t>("tensor count");
  ModelWeights w;
  for (std::uint32_t k = 0; k < count; ++k) {
    const std::size_t start = r.offset();
    const auto name_len = r.le<std::uint16_t>("name length");
    const auto name_bytes = r.take(name_len, "tensor name");
    std::string name(name_bytes.begin(), name_bytes.end());
    const std::size_t dtype_at = r.offset();
    const auto dtype = r.le<std::uint8_t>("dtype");
    if (dtype != 0) {
      throw FormatError("tensor '" + name + "': unsupported dtype " + std::to_string(dtype) + " at offset " +
                            std::to_string(dtype_at),
                        dtype_at);
    }
    const auto rank = r.le<std::uint8_t>("rank");
    PlainTensor t;
    for (std::uint8_t d = 0; d < rank; ++d) t.shape.push_back(r.le<std::uint32_t>("dimension"));
    const std::size_t n = numel(t.shape);
    const auto raw = r.take(n * 4, "tensor data");
    t.data.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::uint32_t bits = 0;
      for (int b = 0; b < 4; ++b) bits |= std::uint32_t{raw[4 * i + b]} << (8 * b);
      t.data[i] = std::bit_cast<float>(bits);
    }
    if (!w.tensors.emplace(std::move(name), std::move(t)).second) {
      throw FormatError("duplicate tensor name at offset " + std::to_string(start), start);
    }
  }
  if (!r.done()) {
    throw FormatError("trailing bytes after last tensor at offset " + std::to_string(r.offset()), r.offset());
  }
  return w;
}

inline void save_weights(const ModelWeights& w, const std::string& path) {
  const auto bytes = serialize_weights(w);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write weight file " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw FormatError("error writing weight file " + path);
}

inline ModelWeights load_weights(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open weight file " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_weights(bytes);
}

// The file carries no hyperparameters; everything except the head count and
// the flags is recovered from tensor shapes.
inline ModelConfig infer_config(const ModelWeights& w, std::size_t n_heads,
                                NormPlacement placement = NormPlacement::post, bool attn_scale = true) {
  ModelConfig c;
  const auto& emb = w.at(wname::kTokenEmbedding).shape;
  const auto& pos = w.at(wname::kPositionEmbedding).shape;
  if (emb.size() != 2 || pos.size() != 2) throw ShapeError("embedding tensors must be rank 2");
  c.vocab_size = emb[0];
  c.d_model = emb[1];
  c.max_seq_len = pos[0];
  c.n_heads = n_heads;
  c.n_layers = 0;
  while (w.tensors.count(wname::layer(c.n_layers, "wq"))) ++c.n_layers;
  if (c.n_layers == 0) throw ShapeError("weight file has no layers");
  c.d_ff = w.at(wname::layer(0, "w1")).shape.back();
  c.norm_placement = placement;
  c.attn_scale = attn_scale;
  c.validate();
  w.check(c);
  return c;
}

}  // namespace puma
