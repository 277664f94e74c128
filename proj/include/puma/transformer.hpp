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
#include <map>
#include <string>
#include <vector>

#include "puma/errors.hpp"
#include "puma/linalg.hpp"
#include "puma/nonlinear.hpp"

namespace puma {

enum class NormPlacement { post, pre };

struct ModelConfig {
  std::size_t n_layers = 2;
  std::size_t d_model = 64;
  std::size_t n_heads = 4;
  std::size_t d_ff = 256;
  std::size_t vocab_size = 100;
  std::size_t max_seq_len = 16;
  NormPlacement norm_placement = NormPlacement::post;
  bool attn_scale = true;
  LayerNormMode ln_mode = LayerNormMode::standard;

  std::size_t d_head() const { return d_model / n_heads; }

  void validate() const {
    if (!n_layers || !d_model || !n_heads || !d_ff || !vocab_size || !max_seq_len) {
      throw std::invalid_argument("model config fields must be positive");
    }
    if (d_model % n_heads) throw std::invalid_argument("d_model must be divisible by n_heads");
  }
};

// Mask value for disallowed attention positions. After max subtraction it is
// far below the negExp threshold, so masked probabilities are exactly zero.
inline constexpr double kMaskValue = -30.0;

// Parameter names. Matrices are stored [in, out] and applied as x W.
namespace wname {
inline std::string layer(std::size_t i, const char* what) { return "layer" + std::to_string(i) + "." + what; }
inline constexpr const char* kTokenEmbedding = "token_embedding";
inline constexpr const char* kPositionEmbedding = "position_embedding";
inline constexpr const char* kFinalLnGamma = "final_ln_gamma";
inline constexpr const char* kFinalLnBeta = "final_ln_beta";
inline constexpr const char* kLmHead = "lm_head";
}  // namespace wname

// Plaintext float tensor (row-major).
struct PlainTensor {
  Shape shape;
  std::vector<double> data;
};

// Expected parameter shapes for a config, by name.
inline std::map<std::string, Shape> expected_shapes(const ModelConfig& c) {
  std::map<std::string, Shape> s;
  s[wname::kTokenEmbedding] = {c.vocab_size, c.d_model};
  s[wname::kPositionEmbedding] = {c.max_seq_len, c.d_model};
  s[wname::kFinalLnGamma] = {c.d_model};
  s[wname::kFinalLnBeta] = {c.d_model};
  s[wname::kLmHead] = {c.d_model, c.vocab_size};
  for (std::size_t i = 0; i < c.n_layers; ++i) {
    for (const char* w : {"wq", "wk", "wv", "wo"}) s[wname::layer(i, w)] = {c.d_model, c.d_model};
    s[wname::layer(i, "w1")] = {c.d_model, c.d_ff};
    s[wname::layer(i, "b1")] = {c.d_ff};
    s[wname::layer(i, "w2")] = {c.d_ff, c.d_model};
    s[wname::layer(i, "b2")] = {c.d_model};
    for (const char* w : {"ln1_gamma", "ln1_beta", "ln2_gamma", "ln2_beta"}) s[wname::layer(i, w)] = {c.d_model};
  }
  return s;
}

struct ModelWeights {
  std::map<std::string, PlainTensor> tensors;

  const PlainTensor& at(const std::string& name) const {
    auto it = tensors.find(name);
    if (it == tensors.end()) throw std::out_of_range("missing weight tensor '" + name + "'");
    return it->second;
  }

  // Throws ShapeError naming the first missing or misshapen tensor.
  void check(const ModelConfig& c) const {
    for (const auto& [name, shape] : expected_shapes(c)) {
      auto it = tensors.find(name);
      if (it == tensors.end()) throw ShapeError("missing weight tensor '" + name + "'");
      if (it->second.shape != shape) {
        throw ShapeError("weight '" + name + "' has shape " + shape_str(it->second.shape) + ", expected " +
                         shape_str(shape));
      }
    }
  }
};

struct SharedWeights {
  std::map<std::string, SharedTensor> tensors;

  const SharedTensor& at(const std::string& name) const {
    auto it = tensors.find(name);
    if (it == tensors.end()) throw std::out_of_range("missing shared weight '" + name + "'");
    return it->second;
  }
};

// Shares every parameter from `owner`, in name order. Non-owners pass an
// empty ModelWeights and learn only the shapes from the config.
inline SharedWeights share_weights(Party& p, PartyId owner, const ModelConfig& cfg, const ModelWeights& plain) {
  if (p.id() == owner) plain.check(cfg);
  SharedWeights out;
  for (const auto& [name, shape] : expected_shapes(cfg)) {
    std::vector<RingElem> ring;
    if (p.id() == owner) {
      const auto& t = plain.at(name);
      ring.reserve(t.data.size());
      for (double v : t.data) ring.push_back(p.codec().encode(v));
    }
    out.tensors.emplace(name, share_input(p, owner, shape, ring));
  }
  return out;
}

// s x s public mask: 0 where key j <= query i, kMaskValue elsewhere.
inline std::vector<RingElem> causal_mask(std::size_t s, const FixedCodec& codec) {
  std::vector<RingElem> m(s * s, 0);
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = i + 1; j < s; ++j) m[i * s + j] = codec.encode(kMaskValue);
  return m;
}

namespace detail {

// [s, h * dh] <-> [h, s, dh]
inline SharedTensor split_heads(const SharedTensor& x, std::size_t heads) {
  const std::size_t s = x.shape()[0], d = x.shape()[1], dh = d / heads;
  SharedTensor out(Shape{heads, s, dh});
  for (std::size_t h = 0; h < heads; ++h)
    for (std::size_t i = 0; i < s; ++i)
      for (std::size_t j = 0; j < dh; ++j) out[(h * s + i) * dh + j] = x[i * d + h * dh + j];
  return out;
}

inline SharedTensor merge_heads(const SharedTensor& x) {
  const std::size_t heads = x.shape()[0], s = x.shape()[1], dh = x.shape()[2];
  SharedTensor out(Shape{s, heads * dh});
  for (std::size_t h = 0; h < heads; ++h)
    for (std::size_t i = 0; i < s; ++i)
      for (std::size_t j = 0; j < dh; ++j) out[i * heads * dh + h * dh + j] = x[(h * s + i) * dh + j];
  return out;
}

// Swaps the last two axes of a rank-2 or rank-3 tensor.
inline SharedTensor transpose_last(const SharedTensor& x) {
  if (x.shape().size() == 2) return transpose(x);
  const std::size_t b = x.shape()[0], m = x.shape()[1], n = x.shape()[2];
  SharedTensor out(Shape{b, n, m});
  for (std::size_t t = 0; t < b; ++t)
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) out[(t * n + j) * m + i] = x[(t * m + i) * n + j];
  return out;
}

inline SharedTensor add_bias(const SharedTensor& x, const SharedTensor& b) {
  return add(x, broadcast_rows(b, x.shape()));
}

inline SharedTensor hcat(std::initializer_list<std::reference_wrapper<const SharedTensor>> parts) {
  const std::size_t rows = parts.begin()->get().shape()[0];
  std::size_t cols = 0;
  for (const SharedTensor& t : parts) cols += t.shape()[1];
  SharedTensor out(Shape{rows, cols});
  std::size_t c0 = 0;
  for (const SharedTensor& t : parts) {
    const std::size_t w = t.shape()[1];
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t j = 0; j < w; ++j) out[r * cols + c0 + j] = t[r * w + j];
    c0 += w;
  }
  return out;
}

}  // namespace detail

// softmax(Q K^T [/ sqrt(dh)] + M) V for Q, K, V of shape [s, dh] or
// [heads, s, dh]; `mask` is a public s x s ring matrix shared by all heads.
inline SharedTensor secure_attention(Party& p, const SharedTensor& q, const SharedTensor& k, const SharedTensor& v,
                                     std::span<const RingElem> mask, bool scale_scores = true) {
  detail::require_same_shape(q.shape(), k.shape(), "attention q/k");
  detail::require_same_shape(q.shape(), v.shape(), "attention q/v");
  const std::size_t s = q.shape()[q.shape().size() - 2];
  const std::size_t dh = q.shape().back();
  if (mask.size() != s * s) throw ShapeError("attention mask must be s x s");
  SharedTensor scores = secure_matmul(p, q, detail::transpose_last(k));
  if (scale_scores) scores = mul_public_fixed(p, scores, 1.0 / std::sqrt(static_cast<double>(dh)));
  std::vector<RingElem> tiled(scores.size());
  for (std::size_t i = 0; i < tiled.size(); ++i) tiled[i] = mask[i % (s * s)];
  const SharedTensor probs = secure_softmax(p, add_public(p.id(), scores, tiled));
  return secure_matmul(p, probs, v);
}

inline SharedTensor secure_multihead(Party& p, const SharedTensor& x, const SharedWeights& w, std::size_t layer,
                                     const ModelConfig& cfg, std::span<const RingElem> mask) {
  const std::size_t d = cfg.d_model;
  const SharedTensor wqkv = detail::hcat({w.at(wname::layer(layer, "wq")), w.at(wname::layer(layer, "wk")),
                                          w.at(wname::layer(layer, "wv"))});
  const SharedTensor qkv = secure_matmul(p, x, wqkv);
  const SharedTensor q = detail::split_heads(col_slice(qkv, 0, d), cfg.n_heads);
  const SharedTensor k = detail::split_heads(col_slice(qkv, d, d), cfg.n_heads);
  const SharedTensor v = detail::split_heads(col_slice(qkv, 2 * d, d), cfg.n_heads);
  const SharedTensor heads = secure_attention(p, q, k, v, mask, cfg.attn_scale);
  return secure_matmul(p, detail::merge_heads(heads), w.at(wname::layer(layer, "wo")));
}

inline SharedTensor secure_ffn(Party& p, const SharedTensor& x, const SharedTensor& w1, const SharedTensor& b1,
                               const SharedTensor& w2, const SharedTensor& b2) {
  const SharedTensor h = secure_gelu(p, detail::add_bias(secure_matmul(p, x, w1), b1));
  return detail::add_bias(secure_matmul(p, h, w2), b2);
}

inline SharedTensor secure_block(Party& p, const SharedTensor& x, const SharedWeights& w, std::size_t layer,
                                 const ModelConfig& cfg, std::span<const RingElem> mask) {
  auto ln = [&](const SharedTensor& t, const char* g, const char* b) {
    return secure_layernorm(p, t, w.at(wname::layer(layer, g)), w.at(wname::layer(layer, b)), cfg.ln_mode);
  };
  auto ffn = [&](const SharedTensor& t) {
    return secure_ffn(p, t, w.at(wname::layer(layer, "w1")), w.at(wname::layer(layer, "b1")),
                      w.at(wname::layer(layer, "w2")), w.at(wname::layer(layer, "b2")));
  };
  if (cfg.norm_placement == NormPlacement::post) {
    const SharedTensor a = ln(add(x, secure_multihead(p, x, w, layer, cfg, mask)), "ln1_gamma", "ln1_beta");
    return ln(add(a, ffn(a)), "ln2_gamma", "ln2_beta");
  }
  const SharedTensor a = add(x, secure_multihead(p, ln(x, "ln1_gamma", "ln1_beta"), w, layer, cfg, mask));
  return add(a, ffn(ln(a, "ln2_gamma", "ln2_beta")));
}

// Causal LM forward pass over secret token ids (ring integers). Returns
// shares of the [s, vocab] logits. If `trace` is given it receives the
// embedding output and every block output, in order. In debug mode each
// block output is opened with a replication cross-check.
inline SharedTensor secure_forward(Party& p, const SharedTensor& ids, const SharedWeights& w, const ModelConfig& cfg,
                                   std::vector<SharedTensor>* trace = nullptr) {
  cfg.validate();
  const std::size_t s = ids.size();
  if (s == 0) throw ShapeError("empty token sequence");
  if (s > cfg.max_seq_len) {
    throw ShapeError("sequence length " + std::to_string(s) + " exceeds max_seq_len " +
                     std::to_string(cfg.max_seq_len));
  }
  const auto mask = causal_mask(s, p.codec());
  const SharedTensor pos = slice(w.at(wname::kPositionEmbedding), 0, Shape{s, cfg.d_model});
  SharedTensor h = add(secure_embedding(p, ids, w.at(wname::kTokenEmbedding)), pos);
  if (trace) trace->push_back(h);
  for (std::size_t l = 0; l < cfg.n_layers; ++l) {
    h = secure_block(p, h, w, l, cfg, mask);
    if (p.debug_checks()) open_checked(p, h);
    if (trace) trace->push_back(h);
  }
  h = secure_layernorm(p, h, w.at(wname::kFinalLnGamma), w.at(wname::kFinalLnBeta), cfg.ln_mode);
  return secure_matmul(p, h, w.at(wname::kLmHead));
}

// Greedy decoding: each step runs a full forward pass, opens the last row of
// logits and appends the argmax (ties to the lowest id). Generated tokens are
// public once opened; the prompt stays secret.
inline std::vector<std::size_t> greedy_generate(Party& p, const SharedTensor& prompt, const SharedWeights& w,
                                                const ModelConfig& cfg, std::size_t steps) {
  std::vector<std::size_t> generated;
  SharedTensor ids = prompt.reshaped(Shape{prompt.size()});
  for (std::size_t step = 0; step < steps; ++step) {
    const SharedTensor logits = secure_forward(p, ids, w, cfg);
    const std::size_t v = cfg.vocab_size;
    const auto last = open(p, slice(logits, (ids.size() - 1) * v, Shape{v}));
    std::size_t best = 0;
    for (std::size_t j = 1; j < v; ++j)
      if (to_signed(last[j]) > to_signed(last[best])) best = j;
    generated.push_back(best);
    const RingElem tok = best;
    ids = concat(ids, public_tensor(p.id(), Shape{1}, std::span(&tok, 1)));
  }
  return generated;
}

}  // namespace puma
