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

// Plaintext double-precision references. These never touch the ring and
// serve as ground truth for the secure protocols.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>
#include <random>
#include <vector>

#include "puma/nonlinear.hpp"
#include "puma/transformer.hpp"

namespace puma::oracle {

inline double gelu_exact(double x) {
  const double k = std::sqrt(2.0 / std::numbers::pi);
  return 0.5 * x * (1.0 + std::tanh(k * (x + 0.044715 * x * x * x)));
}

inline double gelu_f0(double x, const GeluConstants& k = {}) {
  return ((k.f0[3] * x + k.f0[2]) * x + k.f0[1]) * x + k.f0[0];
}

inline double gelu_f1(double x, const GeluConstants& k = {}) {
  const double x2 = x * x;
  return k.f1[6] * x2 * x2 * x2 + k.f1[4] * x2 * x2 + k.f1[2] * x2 + k.f1[1] * x + k.f1[0];
}

// Same interval ownership as the secure protocol: F0 on [lo, mid), F1 on
// [mid, hi], identity above hi.
inline double gelu_piecewise(double x, const GeluConstants& k = {}) {
  if (x < k.lo) return 0.0;
  if (x < k.mid) return gelu_f0(x, k);
  if (x <= k.hi) return gelu_f1(x, k);
  return x;
}

struct ErrorStats {
  double max = 0;
  double mean = 0;
  double median = 0;
  double argmax = 0;
  std::size_t n_points = 0;
};

// Absolute-error statistics over `points` uniformly spaced samples of [lo, hi]
// (endpoints included).
inline ErrorStats approx_error_stats(const std::function<double(double)>& ref,
                                     const std::function<double(double)>& approx, double lo, double hi,
                                     std::size_t points) {
  ErrorStats s;
  s.n_points = points;
  if (points == 0) return s;
  std::vector<double> err(points);
  double sum = 0;
  for (std::size_t i = 0; i < points; ++i) {
    const double x = points == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    err[i] = std::fabs(ref(x) - approx(x));
    sum += err[i];
    if (err[i] > s.max) {
      s.max = err[i];
      s.argmax = x;
    }
  }
  s.mean = sum / static_cast<double>(points);
  const std::size_t mid = points / 2;
  std::nth_element(err.begin(), err.begin() + mid, err.end());
  s.median = err[mid];
  if (points % 2 == 0) s.median = 0.5 * (s.median + *std::max_element(err.begin(), err.begin() + mid));
  return s;
}

// Statistics of |a[i] - b[i]|.
inline ErrorStats error_stats(std::span<const double> a, std::span<const double> b) {
  std::vector<double> err(a.size());
  ErrorStats s;
  s.n_points = a.size();
  if (a.empty()) return s;
  double sum = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    err[i] = std::fabs(a[i] - b[i]);
    sum += err[i];
    if (err[i] > s.max) {
      s.max = err[i];
      s.argmax = static_cast<double>(i);
    }
  }
  s.mean = sum / static_cast<double>(a.size());
  std::nth_element(err.begin(), err.begin() + err.size() / 2, err.end());
  s.median = err[err.size() / 2];
  return s;
}

// (1 + x/2^t)^(2^t), zero unless threshold < x.
inline double neg_exp_ref(double x, const NegExpParams& k = {}) {
  if (!(k.threshold < x)) return 0.0;
  return std::pow(1.0 + std::ldexp(x, -k.t), std::ldexp(1.0, k.t));
}

inline std::vector<double> softmax_exact(std::span<const double> row) {
  const double m = *std::max_element(row.begin(), row.end());
  std::vector<double> out(row.size());
  double sum = 0;
  for (std::size_t i = 0; i < row.size(); ++i) sum += out[i] = std::exp(row[i] - m);
  for (double& v : out) v /= sum;
  return out;
}

// The secure protocol's semantics: shift by max plus epsilon, clipped Taylor
// exponent, normalize by the sum of the clipped terms.
inline std::vector<double> softmax_clipped(std::span<const double> row, double epsilon = std::ldexp(1.0, -18),
                                           const NegExpParams& k = {}) {
  const double m = *std::max_element(row.begin(), row.end());
  std::vector<double> out(row.size());
  double sum = 0;
  for (std::size_t i = 0; i < row.size(); ++i) sum += out[i] = neg_exp_ref(row[i] - m - epsilon, k);
  for (double& v : out) v /= sum;
  return out;
}

inline std::vector<double> layernorm_ref(std::span<const double> row, std::span<const double> gamma,
                                         std::span<const double> beta, LayerNormMode mode = LayerNormMode::standard) {
  const double n = static_cast<double>(row.size());
  const double mu = std::accumulate(row.begin(), row.end(), 0.0) / n;
  double sigma = 0;
  for (double v : row) sigma += (v - mu) * (v - mu);
  const double denom = mode == LayerNormMode::standard ? std::sqrt(sigma / n + kLayerNormEps) : std::sqrt(sigma);
  std::vector<double> out(row.size());
  for (std::size_t i = 0; i < row.size(); ++i) out[i] = gamma[i] * (row[i] - mu) / denom + beta[i];
  return out;
}

// ---------------------------------------------------------------------------
// Dense references for the transformer
// ---------------------------------------------------------------------------

// Row-major dense matrix.
struct Mat {
  std::size_t rows = 0, cols = 0;
  std::vector<double> v;

  Mat() = default;
  Mat(std::size_t r, std::size_t c) : rows(r), cols(c), v(r * c, 0.0) {}
  double& operator()(std::size_t i, std::size_t j) { return v[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return v[i * cols + j]; }
  std::span<const double> row(std::size_t i) const { return {v.data() + i * cols, cols}; }
};

inline Mat to_mat(const PlainTensor& t) {
  Mat m(t.shape.size() == 1 ? 1 : t.shape[0], t.shape.back());
  m.v = t.data;
  return m;
}

inline Mat matmul(const Mat& a, const Mat& b) {
  if (a.cols != b.rows) throw ShapeError("oracle matmul inner dimension mismatch");
  Mat c(a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t k = 0; k < a.cols; ++k) {
      const double av = a(i, k);
      for (std::size_t j = 0; j < b.cols; ++j) c(i, j) += av * b(k, j);
    }
  return c;
}

inline Mat transpose(const Mat& a) {
  Mat t(a.cols, a.rows);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < a.cols; ++j) t(j, i) = a(i, j);
  return t;
}

inline Mat add(Mat a, const Mat& b) {
  for (std::size_t i = 0; i < a.v.size(); ++i) a.v[i] += b.v[i];
  return a;
}

inline Mat add_row(Mat a, std::span<const double> bias) {
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < a.cols; ++j) a(i, j) += bias[j];
  return a;
}

// Exact: tanh GeLU and true softmax. Mirrored: the piecewise GeLU and the
// clipped-Taylor softmax the secure protocols implement.
enum class Mode { exact, mirrored };

inline std::vector<double> softmax_mode(std::span<const double> row, Mode mode) {
  return mode == Mode::exact ? softmax_exact(row) : softmax_clipped(row);
}

inline Mat causal_mask(std::size_t s) {
  Mat m(s, s);
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = i + 1; j < s; ++j) m(i, j) = kMaskValue;
  return m;
}

inline Mat attention_ref(const Mat& q, const Mat& k, const Mat& v, const Mat& mask, bool scale_scores,
                         Mode mode = Mode::exact) {
  Mat scores = matmul(q, transpose(k));
  if (scale_scores) {
    const double c = 1.0 / std::sqrt(static_cast<double>(q.cols));
    for (double& x : scores.v) x *= c;
  }
  scores = add(scores, mask);
  Mat probs(scores.rows, scores.cols);
  for (std::size_t i = 0; i < scores.rows; ++i) {
    const auto r = softmax_mode(scores.row(i), mode);
    std::copy(r.begin(), r.end(), probs.v.begin() + i * probs.cols);
  }
  return matmul(probs, v);
}

inline Mat layernorm_rows(const Mat& x, std::span<const double> gamma, std::span<const double> beta,
                          LayerNormMode mode) {
  Mat out(x.rows, x.cols);
  for (std::size_t i = 0; i < x.rows; ++i) {
    const auto r = layernorm_ref(x.row(i), gamma, beta, mode);
    std::copy(r.begin(), r.end(), out.v.begin() + i * out.cols);
  }
  return out;
}

inline Mat multihead_ref(const Mat& x, const ModelWeights& w, std::size_t layer, const ModelConfig& cfg,
                         const Mat& mask, Mode mode) {
  const Mat q = matmul(x, to_mat(w.at(wname::layer(layer, "wq"))));
  const Mat k = matmul(x, to_mat(w.at(wname::layer(layer, "wk"))));
  const Mat v = matmul(x, to_mat(w.at(wname::layer(layer, "wv"))));
  const std::size_t dh = cfg.d_head(), s = x.rows;
  Mat concat(s, cfg.d_model);
  for (std::size_t h = 0; h < cfg.n_heads; ++h) {
    Mat qh(s, dh), kh(s, dh), vh(s, dh);
    for (std::size_t i = 0; i < s; ++i)
      for (std::size_t j = 0; j < dh; ++j) {
        qh(i, j) = q(i, h * dh + j);
        kh(i, j) = k(i, h * dh + j);
        vh(i, j) = v(i, h * dh + j);
      }
    const Mat oh = attention_ref(qh, kh, vh, mask, cfg.attn_scale, mode);
    for (std::size_t i = 0; i < s; ++i)
      for (std::size_t j = 0; j < dh; ++j) concat(i, h * dh + j) = oh(i, j);
  }
  return matmul(concat, to_mat(w.at(wname::layer(layer, "wo"))));
}

inline Mat ffn_ref(const Mat& x, const ModelWeights& w, std::size_t layer, Mode mode) {
  Mat h = add_row(matmul(x, to_mat(w.at(wname::layer(layer, "w1")))), w.at(wname::layer(layer, "b1")).data);
  for (double& v : h.v) v = mode == Mode::exact ? gelu_exact(v) : gelu_piecewise(v);
  return add_row(matmul(h, to_mat(w.at(wname::layer(layer, "w2")))), w.at(wname::layer(layer, "b2")).data);
}

inline Mat block_ref(const Mat& x, const ModelWeights& w, std::size_t layer, const ModelConfig& cfg, const Mat& mask,
                     Mode mode) {
  auto ln = [&](const Mat& t, const char* g, const char* b) {
    return layernorm_rows(t, w.at(wname::layer(layer, g)).data, w.at(wname::layer(layer, b)).data, cfg.ln_mode);
  };
  if (cfg.norm_placement == NormPlacement::post) {
    const Mat a = ln(add(x, multihead_ref(x, w, layer, cfg, mask, mode)), "ln1_gamma", "ln1_beta");
    return ln(add(a, ffn_ref(a, w, layer, mode)), "ln2_gamma", "ln2_beta");
  }
  const Mat a = add(x, multihead_ref(ln(x, "ln1_gamma", "ln1_beta"), w, layer, cfg, mask, mode));
  return add(a, ffn_ref(ln(a, "ln2_gamma", "ln2_beta"), w, layer, mode));
}

// Logits [s, vocab]. `trace`, if given, receives the embedding output and
// every block output.
inline Mat forward_ref(std::span<const std::size_t> tokens, const ModelWeights& w, const ModelConfig& cfg,
                       Mode mode = Mode::exact, std::vector<Mat>* trace = nullptr) {
  cfg.validate();
  const std::size_t s = tokens.size();
  if (s == 0 || s > cfg.max_seq_len) throw ShapeError("sequence length out of range");
  const auto& emb = w.at(wname::kTokenEmbedding);
  const auto& pos = w.at(wname::kPositionEmbedding);
  Mat h(s, cfg.d_model);
  for (std::size_t i = 0; i < s; ++i) {
    if (tokens[i] >= cfg.vocab_size) throw std::out_of_range("token id out of vocabulary");
    for (std::size_t j = 0; j < cfg.d_model; ++j)
      h(i, j) = emb.data[tokens[i] * cfg.d_model + j] + pos.data[i * cfg.d_model + j];
  }
  if (trace) trace->push_back(h);
  const Mat mask = causal_mask(s);
  for (std::size_t l = 0; l < cfg.n_layers; ++l) {
    h = block_ref(h, w, l, cfg, mask, mode);
    if (trace) trace->push_back(h);
  }
  h = layernorm_rows(h, w.at(wname::kFinalLnGamma).data, w.at(wname::kFinalLnBeta).data, cfg.ln_mode);
  return matmul(h, to_mat(w.at(wname::kLmHead)));
}

// Index of the largest element; ties go to the lowest index.
inline std::size_t argmax(std::span<const double> v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

// Random weights for a config: matrices ~ N(0, 1/fan_in), embeddings ~ N(0, 1),
// biases ~ N(0, 0.02^2), LayerNorm gamma ~ 1 + N(0, 0.1^2), beta ~ N(0, 0.02^2).
template <class Rng>
ModelWeights random_weights(const ModelConfig& cfg, Rng& rng) {
  ModelWeights w;
  std::normal_distribution<double> normal(0.0, 1.0);
  for (const auto& [name, shape] : expected_shapes(cfg)) {
    PlainTensor t{shape, std::vector<double>(numel(shape))};
    const bool is_gamma = name.find("gamma") != std::string::npos;
    const bool is_vec = shape.size() == 1;
    const bool is_embedding = name == wname::kTokenEmbedding || name == wname::kPositionEmbedding;
    const double sd = is_gamma ? 0.1 : is_vec ? 0.02 : is_embedding ? 1.0 : 1.0 / std::sqrt(double(shape[0]));
    for (double& v : t.data) {
      v = static_cast<double>(static_cast<float>((is_gamma ? 1.0 : 0.0) + sd * normal(rng)));
    }
    w.tensors.emplace(name, std::move(t));
  }
  return w;
}

}  // namespace puma::oracle
