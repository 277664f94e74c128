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


#include <gtest/gtest.h>

#include <random>

#include "puma/cost.hpp"
#include "puma/linalg.hpp"
#include "puma/oracle.hpp"
#include "puma/transformer.hpp"
#include "test_util.hpp"

namespace puma {
namespace {

using oracle::Mat;
using test::decode;
using test::encode;
using test::input;
using test::run3;

const FixedCodec kCodec;

Mat random_mat(std::size_t r, std::size_t c, double lo, double hi, std::uint64_t seed) {
  Mat m(r, c);
  m.v = test::quantize(test::uniform(r * c, lo, hi, seed));
  return m;
}

double max_abs(const std::vector<double>& got, const Mat& want) { return test::max_abs_diff(got, want.v); }

ModelConfig small_config() {
  ModelConfig c;
  c.n_layers = 1;
  c.d_model = 16;
  c.n_heads = 2;
  c.d_ff = 32;
  c.vocab_size = 20;
  c.max_seq_len = 8;
  return c;
}

ModelWeights weights_for(const ModelConfig& cfg, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return oracle::random_weights(cfg, rng);
}

SharedWeights share(Party& p, const ModelConfig& cfg, const ModelWeights& w) {
  static const ModelWeights empty;
  return share_weights(p, PartyId(0), cfg, p.id().value() == 0 ? w : empty);
}

SharedTensor token_input(Party& p, const std::vector<std::size_t>& tokens) {
  return input(p, std::vector<RingElem>(tokens.begin(), tokens.end()));
}

TEST(Matmul, IdentityAndZero) {
  const Mat a = random_mat(5, 5, -10, 10, 1);
  Mat id(5, 5);
  for (int i = 0; i < 5; ++i) id(i, i) = 1;
  const auto out = run3([&](Party& p) {
    const auto sa = input(p, Shape{5, 5}, encode(a.v));
    return std::pair(open(p, secure_matmul(p, input(p, Shape{5, 5}, encode(id.v)), sa)),
                     open(p, secure_matmul(p, SharedTensor(Shape{5, 5}), sa)));
  });
  EXPECT_LE(max_abs(decode(out.first), a), std::ldexp(1.0, -16));
  EXPECT_LE(test::max_abs_diff(decode(out.second), std::vector<double>(25, 0.0)), kCodec.ulp());
}

TEST(Matmul, MatchesFloatProduct) {
  const Mat a = random_mat(8, 8, -4, 4, 2), b = random_mat(8, 8, -4, 4, 3);
  const auto out = decode(run3([&](Party& p) {
    return open(p, secure_matmul(p, input(p, Shape{8, 8}, encode(a.v)), input(p, Shape{8, 8}, encode(b.v))));
  }));
  EXPECT_LE(max_abs(out, oracle::matmul(a, b)), 8 * std::ldexp(1.0, -17));
}

TEST(Matmul, RectangularAndBatched) {
  const Mat a0 = random_mat(3, 7, -2, 2, 4), a1 = random_mat(3, 7, -2, 2, 5);
  const Mat b0 = random_mat(7, 4, -2, 2, 6), b1 = random_mat(7, 4, -2, 2, 7);
  std::vector<double> av(a0.v), bv(b0.v);
  av.insert(av.end(), a1.v.begin(), a1.v.end());
  bv.insert(bv.end(), b1.v.begin(), b1.v.end());
  const auto out = decode(run3([&](Party& p) {
    return open(p, secure_matmul(p, input(p, Shape{2, 3, 7}, encode(av)), input(p, Shape{2, 7, 4}, encode(bv))));
  }));
  std::vector<double> want(oracle::matmul(a0, b0).v);
  const auto second = oracle::matmul(a1, b1).v;
  want.insert(want.end(), second.begin(), second.end());
  EXPECT_LE(test::max_abs_diff(out, want), 8 * kCodec.ulp());
}

TEST(Matmul, PublicRightOperand) {
  const Mat a = random_mat(6, 5, -3, 3, 8), b = random_mat(5, 4, -3, 3, 9);
  const auto r = run_simulated([&](Party& p) {
    const auto sa = input(p, Shape{6, 5}, encode(a.v));
    const CommStats before = p.stats();
    const auto y = secure_matmul_public(p, sa, encode(b.v), Shape{5, 4});
    const CommStats cost = p.stats() - before;
    return std::pair(open(p, y), cost.bytes_sent);
  });
  EXPECT_LE(max_abs(decode(r.outputs[0].first), oracle::matmul(a, b)), 6 * kCodec.ulp());
  EXPECT_EQ(r.outputs[0].second, cost::trunc(24));
}

TEST(Matmul, InnerDimensionMismatchThrows) {
  EXPECT_THROW(run_simulated([](Party& p) { secure_matmul(p, SharedTensor(Shape{2, 3}), SharedTensor(Shape{4, 2})); }),
               ShapeError);
}

std::vector<RingElem> no_mask(std::size_t s) { return std::vector<RingElem>(s * s, 0); }

TEST(Attention, SingletonSequenceReturnsValueRow) {
  const auto q = test::quantize(test::uniform(4, -1, 1, 10)), v = test::quantize(test::uniform(4, -3, 3, 11));
  const auto out = decode(run3([&](Party& p) {
    const auto sq = input(p, Shape{1, 4}, encode(q));
    return open(p, secure_attention(p, sq, sq, input(p, Shape{1, 4}, encode(v)), no_mask(1)));
  }));
  EXPECT_LE(test::max_abs_diff(out, v), std::ldexp(1.0, -9));
}

TEST(Attention, DiagonalOnlyMaskReturnsOwnValueRow) {
  const std::size_t s = 6, dh = 4;
  const Mat q = random_mat(s, dh, -1, 1, 12), k = random_mat(s, dh, -1, 1, 13), v = random_mat(s, dh, -3, 3, 14);
  std::vector<RingElem> mask(s * s, kCodec.encode(kMaskValue));
  Mat fmask(s, s);
  for (auto& x : fmask.v) x = kMaskValue;
  for (std::size_t i = 0; i < s; ++i) {
    mask[i * s + i] = 0;
    fmask(i, i) = 0;
  }
  const auto out = decode(run3([&](Party& p) {
    return open(p, secure_attention(p, input(p, Shape{s, dh}, encode(q.v)), input(p, Shape{s, dh}, encode(k.v)),
                                    input(p, Shape{s, dh}, encode(v.v)), mask));
  }));
  EXPECT_LE(max_abs(out, v), std::ldexp(1.0, -9));
  EXPECT_LE(max_abs(out, oracle::attention_ref(q, k, v, fmask, true, oracle::Mode::mirrored)), std::ldexp(1.0, -9));
}

TEST(Attention, MatchesReference) {
  const std::size_t s = 8, dh = 8;
  const Mat q = random_mat(s, dh, -2, 2, 15), k = random_mat(s, dh, -2, 2, 16), v = random_mat(s, dh, -2, 2, 17);
  const auto mask = causal_mask(s, kCodec);
  for (bool scaled : {true, false}) {
    const auto out = decode(run3([&](Party& p) {
      return open(p, secure_attention(p, input(p, Shape{s, dh}, encode(q.v)), input(p, Shape{s, dh}, encode(k.v)),
                                      input(p, Shape{s, dh}, encode(v.v)), mask, scaled));
    }));
    const Mat want = oracle::attention_ref(q, k, v, oracle::causal_mask(s), scaled, oracle::Mode::mirrored);
    EXPECT_LE(max_abs(out, want), std::ldexp(1.0, -6)) << "scaled=" << scaled;
  }
}

TEST(CausalMask, Layout) {
  const auto m = causal_mask(3, kCodec);
  const RingElem x = kCodec.encode(kMaskValue);
  EXPECT_EQ(m, (std::vector<RingElem>{0, x, x, 0, 0, x, 0, 0, 0}));
}

TEST(MultiHead, MatchesReference) {
  const ModelConfig cfg = small_config();
  const auto w = weights_for(cfg, 18);
  const std::size_t s = 6;
  const Mat x = random_mat(s, cfg.d_model, -2, 2, 19);
  const auto out = decode(run3([&](Party& p) {
    const auto sw = share(p, cfg, w);
    return open(p, secure_multihead(p, input(p, Shape{s, cfg.d_model}, encode(x.v)), sw, 0, cfg, causal_mask(s, kCodec)));
  }));
  const Mat want = oracle::multihead_ref(x, w, 0, cfg, oracle::causal_mask(s), oracle::Mode::mirrored);
  EXPECT_LE(max_abs(out, want), std::ldexp(1.0, -6));
}

TEST(MultiHead, SingleHeadIsAttentionWithProjections) {
  ModelConfig cfg = small_config();
  cfg.n_heads = 1;
  const auto w = weights_for(cfg, 20);
  const std::size_t s = 5;
  const Mat x = random_mat(s, cfg.d_model, -2, 2, 21);
  const auto mask = causal_mask(s, kCodec);
  const auto out = run3([&](Party& p) {
    const auto sw = share(p, cfg, w);
    const auto sx = input(p, Shape{s, cfg.d_model}, encode(x.v));
    const auto fused = open(p, secure_multihead(p, sx, sw, 0, cfg, mask));
    const auto q = secure_matmul(p, sx, sw.at("layer0.wq"));
    const auto k = secure_matmul(p, sx, sw.at("layer0.wk"));
    const auto v = secure_matmul(p, sx, sw.at("layer0.wv"));
    const auto manual = open(p, secure_matmul(p, secure_attention(p, q, k, v, mask), sw.at("layer0.wo")));
    return std::pair(fused, manual);
  });
  EXPECT_LE(test::max_abs_diff(decode(out.first), decode(out.second)), std::ldexp(1.0, -8));
}

TEST(MultiHead, ZeroInputGivesZero) {
  const ModelConfig cfg = small_config();
  const auto w = weights_for(cfg, 22);
  const auto out = decode(run3([&](Party& p) {
    return open(p, secure_multihead(p, SharedTensor(Shape{4, cfg.d_model}), share(p, cfg, w), 0, cfg,
                                    causal_mask(4, kCodec)));
  }));
  EXPECT_LE(test::max_abs_diff(out, std::vector<double>(out.size(), 0.0)), std::ldexp(1.0, -12));
}

std::vector<double> ffn(const ModelConfig& cfg, const ModelWeights& w, const Mat& x) {
  return decode(run3([&](Party& p) {
    const auto sw = share(p, cfg, w);
    return open(p, secure_ffn(p, input(p, Shape{x.rows, x.cols}, encode(x.v)), sw.at("layer0.w1"),
                              sw.at("layer0.b1"), sw.at("layer0.w2"), sw.at("layer0.b2")));
  }));
}

TEST(Ffn, ZeroInputPropagatesBiases) {
  const ModelConfig cfg = small_config();
  const auto w = weights_for(cfg, 23);
  const Mat x(3, cfg.d_model);
  EXPECT_LE(max_abs(ffn(cfg, w, x), oracle::ffn_ref(x, w, 0, oracle::Mode::mirrored)), std::ldexp(1.0, -10));
}

TEST(Ffn, ZeroWeightsGiveSecondBias) {
  const ModelConfig cfg = small_config();
  auto w = weights_for(cfg, 24);
  for (const char* name : {"layer0.w1", "layer0.b1", "layer0.w2"}) {
    for (double& v : w.tensors.at(name).data) v = 0;
  }
  const Mat x = random_mat(3, cfg.d_model, -2, 2, 25);
  const auto out = ffn(cfg, w, x);
  const auto& b2 = w.at("layer0.b2").data;
  for (std::size_t i = 0; i < out.size(); ++i) {
    EXPECT_NEAR(out[i], kCodec.decode(kCodec.encode(b2[i % cfg.d_model])), std::ldexp(1.0, -12));
  }
}

TEST(Ffn, MatchesReference) {
  const ModelConfig cfg = small_config();
  const auto w = weights_for(cfg, 26);
  const Mat x = random_mat(6, cfg.d_model, -2, 2, 27);
  EXPECT_LE(max_abs(ffn(cfg, w, x), oracle::ffn_ref(x, w, 0, oracle::Mode::mirrored)), std::ldexp(1.0, -6));
}

class BlockPlacement : public ::testing::TestWithParam<NormPlacement> {};

TEST_P(BlockPlacement, MatchesReference) {
  ModelConfig cfg = small_config();
  cfg.norm_placement = GetParam();
  const auto w = weights_for(cfg, 28);
  const std::size_t s = 6;
  const Mat x = random_mat(s, cfg.d_model, -2, 2, 29);
  const auto out = decode(run3([&](Party& p) {
    return open(p, secure_block(p, input(p, Shape{s, cfg.d_model}, encode(x.v)), share(p, cfg, w), 0, cfg,
                                causal_mask(s, kCodec)));
  }));
  const Mat want = oracle::block_ref(x, w, 0, cfg, oracle::causal_mask(s), oracle::Mode::mirrored);
  EXPECT_LE(max_abs(out, want), std::ldexp(1.0, -6));
}

INSTANTIATE_TEST_SUITE_P(Placements, BlockPlacement, ::testing::Values(NormPlacement::post, NormPlacement::pre));

std::vector<double> forward(const ModelConfig& cfg, const ModelWeights& w, const std::vector<std::size_t>& tokens,
                            std::uint64_t seed = 1) {
  return decode(run3([&](Party& p) { return open(p, secure_forward(p, token_input(p, tokens), share(p, cfg, w), cfg)); },
                     seed));
}

std::vector<std::size_t> random_tokens(std::size_t s, std::size_t vocab, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> t(s);
  for (auto& x : t) x = rng() % vocab;
  return t;
}

TEST(Forward, TinyModelMatchesReference) {
  const ModelConfig cfg;  // 2 layers, d 64, 4 heads, d_ff 256, vocab 100
  for (std::uint64_t seed : {1, 2}) {
    const auto w = weights_for(cfg, seed);
    const auto tokens = random_tokens(8, cfg.vocab_size, seed + 100);
    const auto out = forward(cfg, w, tokens, seed);
    const Mat want = oracle::forward_ref(tokens, w, cfg, oracle::Mode::mirrored);
    EXPECT_LE(max_abs(out, want), 1e-2);
    EXPECT_EQ(oracle::argmax(std::span(out).subspan(7 * cfg.vocab_size, cfg.vocab_size)), oracle::argmax(want.row(7)));
  }
}

TEST(Forward, PreNormAndPaperLayerNorm) {
  ModelConfig cfg = small_config();
  cfg.norm_placement = NormPlacement::pre;
  cfg.attn_scale = false;
  const auto w = weights_for(cfg, 30);
  const auto tokens = random_tokens(5, cfg.vocab_size, 31);
  EXPECT_LE(max_abs(forward(cfg, w, tokens), oracle::forward_ref(tokens, w, cfg, oracle::Mode::mirrored)), 1e-2);
  cfg.norm_placement = NormPlacement::post;
  cfg.ln_mode = LayerNormMode::paper;
  EXPECT_LE(max_abs(forward(cfg, w, tokens), oracle::forward_ref(tokens, w, cfg, oracle::Mode::mirrored)), 1e-2);
}

TEST(Forward, CausalMaskHidesTheFuture) {
  const ModelConfig cfg = small_config();
  const auto w = weights_for(cfg, 32);
  const std::size_t s = 6, v = cfg.vocab_size;
  const auto a = random_tokens(s, v, 33);
  for (std::size_t i = 0; i + 1 < s; i += 2) {
    auto b = a;
    for (std::size_t j = i + 1; j < s; ++j) b[j] = (a[j] + 7) % v;
    const auto la = forward(cfg, w, a), lb = forward(cfg, w, b);
    const std::vector<double> pa(la.begin(), la.begin() + (i + 1) * v), pb(lb.begin(), lb.begin() + (i + 1) * v);
    EXPECT_LE(test::max_abs_diff(pa, pb), std::ldexp(1.0, -8)) << "prefix " << i;
  }
}

TEST(Forward, TraceHasEveryBlock) {
  const ModelConfig cfg = small_config();
  const auto w = weights_for(cfg, 34);
  const auto tokens = random_tokens(4, cfg.vocab_size, 35);
  const auto out = run3([&](Party& p) {
    std::vector<SharedTensor> trace;
    secure_forward(p, token_input(p, tokens), share(p, cfg, w), cfg, &trace);
    std::vector<std::vector<RingElem>> opened;
    for (const auto& t : trace) opened.push_back(open(p, t));
    return opened;
  });
  std::vector<Mat> ref;
  oracle::forward_ref(tokens, w, cfg, oracle::Mode::mirrored, &ref);
  ASSERT_EQ(out.size(), cfg.n_layers + 1);
  for (std::size_t i = 0; i < out.size(); ++i) EXPECT_LE(max_abs(decode(out[i]), ref[i]), 1e-2) << i;
}

TEST(Forward, Errors) {
  const ModelConfig cfg = small_config();
  const auto w = weights_for(cfg, 36);
  EXPECT_THROW(forward(cfg, w, random_tokens(cfg.max_seq_len + 1, cfg.vocab_size, 1)), ShapeError);
  ModelConfig bad = cfg;
  bad.n_heads = 3;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  auto missing = w;
  missing.tensors.erase("layer0.wk");
  EXPECT_THROW(missing.check(cfg), ShapeError);
  auto misshapen = w;
  misshapen.tensors.at("lm_head").shape = {cfg.vocab_size, cfg.d_model};
  EXPECT_THROW(misshapen.check(cfg), ShapeError);
}

TEST(DebugChecks, ReplicationHoldsAfterEveryBlock) {
  const ModelConfig cfg = small_config();
  const auto w = weights_for(cfg, 37);
  const auto tokens = random_tokens(4, cfg.vocab_size, 38);
  RunOptions plain, debug;
  debug.party.debug_checks = true;
  auto prog = [&](Party& p) {
    const auto ids = token_input(p, tokens);
    const auto sw = share(p, cfg, w);
    const CommStats before = p.stats();
    const auto logits = secure_forward(p, ids, sw, cfg);
    const CommStats used = p.stats() - before;
    return std::pair(open(p, logits), used.bytes_sent);
  };
  const auto a = run_simulated(prog, plain), b = run_simulated(prog, debug);
  EXPECT_EQ(a.outputs[0].first, b.outputs[0].first);
  EXPECT_EQ(b.outputs[0].second - a.outputs[0].second, cfg.n_layers * 2 * cost::open(4 * cfg.d_model));
}

TEST(DebugChecks, TamperedShareIsDetected) {
  EXPECT_THROW(run_simulated([](Party& p) {
                 auto x = input(p, {1, 2, 3});
                 if (p.id().value() == 1) x[1].lo += 1;
                 return open_checked(p, x);
               }),
               ShareConsistencyError);
}

TEST(Cost, ForwardBytesMatchAnalyticCount) {
  ModelConfig cfg = small_config();
  const auto w = weights_for(cfg, 39);
  for (auto placement : {NormPlacement::post, NormPlacement::pre}) {
    for (bool debug : {false, true}) {
      for (std::size_t s : {1u, 3u, 8u}) {
        cfg.norm_placement = placement;
        RunOptions opts;
        opts.party.debug_checks = debug;
        const auto tokens = random_tokens(s, cfg.vocab_size, s);
        const auto r = run_simulated(
            [&](Party& p) {
              const auto ids = token_input(p, tokens);
              const auto sw = share(p, cfg, w);
              const CommStats before = p.stats();
              secure_forward(p, ids, sw, cfg);
              return p.stats() - before;
            },
            opts);
        for (const auto& st : r.outputs) EXPECT_EQ(st.bytes_sent, cost::forward(s, cfg, debug)) << s;
      }
    }
  }
}

TEST(Greedy, MatchesPlaintextDecoding) {
  const ModelConfig cfg = small_config();
  const auto w = weights_for(cfg, 40);
  const std::vector<std::size_t> prompt{3, 1, 4};
  const auto got = run3([&](Party& p) { return greedy_generate(p, token_input(p, prompt), share(p, cfg, w), cfg, 3); });
  std::vector<std::size_t> seq = prompt, want;
  for (int step = 0; step < 3; ++step) {
    const Mat logits = oracle::forward_ref(seq, w, cfg, oracle::Mode::mirrored);
    want.push_back(oracle::argmax(logits.row(seq.size() - 1)));
    seq.push_back(want.back());
  }
  EXPECT_EQ(got, want);
}

}  // namespace
}  // namespace puma
