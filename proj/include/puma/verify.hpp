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

// Named verification cases: random inputs, the secure protocol, and an
// independent plaintext check with a pinned tolerance. Shared by the
// command-line `verify`/`bench` commands and the test suites.

#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "puma/cost.hpp"
#include "puma/oracle.hpp"
#include "puma/runtime.hpp"

namespace puma::verify {

struct Outcome {
  std::vector<std::uint64_t> opened;  // reconstructed result (ring or bit words)
  CommStats op_stats;                 // this party's traffic for the protocol only
};

struct Check {
  double max_err = 0;
  double mean_err = 0;
  bool passed = false;
};

struct Case {
  std::string protocol;
  std::size_t n = 0;
  double tolerance = 0;
  std::function<Outcome(Party&)> program;
  std::function<Check(const std::vector<std::uint64_t>&)> check;
};

struct Report {
  std::string protocol;
  std::size_t n = 0;
  double max_err = 0;
  double mean_err = 0;
  double tolerance = 0;
  std::uint64_t bytes_per_party = 0;
  std::uint64_t rounds = 0;
  bool passed = false;
};

inline nlohmann::json to_json(const Report& r) {
  return {{"protocol", r.protocol}, {"n", r.n},
          {"max_err", r.max_err},   {"mean_err", r.mean_err},
          {"tolerance", r.tolerance}, {"bytes_per_party", r.bytes_per_party},
          {"rounds", r.rounds},     {"passed", r.passed}};
}

inline const std::vector<std::string>& protocols() {
  static const std::vector<std::string> names = {
      "open",  "mul",    "square",  "trunc",   "trunc_probabilistic", "mul_fixed", "a2b",    "lt",
      "eq",    "mul_ba", "max",     "recip",   "rsqrt",               "neg_exp",   "gelu",   "softmax",
      "layernorm", "embedding", "matmul"};
  return names;
}

namespace detail {

struct Input {
  Shape shape;
  std::vector<RingElem> values;
  unsigned bool_width = 0;  // nonzero: boolean sharing of this many bits
};
using Inputs = std::vector<Input>;

struct Shared {
  std::vector<SharedTensor> a;
  std::vector<BoolTensor> b;
};

// Shares every input from P0, runs `op` and opens its result. Only the op is
// metered, unless `meter_open` also counts the final opening.
template <class Op>
std::function<Outcome(Party&)> program(Inputs inputs, Op op, bool meter_open = false) {
  return [inputs = std::move(inputs), op, meter_open](Party& p) {
    Shared sh;
    const bool owner = p.id().value() == 0;
    for (const auto& in : inputs) {
      const std::span<const RingElem> v = owner ? std::span<const RingElem>(in.values) : std::span<const RingElem>{};
      if (in.bool_width) {
        sh.b.push_back(share_input_bool(p, PartyId(0), in.shape, in.bool_width, v));
      } else {
        sh.a.push_back(share_input(p, PartyId(0), in.shape, v));
      }
    }
    const CommStats before = p.stats();
    const auto y = op(p, sh);
    if (!meter_open) {
      const CommStats after = p.stats();
      return Outcome{open(p, y), after - before};
    }
    auto opened = open(p, y);
    return Outcome{std::move(opened), p.stats() - before};
  };
}

struct ErrAcc {
  double max = 0, sum = 0;
  std::size_t n = 0;
  void add(double e) {
    max = std::max(max, e);
    sum += e;
    ++n;
  }
  Check done(double tol) const { return {max, n ? sum / double(n) : 0.0, max <= tol}; }
};

inline std::vector<RingElem> encode_all(const FixedCodec& c, const std::vector<double>& v) {
  std::vector<RingElem> out;
  for (double x : v) out.push_back(c.encode(x));
  return out;
}

inline std::vector<double> decode_all(const FixedCodec& c, const std::vector<RingElem>& v) {
  std::vector<double> out;
  for (RingElem x : v) out.push_back(c.decode(x));
  return out;
}

}  // namespace detail

// Element counts: n elements for elementwise protocols; row length n over 16
// rows for max, softmax, layernorm; vocabulary n (8 tokens, width 16) for
// embedding; n x n by n x n for matmul.
inline Case make_case(const std::string& name, std::size_t n, std::uint64_t seed) {
  using detail::Inputs;
  const FixedCodec c;
  const double ulp = c.ulp();
  std::mt19937_64 rng(seed);
  auto uniform = [&](double lo, double hi, std::size_t count) {
    std::uniform_real_distribution<double> d(lo, hi);
    std::vector<double> v(count);
    for (double& x : v) x = d(rng);
    return v;
  };
  auto log_uniform = [&](double lo_exp, double hi_exp, std::size_t count) {
    std::vector<double> v = uniform(lo_exp, hi_exp, count);
    for (double& x : v) x = std::min(std::exp2(x), c.max_magnitude - 1.0);
    return v;
  };
  Case k;
  k.protocol = name;
  k.n = n;
  const std::size_t rows = 16;

  if (name == "open" || name == "mul" || name == "a2b") {
    std::vector<RingElem> x(n), y(n);
    for (auto& v : x) v = rng();
    for (auto& v : y) v = rng();
    Inputs in{{{n}, x}, {{n}, y}};
    if (name == "open") k.program = detail::program(in, [](Party&, auto& s) { return s.a[0]; }, true);
    if (name == "mul") k.program = detail::program(in, [](Party& p, auto& s) { return mul(p, s.a[0], s.a[1]); });
    if (name == "a2b") k.program = detail::program(in, [](Party& p, auto& s) { return a2b(p, s.a[0]); });
    k.check = [x, y, name](const std::vector<std::uint64_t>& got) {
      detail::ErrAcc acc;
      for (std::size_t i = 0; i < x.size(); ++i) acc.add(got[i] == (name == "mul" ? x[i] * y[i] : x[i]) ? 0.0 : 1.0);
      return acc.done(0);
    };
  } else if (name == "square" || name == "mul_fixed") {
    const auto xv = uniform(-100, 100, n), yv = uniform(-100, 100, n);
    const auto x = detail::encode_all(c, xv), y = detail::encode_all(c, yv);
    k.tolerance = std::ldexp(1.0, -17);
    if (name == "square") {
      k.program = detail::program(Inputs{{{n}, x}}, [](Party& p, auto& s) { return square(p, s.a[0]); });
    } else {
      k.program = detail::program(Inputs{{{n}, x}, {{n}, y}}, [](Party& p, auto& s) { return mul_fixed(p, s.a[0], s.a[1]); });
    }
    k.check = [x, y, c, tol = k.tolerance, sq = name == "square"](const std::vector<std::uint64_t>& got) {
      detail::ErrAcc acc;
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double a = c.decode(x[i]), b = sq ? a : c.decode(y[i]);
        acc.add(std::fabs(c.decode(got[i]) - a * b));
      }
      return acc.done(tol);
    };
  } else if (name == "trunc" || name == "trunc_probabilistic") {
    // In-range ring integers; error measured in result ulps against floor.
    std::vector<RingElem> x(n);
    // The precise protocol is exercised up to 2^59; the probabilistic one
    // only within its 2^42 precondition (wrap probability 2^-22 per element).
    const bool precise = name == "trunc";
    const std::int64_t bound = std::int64_t{1} << (precise ? 59 : 42);
    std::uniform_int_distribution<std::int64_t> d(-bound, bound);
    for (auto& v : x) v = from_signed(d(rng));
    k.tolerance = 1;
    k.program = detail::program(Inputs{{{n}, x}}, [precise](Party& p, auto& s) {
      return precise ? trunc(p, s.a[0], 18) : trunc_probabilistic(p, s.a[0], 18);
    });
    k.check = [x](const std::vector<std::uint64_t>& got) {
      detail::ErrAcc acc;
      for (std::size_t i = 0; i < x.size(); ++i) {
        const std::int64_t expect = to_signed(x[i]) >> 18;
        acc.add(std::fabs(static_cast<double>(to_signed(got[i]) - expect)));
      }
      return acc.done(1);
    };
  } else if (name == "lt" || name == "eq") {
    auto xv = uniform(-1000, 1000, n), yv = uniform(-1000, 1000, n);
    for (std::size_t i = 0; i < n; i += 3) yv[i] = xv[i];  // ties
    const auto x = detail::encode_all(c, xv), y = detail::encode_all(c, yv);
    const bool is_lt = name == "lt";
    k.program = detail::program(Inputs{{{n}, x}, {{n}, y}}, [is_lt](Party& p, auto& s) {
      return is_lt ? lt(p, s.a[0], s.a[1]) : eq(p, s.a[0], s.a[1]);
    });
    k.check = [x, y, is_lt](const std::vector<std::uint64_t>& got) {
      detail::ErrAcc acc;
      for (std::size_t i = 0; i < x.size(); ++i) {
        const bool expect = is_lt ? to_signed(x[i]) < to_signed(y[i]) : x[i] == y[i];
        acc.add(got[i] == std::uint64_t(expect) ? 0.0 : 1.0);
      }
      return acc.done(0);
    };
  } else if (name == "mul_ba") {
    std::vector<RingElem> bits(n), x(n);
    for (auto& b : bits) b = rng() & 1u;
    for (auto& v : x) v = rng();
    k.program = detail::program(Inputs{{{n}, bits, 1}, {{n}, x}},
                                [](Party& p, auto& s) { return mul_ba(p, s.b[0], s.a[0]); });
    k.check = [bits, x](const std::vector<std::uint64_t>& got) {
      detail::ErrAcc acc;
      for (std::size_t i = 0; i < x.size(); ++i) acc.add(got[i] == (bits[i] ? x[i] : 0) ? 0.0 : 1.0);
      return acc.done(0);
    };
  } else if (name == "max") {
    auto xv = uniform(-1000, 1000, rows * n);
    const auto x = detail::encode_all(c, xv);
    k.program = detail::program(Inputs{{{rows, n}, x}}, [](Party& p, auto& s) { return max_rows(p, s.a[0]); });
    k.check = [x, n](const std::vector<std::uint64_t>& got) {
      detail::ErrAcc acc;
      for (std::size_t r = 0; r < got.size(); ++r) {
        std::int64_t m = to_signed(x[r * n]);
        for (std::size_t j = 1; j < n; ++j) m = std::max(m, to_signed(x[r * n + j]));
        acc.add(to_signed(got[r]) == m ? 0.0 : 1.0);
      }
      return acc.done(0);
    };
  } else if (name == "recip" || name == "rsqrt") {
    const bool is_recip = name == "recip";
    const auto xv = is_recip ? log_uniform(-9, 18, n) : log_uniform(-10, 20, n);
    const auto x = detail::encode_all(c, xv);
    k.tolerance = is_recip ? std::ldexp(1.0, -10) : std::ldexp(1.0, -9);
    k.program = detail::program(Inputs{{{n}, x}}, [is_recip](Party& p, auto& s) {
      return is_recip ? recip(p, s.a[0]) : rsqrt(p, s.a[0]);
    });
    // Relative error, except where the true result is within 2 ulp (the
    // fixed-point floor), which counts as exact.
    k.check = [x, c, ulp, is_recip, tol = k.tolerance](const std::vector<std::uint64_t>& got) {
      detail::ErrAcc acc;
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double xd = c.decode(x[i]);
        const double expect = is_recip ? 1.0 / xd : 1.0 / std::sqrt(xd);
        const double diff = std::fabs(c.decode(got[i]) - expect);
        acc.add(diff <= 2 * ulp ? 0.0 : diff / expect);
      }
      return acc.done(tol);
    };
  } else if (name == "neg_exp" || name == "gelu") {
    const bool is_exp = name == "neg_exp";
    const auto xv = is_exp ? uniform(-16, 0, n) : uniform(-6, 5, n);
    const auto x = detail::encode_all(c, xv);
    k.tolerance = std::ldexp(1.0, -10);
    k.program = detail::program(Inputs{{{n}, x}}, [is_exp](Party& p, auto& s) {
      return is_exp ? neg_exp(p, s.a[0]) : secure_gelu(p, s.a[0]);
    });
    k.check = [x, c, is_exp, tol = k.tolerance](const std::vector<std::uint64_t>& got) {
      detail::ErrAcc acc;
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double xd = c.decode(x[i]);
        const double expect = is_exp ? oracle::neg_exp_ref(xd) : oracle::gelu_piecewise(xd);
        acc.add(std::fabs(c.decode(got[i]) - expect));
      }
      return acc.done(tol);
    };
  } else if (name == "softmax") {
    const auto x = detail::encode_all(c, uniform(-10, 10, rows * n));
    k.tolerance = std::ldexp(1.0, -10);
    k.program = detail::program(Inputs{{{rows, n}, x}}, [](Party& p, auto& s) { return secure_softmax(p, s.a[0]); });
    k.check = [x, c, n, tol = k.tolerance](const std::vector<std::uint64_t>& got) {
      detail::ErrAcc acc;
      const auto xd = detail::decode_all(c, x);
      for (std::size_t r = 0; r < xd.size() / n; ++r) {
        const auto ref = oracle::softmax_clipped(std::span(xd).subspan(r * n, n));
        for (std::size_t j = 0; j < n; ++j) acc.add(std::fabs(c.decode(got[r * n + j]) - ref[j]));
      }
      return acc.done(tol);
    };
  } else if (name == "layernorm") {
    const auto x = detail::encode_all(c, uniform(-5, 5, rows * n));
    auto gv = uniform(0.8, 1.2, n);
    const auto g = detail::encode_all(c, gv), b = detail::encode_all(c, uniform(-0.2, 0.2, n));
    k.tolerance = std::ldexp(1.0, -8);
    k.program = detail::program(Inputs{{{rows, n}, x}, {{n}, g}, {{n}, b}},
                                [](Party& p, auto& s) { return secure_layernorm(p, s.a[0], s.a[1], s.a[2]); });
    k.check = [x, g, b, c, n, tol = k.tolerance](const std::vector<std::uint64_t>& got) {
      detail::ErrAcc acc;
      const auto xd = detail::decode_all(c, x), gd = detail::decode_all(c, g), bd = detail::decode_all(c, b);
      for (std::size_t r = 0; r < xd.size() / n; ++r) {
        const auto ref = oracle::layernorm_ref(std::span(xd).subspan(r * n, n), gd, bd);
        for (std::size_t j = 0; j < n; ++j) acc.add(std::fabs(c.decode(got[r * n + j]) - ref[j]));
      }
      return acc.done(tol);
    };
  } else if (name == "embedding") {
    const std::size_t s = 8, d = 16;
    std::vector<RingElem> ids(s), table(n * d);
    for (auto& v : ids) v = rng() % (n + 1);  // id == n is out of range
    for (auto& v : table) v = rng();
    k.program = detail::program(Inputs{{{s}, ids}, {{n, d}, table}},
                                [](Party& p, auto& sh) { return secure_embedding(p, sh.a[0], sh.a[1]); });
    k.check = [ids, table, n, d](const std::vector<std::uint64_t>& got) {
      detail::ErrAcc acc;
      for (std::size_t t = 0; t < ids.size(); ++t)
        for (std::size_t j = 0; j < d; ++j) {
          const RingElem expect = ids[t] < n ? table[ids[t] * d + j] : 0;
          acc.add(got[t * d + j] == expect ? 0.0 : 1.0);
        }
      return acc.done(0);
    };
  } else if (name == "matmul") {
    const auto a = detail::encode_all(c, uniform(-2, 2, n * n)), b = detail::encode_all(c, uniform(-2, 2, n * n));
    k.tolerance = static_cast<double>(n + 1) * ulp;
    k.program = detail::program(Inputs{{{n, n}, a}, {{n, n}, b}},
                                [](Party& p, auto& s) { return secure_matmul(p, s.a[0], s.a[1]); });
    k.check = [a, b, c, n, tol = k.tolerance](const std::vector<std::uint64_t>& got) {
      detail::ErrAcc acc;
      oracle::Mat am(n, n), bm(n, n);
      am.v = detail::decode_all(c, a);
      bm.v = detail::decode_all(c, b);
      const oracle::Mat ref = oracle::matmul(am, bm);
      for (std::size_t i = 0; i < ref.v.size(); ++i) acc.add(std::fabs(c.decode(got[i]) - ref.v[i]));
      return acc.done(tol);
    };
  } else {
    throw std::invalid_argument("unknown protocol '" + name + "'");
  }
  return k;
}

inline Report finish(const Case& k, const std::vector<std::uint64_t>& opened, const CommStats& stats) {
  const Check ch = k.check(opened);
  return {k.protocol, k.n, ch.max_err, ch.mean_err, k.tolerance, stats.bytes_sent, stats.rounds, ch.passed};
}

inline Report run_simulated_case(const std::string& name, std::size_t n, std::uint64_t seed) {
  const Case k = make_case(name, n, seed);
  RunOptions opts;
  opts.seed = seed;
  const auto r = run_simulated(k.program, opts);
  return finish(k, r.outputs[0].opened,
                summarize(std::array<CommStats, 3>{r.outputs[0].op_stats, r.outputs[1].op_stats, r.outputs[2].op_stats}));
}

}  // namespace puma::verify
