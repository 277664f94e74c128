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


// puma: verification, benchmarks and secure inference from the command line.
//
//   puma verify gelu --n 4096 --seed 7
//   puma verify all
//   puma bench softmax --n 128 --repeat 3 --mode tcp
//   puma infer --model tiny.pumaw --heads 4 --tokens 3,14,15 --steps 2
//   puma infer ... --mode tcp --party 1 --config parties.conf
//   puma random-weights --out tiny.pumaw --seed 1
//
// Exit codes: 0 ok, 1 verification failure or runtime error, 2 usage error.

#include <chrono>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "puma/oracle.hpp"
#include "puma/runtime.hpp"
#include "puma/transformer.hpp"
#include "puma/verify.hpp"
#include "puma/weights_io.hpp"

namespace {

using nlohmann::json;
using namespace puma;

struct Common {
  std::string mode = "sim";
  int party = -1;
  std::string config;
  std::uint64_t seed = 1;
  std::string json_path;
  CLI::Option* seed_opt = nullptr;
};

void add_common(CLI::App* cmd, Common& c, bool transport) {
  if (transport) {
    cmd->add_option("--mode", c.mode, "Transport")->check(CLI::IsMember({"sim", "tcp"}));
    cmd->add_option("--party", c.party, "This process's party id (tcp); omit to run all three locally")
        ->check(CLI::Range(0, 2));
    cmd->add_option("--config", c.config, "Party config file (tcp)");
  }
  c.seed_opt = cmd->add_option("--seed", c.seed, "Seed for inputs and PRF keys");
  cmd->add_option("--json", c.json_path, "Also write the JSON report here");
}

void emit(const json& j, const Common& c) {
  std::cout << j.dump(2) << "\n";
  if (!c.json_path.empty()) {
    std::ofstream out(c.json_path);
    if (!out) throw std::runtime_error("cannot write " + c.json_path);
    out << j.dump(2) << "\n";
  }
}

json stats_json(const CommStats& s) {
  return {{"bytes_per_party", s.bytes_sent}, {"messages", s.messages}, {"rounds", s.rounds}};
}

AddressBook default_book() {
  return {Endpoint{"127.0.0.1", 39100}, Endpoint{"127.0.0.1", 39101}, Endpoint{"127.0.0.1", 39102}};
}

// party < 0 hosts all three parties in this process.
struct Transport {
  bool tcp = false;
  int party = -1;
  AddressBook book = default_book();
  RunOptions opts;
};

Transport resolve(const Common& c) {
  Transport t;
  t.tcp = c.mode == "tcp";
  t.opts.seed = c.seed;
  t.party = c.party;
  if (!c.config.empty()) {
    const PartyConfig cfg = load_party_config(c.config);
    t.book = cfg.endpoints;
    if (t.party < 0 && cfg.party) t.party = *cfg.party;
    if (c.seed_opt->count() == 0) t.opts.seed = cfg.seed;
    t.opts.timeout = cfg.timeout;
  }
  if (!t.tcp && t.party >= 0) throw CLI::ValidationError("--party", "only meaningful with --mode tcp");
  return t;
}

// Runs `f` on the chosen transport. For a single tcp party only index
// `party` of the returned arrays is filled.
template <class F>
auto run(const Transport& t, F&& f) {
  using R = SimResult<ProgramResult<F>>;
  if (!t.tcp) return run_simulated(f, t.opts);
  if (t.party < 0) return run_tcp_local(t.book, f, t.opts);
  R r;
  auto one = run_tcp(t.book, PartyId(t.party), f, t.opts);
  r.outputs[t.party] = std::move(one.output);
  r.stats[t.party] = one.stats;
  return r;
}

int cmd_verify(const std::string& protocol, std::size_t n, const Common& c) {
  std::vector<std::string> names;
  if (protocol == "all") {
    names = verify::protocols();
  } else {
    const auto& known = verify::protocols();
    if (std::find(known.begin(), known.end(), protocol) == known.end()) {
      std::cerr << "unknown protocol '" << protocol << "'; expected one of: all";
      for (const auto& k : known) std::cerr << " " << k;
      std::cerr << "\n";
      return 2;
    }
    names = {protocol};
  }
  json reports = json::array();
  bool ok = true;
  for (const auto& name : names) {
    std::size_t size = n;
    if (protocol == "all") size = name == "matmul" ? 16 : name == "embedding" ? 64 : n;
    const auto r = verify::run_simulated_case(name, size, c.seed);
    ok = ok && r.passed;
    reports.push_back(verify::to_json(r));
  }
  emit(names.size() == 1 ? reports[0] : reports, c);
  return ok ? 0 : 1;
}

int cmd_bench(const std::string& protocol, std::size_t n, int repeat, const Common& c) {
  const Transport t = resolve(c);
  const verify::Case k = verify::make_case(protocol, n, c.seed);
  json runs = json::array();
  bool ok = true;
  CommStats first{};
  bool deterministic = true;
  for (int i = 0; i < repeat; ++i) {
    const auto start = std::chrono::steady_clock::now();
    const auto r = run(t, k.program);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const int idx = t.party >= 0 && t.tcp ? t.party : 0;
    std::array<CommStats, 3> per;
    for (int j = 0; j < 3; ++j) per[j] = r.outputs[j].op_stats;
    const CommStats s = t.party >= 0 && t.tcp ? r.outputs[idx].op_stats : summarize(per);
    const auto rep = verify::finish(k, r.outputs[idx].opened, s);
    ok = ok && rep.passed;
    if (i == 0) first = s;
    deterministic = deterministic && s.bytes_sent == first.bytes_sent && s.rounds == first.rounds;
    json j = stats_json(s);
    j["wall_seconds"] = secs;
    j["max_err"] = rep.max_err;
    j["passed"] = rep.passed;
    runs.push_back(j);
  }
  json out = {{"protocol", protocol}, {"n", n},           {"mode", c.mode},
              {"runs", runs},         {"deterministic_counts", deterministic}};
  if (t.tcp && t.party >= 0) out["party"] = t.party;
  emit(out, c);
  return ok ? 0 : 1;
}

std::vector<std::size_t> parse_tokens(const std::string& s) {
  std::vector<std::size_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    const unsigned long long v = std::stoull(item, &used);
    if (used != item.size()) throw CLI::ValidationError("--tokens", "not an integer: " + item);
    out.push_back(v);
  }
  if (out.empty()) throw CLI::ValidationError("--tokens", "no tokens given");
  return out;
}

struct InferArgs {
  std::string model;
  std::string tokens;
  std::size_t steps = 1;
  std::size_t heads = 1;
  std::string norm = "post";
  std::string ln_mode = "standard";
  bool no_attn_scale = false;
  bool debug_checks = false;
  bool compare = false;
};

int cmd_infer(const InferArgs& a, const Common& c) {
  Transport t = resolve(c);
  t.opts.party.debug_checks = a.debug_checks;
  // Every process reads the file to learn the shapes; only the weight owner
  // (P0) contributes its values.
  const ModelWeights plain = load_weights(a.model);
  ModelConfig cfg = infer_config(plain, a.heads, a.norm == "pre" ? NormPlacement::pre : NormPlacement::post,
                                 !a.no_attn_scale);
  cfg.ln_mode = a.ln_mode == "paper" ? LayerNormMode::paper : LayerNormMode::standard;
  const auto tokens = parse_tokens(a.tokens);
  if (tokens.size() + a.steps - 1 > cfg.max_seq_len) {
    throw CLI::ValidationError("--steps", "prompt plus generated tokens exceed max_seq_len " +
                                              std::to_string(cfg.max_seq_len));
  }
  for (std::size_t tok : tokens) {
    if (tok >= cfg.vocab_size) throw CLI::ValidationError("--tokens", "token id out of vocabulary");
  }

  struct Out {
    std::vector<std::size_t> generated;
    CommStats sharing, inference;
  };
  const auto start = std::chrono::steady_clock::now();
  const auto r = run(t, [&](Party& p) {
    const ModelWeights empty;
    const SharedWeights w = share_weights(p, PartyId(0), cfg, p.id().value() == 0 ? plain : empty);
    const std::vector<RingElem> ids(tokens.begin(), tokens.end());
    const SharedTensor prompt = share_input(p, PartyId(1), Shape{ids.size()},
                                            p.id().value() == 1 ? std::span<const RingElem>(ids)
                                                                : std::span<const RingElem>{});
    const CommStats shared = p.stats();
    Out o;
    o.generated = greedy_generate(p, prompt, w, cfg, a.steps);
    o.sharing = shared;
    o.inference = p.stats() - shared;
    return o;
  });
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const int idx = t.tcp && t.party >= 0 ? t.party : 0;
  std::array<CommStats, 3> sh, inf;
  for (int j = 0; j < 3; ++j) {
    sh[j] = r.outputs[j].sharing;
    inf[j] = r.outputs[j].inference;
  }
  const bool single = t.tcp && t.party >= 0;
  json out = {{"mode", c.mode},
              {"prompt", tokens},
              {"generated", r.outputs[idx].generated},
              {"sharing", stats_json(single ? sh[idx] : summarize(sh))},
              {"inference", stats_json(single ? inf[idx] : summarize(inf))},
              {"wall_seconds", secs}};
  if (single) out["party"] = t.party;
  if (a.compare) {
    // Plaintext greedy decode with the mirrored oracle, for parity checks.
    std::vector<std::size_t> seq = tokens, expect;
    for (std::size_t s = 0; s < a.steps; ++s) {
      const auto logits = oracle::forward_ref(seq, plain, cfg, oracle::Mode::mirrored);
      expect.push_back(oracle::argmax(logits.row(seq.size() - 1)));
      seq.push_back(expect.back());
    }
    out["plaintext_generated"] = expect;
    out["match"] = expect == r.outputs[idx].generated;
  }
  emit(out, c);
  return 0;
}

int cmd_random_weights(const std::string& path, const ModelConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  std::mt19937_64 rng(seed);
  save_weights(oracle::random_weights(cfg, rng), path);
  std::cout << json{{"written", path}, {"tensors", expected_shapes(cfg).size()}}.dump() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Three-party secure transformer inference"};
  app.require_subcommand(1);

  Common common;
  std::string protocol;
  std::size_t n = 1024;
  int repeat = 1;

  auto* verify_cmd = app.add_subcommand("verify", "Run a protocol against its plaintext oracle");
  verify_cmd->add_option("protocol", protocol, "Protocol name or 'all'")->required();
  verify_cmd->add_option("--n", n, "Problem size");
  add_common(verify_cmd, common, false);

  auto* bench_cmd = app.add_subcommand("bench", "Time a protocol and report communication");
  bench_cmd->add_option("protocol", protocol, "Protocol name")->required()->check(CLI::IsMember(verify::protocols()));
  bench_cmd->add_option("--n", n, "Problem size");
  bench_cmd->add_option("--repeat", repeat, "Repetitions")->check(CLI::PositiveNumber);
  add_common(bench_cmd, common, true);

  InferArgs infer;
  auto* infer_cmd = app.add_subcommand("infer", "Greedy secure generation from a PUMAW1 model");
  infer_cmd->add_option("--model", infer.model, "PUMAW1 weight file")->required()->check(CLI::ExistingFile);
  infer_cmd->add_option("--tokens", infer.tokens, "Comma-separated prompt token ids")->required();
  infer_cmd->add_option("--steps", infer.steps, "Tokens to generate")->check(CLI::PositiveNumber);
  infer_cmd->add_option("--heads", infer.heads, "Attention heads")->required()->check(CLI::PositiveNumber);
  infer_cmd->add_option("--norm", infer.norm, "LayerNorm placement")->check(CLI::IsMember({"post", "pre"}));
  infer_cmd->add_option("--ln-mode", infer.ln_mode, "LayerNorm variant")->check(CLI::IsMember({"standard", "paper"}));
  infer_cmd->add_flag("--no-attn-scale", infer.no_attn_scale, "Skip the 1/sqrt(d_head) score scale");
  infer_cmd->add_flag("--debug-checks", infer.debug_checks, "Open and cross-check every block output");
  infer_cmd->add_flag("--compare", infer.compare, "Also decode with the plaintext oracle");
  add_common(infer_cmd, common, true);

  ModelConfig rcfg;
  std::string out_path;
  std::uint64_t wseed = 0;
  auto* rw_cmd = app.add_subcommand("random-weights", "Write a randomly initialized PUMAW1 model");
  rw_cmd->add_option("--out", out_path, "Output path")->required();
  rw_cmd->add_option("--layers", rcfg.n_layers);
  rw_cmd->add_option("--d-model", rcfg.d_model);
  rw_cmd->add_option("--heads", rcfg.n_heads);
  rw_cmd->add_option("--d-ff", rcfg.d_ff);
  rw_cmd->add_option("--vocab", rcfg.vocab_size);
  rw_cmd->add_option("--max-seq", rcfg.max_seq_len);
  rw_cmd->add_option("--seed", wseed);

  // CLI11's own exit codes are per error kind; collapse them to 2.
  auto usage = [&app](const CLI::Error& e) { return app.exit(e) == 0 ? 0 : 2; };
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return usage(e);
  }

  try {
    if (*verify_cmd) return cmd_verify(protocol, n, common);
    if (*bench_cmd) return cmd_bench(protocol, n, repeat, common);
    if (*infer_cmd) return cmd_infer(infer, common);
    if (*rw_cmd) return cmd_random_weights(out_path, rcfg, wseed);
  } catch (const CLI::Error& e) {
    return usage(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
