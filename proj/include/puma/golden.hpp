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

// Golden vectors: {config, cases: [{tokens, logits, activations?}]}.
// Floats are decimal strings so no precision is lost in transit.

#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "puma/errors.hpp"
#include "puma/oracle.hpp"

namespace puma {

struct GoldenCase {
  std::vector<std::size_t> tokens;
  oracle::Mat logits;
  std::map<std::string, oracle::Mat> activations;  // "embedding", "layer0", ...
};

struct GoldenFile {
  ModelConfig config;
  oracle::Mode mode = oracle::Mode::exact;
  std::vector<GoldenCase> cases;
};

namespace detail {

inline double parse_decimal(const nlohmann::json& v) {
  if (v.is_string()) {
    const auto& s = v.get_ref<const std::string&>();
    std::size_t used = 0;
    const double d = std::stod(s, &used);
    if (used != s.size()) throw FormatError("bad decimal string '" + s + "'");
    return d;
  }
  if (v.is_number()) return v.get<double>();
  throw FormatError("expected a decimal string");
}

inline oracle::Mat parse_matrix(const nlohmann::json& rows) {
  if (!rows.is_array() || rows.empty() || !rows[0].is_array()) throw FormatError("expected a non-empty 2-D array");
  oracle::Mat m(rows.size(), rows[0].size());
  for (std::size_t i = 0; i < m.rows; ++i) {
    if (rows[i].size() != m.cols) throw FormatError("ragged 2-D array");
    for (std::size_t j = 0; j < m.cols; ++j) m(i, j) = parse_decimal(rows[i][j]);
  }
  return m;
}

}  // namespace detail

inline GoldenFile parse_golden(const nlohmann::json& j) {
  try {
    GoldenFile g;
    const auto& c = j.at("config");
    g.config.n_layers = c.at("n_layers");
    g.config.d_model = c.at("d_model");
    g.config.n_heads = c.at("n_heads");
    g.config.d_ff = c.at("d_ff");
    g.config.vocab_size = c.at("vocab_size");
    g.config.max_seq_len = c.at("max_seq_len");
    g.config.norm_placement = c.value("norm_placement", std::string("post")) == "pre" ? NormPlacement::pre
                                                                                      : NormPlacement::post;
    g.config.attn_scale = c.value("attn_scale", true);
    g.config.ln_mode = c.value("ln_mode", std::string("standard")) == "paper" ? LayerNormMode::paper
                                                                              : LayerNormMode::standard;
    g.mode = j.value("reference", std::string("exact")) == "mirrored" ? oracle::Mode::mirrored : oracle::Mode::exact;
    g.config.validate();
    for (const auto& jc : j.at("cases")) {
      GoldenCase gc;
      gc.tokens = jc.at("tokens").get<std::vector<std::size_t>>();
      gc.logits = detail::parse_matrix(jc.at("logits"));
      if (jc.contains("activations")) {
        for (const auto& [name, rows] : jc.at("activations").items()) gc.activations[name] = detail::parse_matrix(rows);
      }
      g.cases.push_back(std::move(gc));
    }
    return g;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed golden file: ") + e.what());
  }
}

inline GoldenFile load_golden(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open golden file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("golden file " + path + " is not valid JSON: " + e.what());
  }
  return parse_golden(j);
}

inline nlohmann::json to_json(const oracle::ErrorStats& s, const std::string& name) {
  return {{"name", name}, {"max_err", s.max}, {"mean_err", s.mean}, {"median_err", s.median}, {"n_points", s.n_points}};
}

}  // namespace puma
