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

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "puma/channel.hpp"
#include "puma/prf.hpp"
#include "puma/ring.hpp"
#include "puma/wire.hpp"

namespace puma {

// Per-party communication counters. Setup traffic is excluded.
struct CommStats {
  std::string label;
  std::uint64_t bytes_sent = 0;
  std::uint64_t messages = 0;
  // Number of times the party went from sending to waiting on a receive.
  std::uint64_t rounds = 0;

  CommStats operator-(const CommStats& o) const {
    return {label, bytes_sent - o.bytes_sent, messages - o.messages, rounds - o.rounds};
  }
  bool operator==(const CommStats& o) const {
    return bytes_sent == o.bytes_sent && messages == o.messages && rounds == o.rounds;
  }
};

struct PartyOptions {
  FixedCodec codec{};
  // Layer protocols open and cross-check intermediate shares (extra traffic).
  bool debug_checks = false;
};

// One computing party: identity, channels to both peers, PRF state and
// communication statistics. Protocol code is written against this class and
// runs unchanged over the in-memory simulator and TCP.
class Party {
 public:
  Party(PartyId id, std::unique_ptr<Channel> to_next, std::unique_ptr<Channel> to_prev,
        PartyOptions options = {})
      : id_(id), next_(std::move(to_next)), prev_(std::move(to_prev)), options_(options) {}

  PartyId id() const { return id_; }
  const FixedCodec& codec() const { return options_.codec; }
  int frac_bits() const { return options_.codec.frac_bits; }
  bool debug_checks() const { return options_.debug_checks; }

  PrfSetup& prf() {
    if (!prf_) throw std::logic_error("party PRF keys are not set up");
    return *prf_;
  }

  // Each party derives its own key from (seed, id), hands it to the previous
  // party and keeps the one received from the next party. Counters reset.
  void setup_prf(std::uint64_t seed) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(id_.value()), 0x70756d61u};
    std::mt19937_64 rng(seq);
    PrfKey own{};
    for (std::size_t i = 0; i < own.size(); i += 8) {
      const std::uint64_t w = rng();
      for (int b = 0; b < 8; ++b) own[i + b] = static_cast<std::uint8_t>(w >> (8 * b));
    }
    PrfKey from_next{};
    prev_->send(std::as_bytes(std::span(own)));
    next_->recv(std::as_writable_bytes(std::span(from_next)));
    prf_.emplace(from_next, own);
  }

  // ---- messaging (counted) ----

  void send_bytes(PartyId to, std::span<const std::byte> msg) {
    channel(to).send(msg);
    stats_.bytes_sent += msg.size();
    stats_.messages += 1;
    sent_since_recv_ = true;
  }

  void recv_bytes(PartyId from, std::span<std::byte> out) {
    if (sent_since_recv_) {
      stats_.rounds += 1;
      sent_since_recv_ = false;
    }
    channel(from).recv(out);
  }

  void send_ring(PartyId to, std::span<const RingElem> values) {
    send_bytes(to, wire::encode_ring(values));
  }

  std::vector<RingElem> recv_ring(PartyId from, std::size_t n) {
    std::vector<std::byte> buf(n * 8);
    recv_bytes(from, buf);
    return wire::decode_ring(buf);
  }

  void send_bits(PartyId to, std::span<const std::uint64_t> words, unsigned width) {
    send_bytes(to, wire::pack_bits(words, width));
  }

  std::vector<std::uint64_t> recv_bits(PartyId from, std::size_t n, unsigned width) {
    std::vector<std::byte> buf(wire::packed_size(n, width));
    recv_bytes(from, buf);
    return wire::unpack_bits(buf, n, width);
  }

  CommStats stats() const { return stats_; }
  void reset_stats() {
    stats_ = CommStats{stats_.label};
    sent_since_recv_ = false;
  }
  void set_label(std::string label) { stats_.label = std::move(label); }

  void close() {
    next_->close();
    prev_->close();
  }

 private:
  Channel& channel(PartyId peer) {
    if (peer == id_.next()) return *next_;
    if (peer == id_.prev()) return *prev_;
    throw std::logic_error("party cannot message itself");
  }

  PartyId id_;
  std::unique_ptr<Channel> next_;
  std::unique_ptr<Channel> prev_;
  PartyOptions options_;
  std::optional<PrfSetup> prf_;
  CommStats stats_;
  bool sent_since_recv_ = false;
};

}  // namespace puma
