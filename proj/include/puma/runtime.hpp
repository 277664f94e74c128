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

#include <array>
#include <chrono>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <type_traits>
#include <variant>

#include "puma/channel.hpp"
#include "puma/party.hpp"
#include "puma/tcp.hpp"

namespace puma {

struct RunOptions {
  std::uint64_t seed = 0;  // PRF key derivation
  std::chrono::milliseconds timeout{30000};
  PartyOptions party{};
  std::size_t max_frame = kMaxFramePayload;  // TCP only
};

template <class F>
using ProgramResult = std::conditional_t<std::is_void_v<std::invoke_result_t<F, Party&>>, std::monostate,
                                         std::invoke_result_t<F, Party&>>;

// Aggregate over parties: bytes and messages are the per-party maximum, rounds
// the maximum over parties.
inline CommStats summarize(const std::array<CommStats, 3>& per_party) {
  CommStats s;
  s.label = per_party[0].label;
  for (const auto& p : per_party) {
    s.bytes_sent = std::max(s.bytes_sent, p.bytes_sent);
    s.messages = std::max(s.messages, p.messages);
    s.rounds = std::max(s.rounds, p.rounds);
  }
  return s;
}

template <class T>
struct SimResult {
  std::array<T, 3> outputs;
  std::array<CommStats, 3> stats;
  CommStats summary() const { return summarize(stats); }
};

template <class T>
struct PartyResult {
  T output;
  CommStats stats;
};

namespace detail {

template <class F>
ProgramResult<F> invoke_program(F& f, Party& p) {
  if constexpr (std::is_void_v<std::invoke_result_t<F, Party&>>) {
    f(p);
    return {};
  } else {
    return f(p);
  }
}

}  // namespace detail

// Runs the same program as three party threads over in-memory channels. If a
// party throws, every channel is closed and the first exception is rethrown.
template <class F>
SimResult<ProgramResult<F>> run_simulated(F&& f, const RunOptions& opts = {}) {
  auto [c01, c10] = make_memory_channel_pair(0, 1, opts.timeout);
  auto [c12, c21] = make_memory_channel_pair(1, 2, opts.timeout);
  auto [c20, c02] = make_memory_channel_pair(2, 0, opts.timeout);
  std::array<Party, 3> parties{Party(PartyId(0), std::move(c01), std::move(c02), opts.party),
                               Party(PartyId(1), std::move(c12), std::move(c10), opts.party),
                               Party(PartyId(2), std::move(c20), std::move(c21), opts.party)};

  SimResult<ProgramResult<F>> result;
  std::mutex err_mu;
  std::exception_ptr first_error;
  auto body = [&](int i) {
    try {
      parties[i].setup_prf(opts.seed);
      parties[i].reset_stats();
      result.outputs[i] = detail::invoke_program(f, parties[i]);
      result.stats[i] = parties[i].stats();
    } catch (...) {
      {
        std::lock_guard lk(err_mu);
        if (!first_error) first_error = std::current_exception();
      }
      for (auto& p : parties) p.close();
    }
  };
  std::array<std::thread, 3> threads{std::thread(body, 0), std::thread(body, 1), std::thread(body, 2)};
  for (auto& t : threads) t.join();
  if (first_error) std::rethrow_exception(first_error);
  return result;
}

// Runs this party's instance of the program over TCP; the other two parties
// run the same call with their own ids.
template <class F>
PartyResult<ProgramResult<F>> run_tcp(const AddressBook& book, PartyId self, F&& f, const RunOptions& opts = {}) {
  TcpLinks links = connect_mesh(book, self, opts.timeout, opts.max_frame);
  Party party(self, std::move(links.to_next), std::move(links.to_prev), opts.party);
  party.setup_prf(opts.seed);
  party.reset_stats();
  PartyResult<ProgramResult<F>> out{detail::invoke_program(f, party), {}};
  out.stats = party.stats();
  return out;
}

// All three parties over real localhost sockets, one thread each. Used to
// check that results and counters do not depend on the transport.
template <class F>
SimResult<ProgramResult<F>> run_tcp_local(const AddressBook& book, F&& f, const RunOptions& opts = {}) {
  SimResult<ProgramResult<F>> result;
  std::mutex err_mu;
  std::exception_ptr first_error;
  auto body = [&](int i) {
    try {
      auto r = run_tcp(book, PartyId(i), f, opts);
      result.outputs[i] = std::move(r.output);
      result.stats[i] = r.stats;
    } catch (...) {
      std::lock_guard lk(err_mu);
      if (!first_error) first_error = std::current_exception();
    }
  };
  std::array<std::thread, 3> threads{std::thread(body, 0), std::thread(body, 1), std::thread(body, 2)};
  for (auto& t : threads) t.join();
  if (first_error) std::rethrow_exception(first_error);
  return result;
}

}  // namespace puma
