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

#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <deque>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "puma/errors.hpp"

namespace puma {

// Ordered, reliable, exactly-once message stream to one peer. recv() fills
// `out` with exactly the next message; a size mismatch is a protocol error.
class Channel {
 public:
  virtual ~Channel() = default;
  virtual void send(std::span<const std::byte> msg) = 0;
  virtual void recv(std::span<std::byte> out) = 0;
  // Unblocks any pending recv on both ends; subsequent calls fail.
  virtual void close() {}
};

namespace detail {

struct Pipe {
  std::mutex mu;
  std::condition_variable cv;
  std::deque<std::vector<std::byte>> queue;
  bool closed = false;
};

}  // namespace detail

// In-process channel endpoint; two endpoints share a pair of pipes.
class MemoryChannel : public Channel {
 public:
  MemoryChannel(std::shared_ptr<detail::Pipe> out, std::shared_ptr<detail::Pipe> in, int self,
                int peer, std::chrono::milliseconds timeout)
      : out_(std::move(out)), in_(std::move(in)), self_(self), peer_(peer), timeout_(timeout) {}

  void send(std::span<const std::byte> msg) override {
    std::lock_guard lk(out_->mu);
    if (out_->closed) throw ChannelError("channel to party " + std::to_string(peer_) + " is closed", peer_);
    out_->queue.emplace_back(msg.begin(), msg.end());
    out_->cv.notify_all();
  }

  void recv(std::span<std::byte> out) override {
    std::unique_lock lk(in_->mu);
    const bool ready = in_->cv.wait_for(lk, timeout_, [&] { return !in_->queue.empty() || in_->closed; });
    if (!ready) {
      throw ProtocolOrderError("party " + std::to_string(self_) + " timed out waiting for party " +
                                   std::to_string(peer_),
                               peer_);
    }
    if (in_->queue.empty()) {
      throw ChannelError("channel from party " + std::to_string(peer_) + " closed", peer_);
    }
    std::vector<std::byte> msg = std::move(in_->queue.front());
    in_->queue.pop_front();
    if (msg.size() != out.size()) {
      throw ProtocolOrderError("party " + std::to_string(self_) + " expected " + std::to_string(out.size()) +
                                   " bytes from party " + std::to_string(peer_) + ", got " +
                                   std::to_string(msg.size()),
                               peer_);
    }
    std::copy(msg.begin(), msg.end(), out.begin());
  }

  void close() override {
    for (auto* p : {out_.get(), in_.get()}) {
      std::lock_guard lk(p->mu);
      p->closed = true;
      p->cv.notify_all();
    }
  }

 private:
  std::shared_ptr<detail::Pipe> out_;
  std::shared_ptr<detail::Pipe> in_;
  int self_;
  int peer_;
  std::chrono::milliseconds timeout_;
};

inline std::pair<std::unique_ptr<MemoryChannel>, std::unique_ptr<MemoryChannel>> make_memory_channel_pair(
    int a, int b, std::chrono::milliseconds timeout) {
  auto ab = std::make_shared<detail::Pipe>();
  auto ba = std::make_shared<detail::Pipe>();
  return {std::make_unique<MemoryChannel>(ab, ba, a, b, timeout),
          std::make_unique<MemoryChannel>(ba, ab, b, a, timeout)};
}

}  // namespace puma
