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

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <array>
#include <cerrno>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <exception>
#include <mutex>
#include <vector>
#include <cstring>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <utility>

#include "puma/channel.hpp"
#include "puma/errors.hpp"
#include "puma/ring.hpp"

namespace puma {

struct Endpoint {
  std::string host;
  std::uint16_t port = 0;
};

using AddressBook = std::array<Endpoint, 3>;

inline constexpr std::size_t kMaxFramePayload = std::size_t{64} << 20;  // 64 MiB

// Parsed party config file:
//
//   # comments and blank lines are ignored
//   party0 = 127.0.0.1:9100
//   party1 = 127.0.0.1:9101
//   party2 = 127.0.0.1:9102
//   party = 1          (optional; --party overrides)
//   seed = 42
//   timeout_ms = 30000
struct PartyConfig {
  AddressBook endpoints;
  std::optional<int> party;
  std::uint64_t seed = 0;
  std::chrono::milliseconds timeout{30000};
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline Endpoint parse_endpoint(const std::string& v, std::size_t line) {
  const auto colon = v.rfind(':');
  if (colon == std::string::npos) throw FormatError("expected host:port at line " + std::to_string(line), line);
  Endpoint ep{v.substr(0, colon), 0};
  try {
    const unsigned long port = std::stoul(v.substr(colon + 1));
    if (port == 0 || port > 65535) throw std::out_of_range("port");
    ep.port = static_cast<std::uint16_t>(port);
  } catch (const std::logic_error&) {
    throw FormatError("bad port at line " + std::to_string(line), line);
  }
  return ep;
}

}  // namespace detail

inline PartyConfig parse_party_config(std::istream& in) {
  PartyConfig cfg;
  std::array<bool, 3> seen{};
  std::string raw;
  for (std::size_t line = 1; std::getline(in, raw); ++line) {
    const std::string text = detail::trim(raw.substr(0, raw.find('#')));
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw FormatError("expected key = value at line " + std::to_string(line), line);
    const std::string key = detail::trim(text.substr(0, eq));
    const std::string val = detail::trim(text.substr(eq + 1));
    try {
      if (key.size() == 6 && key.rfind("party", 0) == 0 && key[5] >= '0' && key[5] <= '2') {
        const int i = key[5] - '0';
        cfg.endpoints[i] = detail::parse_endpoint(val, line);
        seen[i] = true;
      } else if (key == "party") {
        cfg.party = PartyId(std::stoi(val)).value();
      } else if (key == "seed") {
        cfg.seed = std::stoull(val);
      } else if (key == "timeout_ms") {
        cfg.timeout = std::chrono::milliseconds(std::stoll(val));
      } else {
        throw FormatError("unknown key '" + key + "' at line " + std::to_string(line), line);
      }
    } catch (const std::logic_error&) {
      throw FormatError("bad value for '" + key + "' at line " + std::to_string(line), line);
    }
  }
  for (int i = 0; i < 3; ++i) {
    if (!seen[i]) throw FormatError("missing endpoint party" + std::to_string(i));
  }
  return cfg;
}

inline PartyConfig load_party_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open config file " + path);
  return parse_party_config(in);
}

// Socket channel. Each logical message is sent as one or more frames
// [u32 little-endian length][payload] with payloads of at most max_frame bytes.
//
// Sends are queued and written by a per-channel writer thread. Resharing has
// every party send to its neighbour at once, so blocking writes would
// deadlock around the ring once messages exceed the socket buffers.
class TcpChannel : public Channel {
 public:
  TcpChannel(int fd, int self, int peer, std::chrono::milliseconds timeout,
             std::size_t max_frame = kMaxFramePayload)
      : fd_(fd), self_(self), peer_(peer), timeout_(timeout), max_frame_(max_frame) {
    writer_ = std::thread([this] { write_loop(); });
  }
  ~TcpChannel() override { close(); }
  TcpChannel(const TcpChannel&) = delete;
  TcpChannel& operator=(const TcpChannel&) = delete;

  void send(std::span<const std::byte> msg) override {
    std::lock_guard lock(mu_);
    rethrow_write_error();
    if (stop_) throw ChannelError("send on closed channel to party " + std::to_string(peer_), peer_);
    pending_.emplace_back(msg.begin(), msg.end());
    cv_.notify_all();
  }

  void recv(std::span<std::byte> out) override {
    {
      std::lock_guard lock(mu_);
      rethrow_write_error();
    }
    std::size_t off = 0;
    do {
      std::array<std::byte, 4> header;
      read_all(header);
      std::size_t len = 0;
      for (int b = 0; b < 4; ++b) len |= std::size_t(std::to_integer<std::uint8_t>(header[b])) << (8 * b);
      if (len > out.size() - off || (len == 0 && !out.empty())) {
        throw ProtocolOrderError("party " + std::to_string(self_) + " got a " + std::to_string(len) +
                                     "-byte frame from party " + std::to_string(peer_) + " while expecting " +
                                     std::to_string(out.size() - off),
                                 peer_);
      }
      read_all(out.subspan(off, len));
      off += len;
    } while (off < out.size());
  }

  // Flushes queued messages, then closes the socket.
  void close() override {
    {
      std::lock_guard lock(mu_);
      if (stop_ && !writer_.joinable()) return;
      stop_ = true;
    }
    cv_.notify_all();
    if (writer_.joinable()) writer_.join();
    if (fd_ >= 0) {
      ::shutdown(fd_, SHUT_RDWR);
      ::close(fd_);
      fd_ = -1;
    }
  }

 private:
  void rethrow_write_error() {
    if (write_error_) std::rethrow_exception(write_error_);
  }

  void write_loop() {
    for (;;) {
      std::vector<std::byte> msg;
      {
        std::unique_lock lock(mu_);
        cv_.wait(lock, [this] { return stop_ || !pending_.empty(); });
        if (pending_.empty()) return;
        msg = std::move(pending_.front());
        pending_.pop_front();
      }
      try {
        write_message(msg);
      } catch (...) {
        std::lock_guard lock(mu_);
        write_error_ = std::current_exception();
        pending_.clear();
        return;
      }
    }
  }

  void write_message(std::span<const std::byte> msg) {
    std::size_t off = 0;
    do {
      const std::size_t len = std::min(max_frame_, msg.size() - off);
      std::array<std::byte, 4> header;
      for (int b = 0; b < 4; ++b) header[b] = static_cast<std::byte>(len >> (8 * b));
      write_all(header);
      write_all(msg.subspan(off, len));
      off += len;
    } while (off < msg.size());
  }

  void write_all(std::span<const std::byte> buf) {
    while (!buf.empty()) {
      pollfd pfd{fd_, POLLOUT, 0};
      const int ready = ::poll(&pfd, 1, static_cast<int>(timeout_.count()));
      if (ready == 0) throw ChannelError("send to party " + std::to_string(peer_) + " timed out", peer_);
      if (ready < 0) {
        if (errno == EINTR) continue;
        throw ChannelError("poll failed: " + std::string(std::strerror(errno)), peer_);
      }
      const ssize_t n = ::send(fd_, buf.data(), buf.size(), MSG_NOSIGNAL);
      if (n < 0 && (errno == EINTR || errno == EAGAIN)) continue;
      if (n <= 0) {
        throw ChannelError("send to party " + std::to_string(peer_) + " failed: " + std::strerror(errno), peer_);
      }
      buf = buf.subspan(static_cast<std::size_t>(n));
    }
  }

  void read_all(std::span<std::byte> buf) {
    while (!buf.empty()) {
      pollfd pfd{fd_, POLLIN, 0};
      const int ready = ::poll(&pfd, 1, static_cast<int>(timeout_.count()));
      if (ready == 0) {
        throw ProtocolOrderError("party " + std::to_string(self_) + " timed out waiting for party " +
                                     std::to_string(peer_),
                                 peer_);
      }
      if (ready < 0) {
        if (errno == EINTR) continue;
        throw ChannelError("poll failed: " + std::string(std::strerror(errno)), peer_);
      }
      const ssize_t n = ::recv(fd_, buf.data(), buf.size(), 0);
      if (n < 0 && errno == EINTR) continue;
      if (n <= 0) throw ChannelError("connection to party " + std::to_string(peer_) + " lost", peer_);
      buf = buf.subspan(static_cast<std::size_t>(n));
    }
  }

  int fd_;
  int self_;
  int peer_;
  std::chrono::milliseconds timeout_;
  std::size_t max_frame_;
  std::mutex mu_;
  std::condition_variable cv_;
  std::deque<std::vector<std::byte>> pending_;
  bool stop_ = false;
  std::exception_ptr write_error_;
  std::thread writer_;
};

namespace detail {

class Fd {
 public:
  explicit Fd(int fd = -1) : fd_(fd) {}
  ~Fd() { if (fd_ >= 0) ::close(fd_); }
  Fd(Fd&& o) noexcept : fd_(std::exchange(o.fd_, -1)) {}
  Fd& operator=(Fd&& o) noexcept {
    if (this != &o) {
      if (fd_ >= 0) ::close(fd_);
      fd_ = std::exchange(o.fd_, -1);
    }
    return *this;
  }
  int get() const { return fd_; }
  int release() { return std::exchange(fd_, -1); }

 private:
  int fd_;
};

inline void set_nodelay(int fd) {
  int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
}

inline Fd listen_on(std::uint16_t port, int self) {
  Fd fd(::socket(AF_INET, SOCK_STREAM, 0));
  if (fd.get() < 0) throw ChannelError("socket() failed", self);
  int one = 1;
  ::setsockopt(fd.get(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_ANY);
  addr.sin_port = htons(port);
  if (::bind(fd.get(), reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0 || ::listen(fd.get(), 4) != 0) {
    throw ChannelError("party " + std::to_string(self) + " cannot listen on port " + std::to_string(port) + ": " +
                           std::strerror(errno),
                       self);
  }
  return fd;
}

inline Fd connect_to(const Endpoint& ep, int self, int peer, std::chrono::steady_clock::time_point deadline) {
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  if (::getaddrinfo(ep.host.c_str(), std::to_string(ep.port).c_str(), &hints, &res) != 0 || !res) {
    throw ChannelError("cannot resolve " + ep.host + " for party " + std::to_string(peer), peer);
  }
  std::unique_ptr<addrinfo, decltype(&::freeaddrinfo)> guard(res, &::freeaddrinfo);
  while (true) {
    Fd fd(::socket(res->ai_family, res->ai_socktype, res->ai_protocol));
    if (fd.get() >= 0 && ::connect(fd.get(), res->ai_addr, res->ai_addrlen) == 0) return fd;
    if (std::chrono::steady_clock::now() > deadline) {
      throw ChannelError("party " + std::to_string(self) + " could not connect to party " + std::to_string(peer) +
                             " at " + ep.host + ":" + std::to_string(ep.port),
                         peer);
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
}

}  // namespace detail

struct TcpLinks {
  std::unique_ptr<Channel> to_next;
  std::unique_ptr<Channel> to_prev;
};

// Builds the three-party mesh: every party listens on its own endpoint and
// connects to the lower-numbered parties, announcing itself with one byte.
inline TcpLinks connect_mesh(const AddressBook& book, PartyId self, std::chrono::milliseconds timeout,
                             std::size_t max_frame = kMaxFramePayload) {
  const int me = self.value();
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  std::array<detail::Fd, 3> socks;

  std::optional<detail::Fd> listener;
  if (me < 2) listener = detail::listen_on(book[me].port, me);

  for (int peer = 0; peer < me; ++peer) {
    detail::Fd fd = detail::connect_to(book[peer], me, peer, deadline);
    const auto hello = static_cast<std::uint8_t>(me);
    if (::send(fd.get(), &hello, 1, MSG_NOSIGNAL) != 1) throw ChannelError("handshake failed", peer);
    socks[peer] = std::move(fd);
  }
  for (int pending = 2 - me; pending > 0; --pending) {
    pollfd pfd{listener->get(), POLLIN, 0};
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
    if (::poll(&pfd, 1, static_cast<int>(std::max<long long>(left.count(), 0))) <= 0) {
      throw ChannelError("party " + std::to_string(me) + " timed out waiting for peers to connect", -1);
    }
    detail::Fd fd(::accept(listener->get(), nullptr, nullptr));
    std::uint8_t hello = 0xff;
    if (fd.get() < 0 || ::recv(fd.get(), &hello, 1, MSG_WAITALL) != 1 || hello > 2 || hello <= me) {
      throw ChannelError("bad handshake on party " + std::to_string(me) + "'s listener", -1);
    }
    socks[hello] = std::move(fd);
  }
  for (auto& s : socks) {
    if (s.get() >= 0) detail::set_nodelay(s.get());
  }
  const int next = self.next().value(), prev = self.prev().value();
  return {std::make_unique<TcpChannel>(socks[next].release(), me, next, timeout, max_frame),
          std::make_unique<TcpChannel>(socks[prev].release(), me, prev, timeout, max_frame)};
}

}  // namespace puma
