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

#include <atomic>
#include <thread>

#include "puma/primitives.hpp"
#include "puma/runtime.hpp"
#include "puma/wire.hpp"
#include "test_util.hpp"

namespace puma {
namespace {

using test::input;
using test::run3;

PrfKey key(std::uint8_t fill) {
  PrfKey k;
  k.fill(fill);
  return k;
}

// Party i holds k_{i,i+1} as key_with_next and k_{i-1,i} as key_with_prev.
std::array<PrfSetup, 3> ring_of_setups() {
  const PrfKey k01 = key(1), k12 = key(2), k20 = key(3);
  return {PrfSetup(k01, k20), PrfSetup(k12, k01), PrfSetup(k20, k12)};
}

// Values cross-checked with an independent AES implementation.
TEST(Prf, KnownAnswers) {
  EXPECT_EQ(AesPrf(PrfKey{})(0), 0x3b2c8aefd44be966ull);
  PrfKey k;
  for (int i = 0; i < 16; ++i) k[i] = static_cast<std::uint8_t>(i);
  EXPECT_EQ(AesPrf(k)(5), 0x1cce52cb6cc79d78ull);
}

TEST(Prf, FillMatchesPointwise) {
  const AesPrf f(key(9));
  std::vector<RingElem> v(3000);
  f.fill(100, v);
  for (std::size_t j = 0; j < v.size(); j += 997) EXPECT_EQ(v[j], f(100 + j));
}

TEST(Prf, ZeroSharesSumToZero) {
  auto s = ring_of_setups();
  for (int i = 0; i < 10000; ++i) {
    ASSERT_EQ(s[0].zero_share() + s[1].zero_share() + s[2].zero_share(), 0u);
  }
  const auto a = s[0].zero_share(64), b = s[1].zero_share(64), c = s[2].zero_share(64);
  for (std::size_t j = 0; j < 64; ++j) EXPECT_EQ(a[j] + b[j] + c[j], 0u);
  const auto x = s[0].zero_share_xor(64), y = s[1].zero_share_xor(64), z = s[2].zero_share_xor(64);
  for (std::size_t j = 0; j < 64; ++j) EXPECT_EQ(x[j] ^ y[j] ^ z[j], 0u);
  EXPECT_EQ(s[0].counter(), s[1].counter());
  EXPECT_EQ(s[1].counter(), s[2].counter());
}

TEST(Prf, CounterAdvances) {
  auto s = ring_of_setups();
  EXPECT_NE(s[0].zero_share(), s[0].zero_share());
  auto t = ring_of_setups();
  t[0].draw(7, true, false);
  EXPECT_EQ(t[0].counter(), 7u);
}

TEST(Prf, NeighboursShareStreams) {
  auto s = ring_of_setups();
  const auto d0 = s[0].draw(16), d1 = s[1].draw(16);
  EXPECT_EQ(d0.with_next, d1.with_prev);
}

TEST(Wire, RingIsLittleEndian) {
  const std::vector<std::uint64_t> v{0x0102030405060708ull};
  const auto b = wire::encode_ring(v);
  ASSERT_EQ(b.size(), 8u);
  EXPECT_EQ(std::to_integer<int>(b[0]), 0x08);
  EXPECT_EQ(std::to_integer<int>(b[7]), 0x01);
  EXPECT_EQ(wire::decode_ring(b), v);
}

TEST(Wire, BitsAreLsbFirst) {
  const std::vector<std::uint64_t> bits{1, 0, 1, 1, 0, 0, 0, 0, 1};
  const auto b = wire::pack_bits(bits, 1);
  ASSERT_EQ(b.size(), 2u);
  EXPECT_EQ(std::to_integer<int>(b[0]), 0x0D);
  EXPECT_EQ(std::to_integer<int>(b[1]), 0x01);
  const std::vector<std::uint64_t> nibbles{0xA, 0x5, 0xF};
  const auto n = wire::pack_bits(nibbles, 4);
  EXPECT_EQ(std::to_integer<int>(n[0]), 0x5A);
  EXPECT_EQ(std::to_integer<int>(n[1]), 0x0F);
}

TEST(Wire, PackRoundTripAllWidths) {
  const auto words = test::random_ring(37, 8);
  for (unsigned w = 1; w <= 64; ++w) {
    const std::uint64_t mask = w == 64 ? ~0ull : (1ull << w) - 1;
    std::vector<std::uint64_t> in(words);
    for (auto& x : in) x &= mask;
    const auto packed = wire::pack_bits(in, w);
    ASSERT_EQ(packed.size(), wire::packed_size(in.size(), w));
    ASSERT_EQ(wire::unpack_bits(packed, in.size(), w), in) << "width " << w;
  }
}

TEST(MemoryChannel, OrderedExactlyOnce) {
  auto [a, b] = make_memory_channel_pair(0, 1, std::chrono::milliseconds(1000));
  for (std::uint8_t i = 0; i < 10; ++i) {
    const std::array<std::byte, 2> m{std::byte{i}, std::byte{static_cast<std::uint8_t>(i * 3)}};
    a->send(m);
  }
  for (std::uint8_t i = 0; i < 10; ++i) {
    std::array<std::byte, 2> m;
    b->recv(m);
    EXPECT_EQ(std::to_integer<int>(m[0]), i);
    EXPECT_EQ(std::to_integer<int>(m[1]), i * 3);
  }
}

TEST(MemoryChannel, SizeMismatchAndTimeout) {
  auto [a, b] = make_memory_channel_pair(0, 1, std::chrono::milliseconds(50));
  const std::array<std::byte, 4> m{};
  a->send(m);
  std::array<std::byte, 8> wrong;
  EXPECT_THROW(b->recv(wrong), ProtocolOrderError);
  try {
    b->recv(wrong);
    FAIL() << "expected a timeout";
  } catch (const ProtocolOrderError& e) {
    EXPECT_EQ(e.party(), 0);
  }
}

TEST(MemoryChannel, CloseUnblocksReceiver) {
  auto [a, b] = make_memory_channel_pair(0, 1, std::chrono::milliseconds(5000));
  std::thread t([&] { std::this_thread::sleep_for(std::chrono::milliseconds(20)); a->close(); });
  std::array<std::byte, 1> m;
  EXPECT_THROW(b->recv(m), ChannelError);
  t.join();
  EXPECT_THROW(a->send(m), ChannelError);
}

TEST(Simulator, OpenSeven) {
  const auto out = run3([](Party& p) { return open(p, input(p, {7})); });
  EXPECT_EQ(out, std::vector<RingElem>{7});
}

TEST(Simulator, MulThreeByFour) {
  const auto out = run3([](Party& p) { return open(p, mul(p, input(p, {3}), input(p, {4}))); });
  EXPECT_EQ(out, std::vector<RingElem>{12});
}

TEST(Simulator, OpenFixedPoint) {
  const FixedCodec c;
  const auto out = run3([&](Party& p) { return open(p, input(p, {c.encode(2.5), 42})); });
  EXPECT_EQ(c.decode(out[0]), 2.5);
  EXPECT_EQ(out[1], 42u);
}

TEST(Simulator, DeadlockBecomesProtocolOrderError) {
  RunOptions opts;
  opts.timeout = std::chrono::milliseconds(100);
  EXPECT_THROW(run_simulated(
                   [](Party& p) {
                     if (p.id().value() == 0) p.recv_ring(PartyId(1), 1);
                   },
                   opts),
               ProtocolOrderError);
}

TEST(Simulator, PartyFailurePropagates) {
  EXPECT_THROW(run_simulated([](Party& p) {
                 if (p.id().value() == 2) throw ShapeError("boom");
                 p.recv_ring(p.id().next(), 1);
               }),
               ShapeError);
}

TEST(Accounting, OpenCostsEightBytesPerElementAndOneRound) {
  for (std::size_t n : {1u, 10u, 1000u}) {
    const auto r = run_simulated([n](Party& p) {
      const auto x = input(p, Shape{n}, test::random_ring(n, n));
      const CommStats before = p.stats();
      open(p, x);
      return p.stats() - before;
    });
    for (const auto& s : r.outputs) {
      EXPECT_EQ(s.bytes_sent, 8 * n);
      EXPECT_EQ(s.rounds, 1u);
      EXPECT_EQ(s.messages, 1u);
    }
  }
}

TEST(Accounting, MulCostsEightBytesPerElementAndOneRound) {
  for (std::size_t n : {1u, 10u, 1000u}) {
    const auto r = run_simulated([n](Party& p) {
      const auto x = input(p, Shape{n}, test::random_ring(n, 1));
      const auto y = input(p, Shape{n}, test::random_ring(n, 2));
      const CommStats before = p.stats();
      mul(p, x, y);
      return p.stats() - before;
    });
    for (const auto& s : r.outputs) {
      EXPECT_EQ(s.bytes_sent, 8 * n);
      EXPECT_EQ(s.rounds, 1u);
    }
  }
}

TEST(Accounting, RoundsCountSendToReceiveAlternations) {
  const auto r = run_simulated([](Party& p) {
    const std::vector<RingElem> one{1};
    p.send_ring(p.id().next(), one);
    p.send_ring(p.id().next(), one);
    p.recv_ring(p.id().prev(), 1);
    p.recv_ring(p.id().prev(), 1);
    p.send_ring(p.id().next(), one);
    p.recv_ring(p.id().prev(), 1);
    return 0;
  });
  for (const auto& s : r.stats) {
    EXPECT_EQ(s.rounds, 2u);
    EXPECT_EQ(s.messages, 3u);
    EXPECT_EQ(s.bytes_sent, 24u);
  }
}

TEST(Accounting, SummaryTakesPerPartyMaximum) {
  std::array<CommStats, 3> s{CommStats{"x", 8, 1, 1}, CommStats{"x", 24, 2, 3}, CommStats{"x", 16, 5, 2}};
  const CommStats m = summarize(s);
  EXPECT_EQ(m.bytes_sent, 24u);
  EXPECT_EQ(m.messages, 5u);
  EXPECT_EQ(m.rounds, 3u);
}

TEST(Sharing, InputSharingIsReplicated) {
  const auto vals = test::random_ring(50, 3);
  const auto r = run_simulated([&](Party& p) {
    const auto x = input(p, vals);
    return std::vector<ArithShare>(x.data().begin(), x.data().end());
  });
  for (std::size_t i = 0; i < vals.size(); ++i) {
    EXPECT_EQ(reconstruct(r.outputs[0][i], r.outputs[1][i], r.outputs[2][i]), vals[i]);
  }
}

TEST(Sharing, ReshareProducesFreshSharesOfTheSameValue) {
  const auto vals = test::random_ring(20, 4);
  const auto r = run_simulated([&](Party& p) {
    const auto x = input(p, vals);
    std::vector<RingElem> z(x.size());
    // Additive 3-out-of-3 view: component lo only.
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = x[i].lo;
    return reshare(p, z);
  });
  for (std::size_t i = 0; i < vals.size(); ++i) {
    EXPECT_EQ(reconstruct(r.outputs[0][i], r.outputs[1][i], r.outputs[2][i]), vals[i]);
  }
}

}  // namespace
}  // namespace puma
