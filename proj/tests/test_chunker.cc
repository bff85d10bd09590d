// Copyright 2026 The sagrnn-stream Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <random>

#include "doctest.h"
#include "oracles.h"
#include "sagrnn/chunker.h"
#include "sagrnn/error.h"

using namespace sagrnn;

namespace {

Tensor RandomFrames(std::size_t n, std::size_t len, std::mt19937_64& rng) {
  return Tensor({n, len}, oracle::RandomVector(n * len, rng));
}

ChunkTensor Slice(const ChunkTensor& ct, std::size_t begin, std::size_t end) {
  const std::size_t n = ct.channels(), r = ct.chunk_size();
  ChunkTensor out{Tensor({n, end - begin, r}), ct.spec, 0, 0};
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t s = begin; s < end; ++s)
      for (std::size_t u = 0; u < r; ++u) out.data.at(c, s - begin, u) = ct.data.at(c, s, u);
  return out;
}

}  // namespace

TEST_CASE("framing spec validation") {
  CHECK_THROWS_AS(FramingSpec::Make(3, 4), ConfigError);
  CHECK_THROWS_AS(FramingSpec::Make(4, 5), ConfigError);
  CHECK_THROWS_AS(FramingSpec::Make(0, 4), ConfigError);
  FramingSpec bad = FramingSpec::Make(4, 4);
  bad.chunk_hop = 1;
  CHECK_THROWS_AS(bad.Validate(), ConfigError);
}

TEST_CASE("frames to chunks: L=8, R=4 gives chunks at 0, 2, 4") {
  const FramingSpec spec = FramingSpec::Make(2, 4);
  Tensor x({1, 8});
  for (std::size_t l = 0; l < 8; ++l) x.at(0, l) = static_cast<float>(l);
  const ChunkTensor ct = FramesToChunks(x, spec);
  REQUIRE(ct.num_chunks() == 3);
  for (std::size_t s = 0; s < 3; ++s) CHECK(ct.data.at(0, s, 0) == static_cast<float>(2 * s));
  CHECK(ct.trimmed_frames == 0);
}

TEST_CASE("frames to chunks: L=R is one chunk equal to the input") {
  std::mt19937_64 rng(1);
  const Tensor x = RandomFrames(3, 6, rng);
  const ChunkTensor ct = FramesToChunks(x, FramingSpec::Make(2, 6));
  CHECK(ct.num_chunks() == 1);
  CHECK(ct.data.values() == x.values());
  CHECK(ChunksToFrames(ct) == x);
}

TEST_CASE("frames to chunks: too short and partial hops") {
  const FramingSpec spec = FramingSpec::Make(2, 8);
  CHECK_THROWS_AS(FramesToChunks(Tensor({2, 7}), spec), InsufficientInputError);
  const ChunkTensor ct = FramesToChunks(Tensor({2, 11}), spec);
  CHECK(ct.num_chunks() == 1);
  CHECK(ct.trimmed_frames == 3);
}

TEST_CASE("chunk count formula against enumeration over a grid") {
  for (std::size_t r = 2; r <= 64; r += 2) {
    const FramingSpec spec = FramingSpec::Make(2, r);
    for (std::size_t k = 2; k < 12; ++k) {
      const std::size_t len = k * r / 2;
      const ChunkTensor ct = FramesToChunks(Tensor({1, len}), spec);
      CHECK(ct.num_chunks() == 2 * len / r - 1);
      CHECK(ct.num_chunks() == oracle::EnumeratedChunks(len, r));
    }
  }
}

TEST_CASE("every frame lies in one (edge) or two (interior) chunks") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t r = 2 * (1 + rng() % 8), len = r / 2 * (2 + rng() % 10);
    Tensor idx({1, len});
    for (std::size_t l = 0; l < len; ++l) idx.at(0, l) = static_cast<float>(l);
    const ChunkTensor ct = FramesToChunks(idx, FramingSpec::Make(2, r));
    std::vector<int> count(len, 0);
    for (std::size_t s = 0; s < ct.num_chunks(); ++s)
      for (std::size_t u = 0; u < r; ++u) ++count[static_cast<std::size_t>(ct.data.at(0, s, u))];
    for (std::size_t l = 0; l < len; ++l) {
      const bool edge = l < r / 2 || l >= len - r / 2;
      CHECK(count[l] == (edge ? 1 : 2));
    }
  }
}

TEST_CASE("chunk OLA round trip and counting-oracle agreement") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t r = 2 * (1 + rng() % 128), n = 1 + rng() % 4;
    const std::size_t len = r / 2 * (2 + rng() % 6);
    const Tensor x = RandomFrames(n, len, rng);
    const ChunkTensor ct = FramesToChunks(x, FramingSpec::Make(2, r));
    const Tensor back = ChunksToFrames(ct);
    CHECK(MaxAbsDiff(back.span(), x.span()) < 1e-6);
    // Arbitrary (non-consistent) chunk contents against the counting oracle.
    ChunkTensor noisy = ct;
    for (float& v : noisy.data.span()) v = oracle::RandomVector(1, rng)[0];
    const Tensor y = ChunksToFrames(noisy);
    for (std::size_t c = 0; c < n; ++c) {
      std::vector<std::vector<double>> windows;
      for (std::size_t s = 0; s < noisy.num_chunks(); ++s) {
        windows.emplace_back();
        for (std::size_t u = 0; u < r; ++u) windows.back().push_back(noisy.data.at(c, s, u));
      }
      const auto ref = oracle::CountingOla(windows, r);
      for (std::size_t l = 0; l < len; ++l) CHECK(std::abs(y.at(c, l) - ref[l]) < 1e-6);
    }
  }
}

TEST_CASE("chunk OLA: constant input stays constant") {
  const Tensor x({2, 12}, 0.7f);
  CHECK(ChunksToFrames(FramesToChunks(x, FramingSpec::Make(2, 4))) == x);
}

TEST_CASE("chunk OLA streaming: any split equals one shot") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t r = 2 * (1 + rng() % 8), n = 1 + rng() % 3;
    const std::size_t len = r / 2 * (3 + rng() % 10);
    const ChunkTensor ct = FramesToChunks(RandomFrames(n, len, rng), FramingSpec::Make(2, r));
    const Tensor whole = ChunksToFrames(ct);
    OlaCarry carry;
    std::vector<std::vector<float>> rows(n);
    std::size_t s = 0;
    while (s < ct.num_chunks()) {
      const std::size_t k = std::min<std::size_t>(ct.num_chunks() - s, 1 + rng() % 3);
      const ChunkOlaResult part = ChunksToFramesStreaming(Slice(ct, s, s + k), carry);
      CHECK(carry.length() <= r / 2);
      carry = part.carry;
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t l = 0; l < part.frames.dim(1); ++l) rows[c].push_back(part.frames.at(c, l));
      s += k;
    }
    const Tensor tail = *FinishChunkOla(carry);
    for (std::size_t c = 0; c < n; ++c) {
      for (std::size_t l = 0; l < tail.dim(1); ++l) rows[c].push_back(tail.at(c, l));
      for (std::size_t l = 0; l < len; ++l) CHECK(rows[c][l] == whole.at(c, l));
    }
  }
  CHECK_FALSE(FinishChunkOla(OlaCarry{}).has_value());
}

TEST_CASE("frame OLA: one frame emits half and carries half") {
  const FramingSpec spec = FramingSpec::Make(4, 2);
  const Tensor f({4, 1}, std::vector<float>{1, 2, 3, 4});
  const FrameOlaResult r = FramesToSamples(f, spec, OlaCarry{});
  CHECK(r.samples == Waveform{1, 2});
  CHECK(r.carry.pending->values() == std::vector<float>{3, 4});
  CHECK(r.carry.length() == 2);
}

TEST_CASE("frame OLA: streamed 2 + 3 frames equals one shot over 5") {
  std::mt19937_64 rng(5);
  const FramingSpec spec = FramingSpec::Make(6, 2);
  const Tensor all({6, 5}, oracle::RandomVector(30, rng));
  Tensor a({6, 2}), b({6, 3});
  for (std::size_t p = 0; p < 6; ++p) {
    for (std::size_t l = 0; l < 2; ++l) a.at(p, l) = all.at(p, l);
    for (std::size_t l = 0; l < 3; ++l) b.at(p, l) = all.at(p, l + 2);
  }
  const FrameOlaResult ra = FramesToSamples(a, spec, OlaCarry{});
  const FrameOlaResult rb = FramesToSamples(b, spec, ra.carry);
  Waveform streamed = ra.samples;
  streamed.insert(streamed.end(), rb.samples.begin(), rb.samples.end());
  const Waveform tail = FinishFrameOla(rb.carry);
  streamed.insert(streamed.end(), tail.begin(), tail.end());
  CHECK(streamed == OverlapAddFrames(all, spec));
  CHECK(streamed.size() == 18);
}

TEST_CASE("frame OLA: zeros in, zeros out") {
  const FramingSpec spec = FramingSpec::Make(4, 2);
  const FrameOlaResult r = FramesToSamples(Tensor({4, 3}), spec, OlaCarry{});
  for (float v : r.samples) CHECK(v == 0.0f);
  for (float v : r.carry.pending->values()) CHECK(v == 0.0f);
}

TEST_CASE("frame OLA: round trip and counting oracle on random shapes") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t p = 2 * (1 + rng() % 16), hop = p / 2, len = 1 + rng() % 30;
    const FramingSpec spec = FramingSpec::Make(p, 2);
    const Waveform w = oracle::RandomVector((len + 1) * hop, rng);
    Tensor f({p, len});
    for (std::size_t l = 0; l < len; ++l)
      for (std::size_t u = 0; u < p; ++u) f.at(u, l) = w[l * hop + u];
    CHECK(MaxAbsDiff(OverlapAddFrames(f, spec), w) < 1e-6);

    Tensor g({p, len}, oracle::RandomVector(p * len, rng));
    std::vector<std::vector<double>> windows(len);
    for (std::size_t l = 0; l < len; ++l)
      for (std::size_t u = 0; u < p; ++u) windows[l].push_back(g.at(u, l));
    const auto ref = oracle::CountingOla(windows, p);
    const Waveform y = OverlapAddFrames(g, spec);
    REQUIRE(y.size() == ref.size());
    for (std::size_t i = 0; i < y.size(); ++i) CHECK(std::abs(y[i] - ref[i]) < 1e-6);
  }
}

TEST_CASE("OLA carries reject mismatched shapes") {
  const FramingSpec spec = FramingSpec::Make(4, 4);
  OlaCarry wrong;
  wrong.pending = Tensor({3});
  CHECK_THROWS_AS(FramesToSamples(Tensor({4, 2}), spec, wrong), ConfigError);
  CHECK_THROWS_AS(FramesToSamples(Tensor({6, 2}), spec, OlaCarry{}), ConfigError);
  const ChunkTensor ct = FramesToChunks(Tensor({2, 8}), spec);
  OlaCarry carry;
  carry.pending = Tensor({3, 2});
  CHECK_THROWS_AS(ChunksToFramesStreaming(ct, carry), ConfigError);
}
