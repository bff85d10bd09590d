// Copyright 2026 The sagrnn-stream Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "sagrnn/chunker.h"

#include <algorithm>

#include "sagrnn/error.h"

namespace sagrnn {

FramingSpec FramingSpec::Make(std::size_t frame_size, std::size_t chunk_size) {
  FramingSpec spec{frame_size, frame_size / 2, chunk_size, chunk_size / 2};
  spec.Validate();
  return spec;
}

void FramingSpec::Validate() const {
  if (frame_size < 2 || frame_size % 2 != 0) {
    throw ConfigError("frame size P must be even and >= 2, got " +
                      std::to_string(frame_size));
  }
  if (chunk_size < 2 || chunk_size % 2 != 0) {
    throw ConfigError("chunk size R must be even and >= 2, got " +
                      std::to_string(chunk_size));
  }
  if (frame_hop * 2 != frame_size || chunk_hop * 2 != chunk_size) {
    throw ConfigError("frame and chunk hops must be exactly half their sizes");
  }
}

std::size_t FramingSpec::NumChunks(std::size_t frames) const {
  if (frames < chunk_size) return 0;
  return 2 * frames / chunk_size - 1;
}

std::size_t FramingSpec::NumFrames(std::size_t chunks) const {
  return (chunks + 1) * chunk_hop;
}

ChunkTensor FramesToChunks(const Tensor& frames, const FramingSpec& spec,
                           std::size_t frame_offset) {
  spec.Validate();
  if (frames.rank() != 2) throw ConfigError("FramesToChunks: frames must be [N x L]");
  const std::size_t n = frames.dim(0), len = frames.dim(1);
  const std::size_t r = spec.chunk_size, hop = spec.chunk_hop;
  if (len < r) {
    throw InsufficientInputError("FramesToChunks: " + std::to_string(len) +
                                 " frames, a chunk needs " + std::to_string(r));
  }
  const std::size_t s_count = spec.NumChunks(len);
  ChunkTensor out{Tensor::Zeros({n, s_count, r}), spec, frame_offset,
                  len - spec.NumFrames(s_count)};
  for (std::size_t c = 0; c < n; ++c) {
    const float* src = frames.data() + c * len;
    for (std::size_t s = 0; s < s_count; ++s) {
      std::copy(src + s * hop, src + s * hop + r, &out.data.at(c, s, 0));
    }
  }
  return out;
}

ChunkOlaResult ChunksToFramesStreaming(const ChunkTensor& chunks,
                                       const OlaCarry& carry) {
  const std::size_t n = chunks.channels(), s_count = chunks.num_chunks();
  const std::size_t r = chunks.chunk_size(), hop = r / 2;
  if (carry.pending && carry.pending->shape() != Shape{n, hop}) {
    throw ConfigError("chunk OLA carry has shape " +
                      ShapeString(carry.pending->shape()));
  }
  ChunkOlaResult res{Tensor::Zeros({n, s_count * hop}), {}};
  const std::size_t out_len = s_count * hop;
  for (std::size_t c = 0; c < n; ++c) {
    float* dst = res.frames.data() + c * out_len;
    for (std::size_t s = 0; s < s_count; ++s) {
      const float* cur = &chunks.data.at(c, s, 0);
      const float* prev = nullptr;
      if (s > 0) {
        prev = &chunks.data.at(c, s - 1, hop);
      } else if (carry.pending) {
        prev = carry.pending->data() + c * hop;
      }
      float* d = dst + s * hop;
      for (std::size_t u = 0; u < hop; ++u) {
        d[u] = prev ? (prev[u] + cur[u]) * 0.5f : cur[u];
      }
    }
  }
  Tensor tail({n, hop});
  for (std::size_t c = 0; c < n; ++c) {
    const float* src = &chunks.data.at(c, s_count - 1, hop);
    std::copy(src, src + hop, tail.data() + c * hop);
  }
  res.carry.pending = std::move(tail);
  return res;
}

std::optional<Tensor> FinishChunkOla(const OlaCarry& carry) {
  return carry.pending;
}

Tensor ChunksToFrames(const ChunkTensor& chunks) {
  ChunkOlaResult head = ChunksToFramesStreaming(chunks, OlaCarry{});
  const Tensor& tail = *head.carry.pending;
  const std::size_t n = chunks.channels(), a = head.frames.dim(1),
                    b = tail.dim(1);
  Tensor out({n, a + b});
  for (std::size_t c = 0; c < n; ++c) {
    std::copy(head.frames.data() + c * a, head.frames.data() + (c + 1) * a,
              out.data() + c * (a + b));
    std::copy(tail.data() + c * b, tail.data() + (c + 1) * b,
              out.data() + c * (a + b) + a);
  }
  return out;
}

FrameOlaResult FramesToSamples(const Tensor& frames, const FramingSpec& spec,
                               const OlaCarry& carry) {
  if (frames.rank() != 2 || frames.dim(0) != spec.frame_size) {
    throw ConfigError("FramesToSamples: frames must be [P x L], got " +
                      ShapeString(frames.shape()));
  }
  const std::size_t hop = spec.frame_hop, len = frames.dim(1);
  if (carry.pending && carry.pending->size() != hop) {
    throw ConfigError("frame OLA carry has the wrong length");
  }
  FrameOlaResult res;
  res.samples.resize(len * hop);
  // frames.at(p, l): sample p of frame l.
  for (std::size_t l = 0; l < len; ++l) {
    float* d = res.samples.data() + l * hop;
    for (std::size_t u = 0; u < hop; ++u) {
      const float cur = frames.at(u, l);
      if (l > 0) {
        d[u] = (frames.at(hop + u, l - 1) + cur) * 0.5f;
      } else if (carry.pending) {
        d[u] = ((*carry.pending)[u] + cur) * 0.5f;
      } else {
        d[u] = cur;
      }
    }
  }
  Tensor tail({hop});
  for (std::size_t u = 0; u < hop; ++u) tail[u] = frames.at(hop + u, len - 1);
  res.carry.pending = std::move(tail);
  return res;
}

Waveform FinishFrameOla(const OlaCarry& carry) {
  if (!carry.pending) return {};
  return carry.pending->values();
}

Waveform OverlapAddFrames(const Tensor& frames, const FramingSpec& spec) {
  FrameOlaResult head = FramesToSamples(frames, spec, OlaCarry{});
  Waveform tail = FinishFrameOla(head.carry);
  head.samples.insert(head.samples.end(), tail.begin(), tail.end());
  return head.samples;
}

}  // namespace sagrnn
