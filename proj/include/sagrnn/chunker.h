// Copyright 2026 The sagrnn-stream Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

// Framing and overlap-add at the two levels used by the separator:
// samples <-> frames (size P, hop P/2) and frames <-> chunks (size R, hop R/2).
// Synthesis uses a rectangular window: regions covered by two windows are
// averaged, regions covered once (stream edges) pass through.

#ifndef SAGRNN_CHUNKER_H_
#define SAGRNN_CHUNKER_H_

#include <cstddef>
#include <optional>

#include "sagrnn/tensor.h"

namespace sagrnn {

struct FramingSpec {
  std::size_t frame_size = 0;  // P, samples
  std::size_t frame_hop = 0;   // P/2
  std::size_t chunk_size = 0;  // R, frames
  std::size_t chunk_hop = 0;   // R/2

  // Throws ConfigError unless P and R are even and both hops are halves.
  static FramingSpec Make(std::size_t frame_size, std::size_t chunk_size);
  void Validate() const;

  // Chunks obtained from `frames` frames: floor(2L/R) - 1.
  std::size_t NumChunks(std::size_t frames) const;
  // Frames covered by `chunks` chunks: (S + 1) * R/2.
  std::size_t NumFrames(std::size_t chunks) const;
};

// data is [N x S x R]; chunk s holds frames [s*R/2, s*R/2 + R) counted from
// frame_offset.
struct ChunkTensor {
  Tensor data;
  FramingSpec spec;
  std::size_t frame_offset = 0;
  // Frames dropped from the right because L was not a multiple of R/2.
  std::size_t trimmed_frames = 0;

  std::size_t channels() const { return data.dim(0); }
  std::size_t num_chunks() const { return data.dim(1); }
  std::size_t chunk_size() const { return data.dim(2); }
};

// Tail of the last window that still waits for its overlap partner. Empty
// until the first window has been seen, which is how the leading edge is
// recognised.
struct OlaCarry {
  std::optional<Tensor> pending;

  std::size_t length() const {
    return pending ? pending->dim(pending->rank() - 1) : 0;
  }
};

// frames: [N x L], L >= R. A partial final hop is trimmed (see
// ChunkTensor::trimmed_frames); L < R throws InsufficientInputError.
ChunkTensor FramesToChunks(const Tensor& frames, const FramingSpec& spec,
                           std::size_t frame_offset = 0);

// One-shot chunk overlap-add: [N x S x R] -> [N x (S+1)R/2].
Tensor ChunksToFrames(const ChunkTensor& chunks);

struct ChunkOlaResult {
  Tensor frames;  // [N x S*R/2], all fully overlapped
  OlaCarry carry;
};
// Incremental chunk overlap-add. Emits S*R/2 frames and carries the second
// half of the last chunk.
ChunkOlaResult ChunksToFramesStreaming(const ChunkTensor& chunks,
                                       const OlaCarry& carry);
// Trailing edge of a chunk stream, [N x R/2] or nullopt if nothing pending.
std::optional<Tensor> FinishChunkOla(const OlaCarry& carry);

struct FrameOlaResult {
  Waveform samples;  // L * P/2 samples
  OlaCarry carry;    // last P/2 samples of the final frame
};
// Incremental frame overlap-add; frames is [P x L] (one frame per column).
FrameOlaResult FramesToSamples(const Tensor& frames, const FramingSpec& spec,
                               const OlaCarry& carry);
Waveform FinishFrameOla(const OlaCarry& carry);
// One-shot frame overlap-add: (L + 1) * P/2 samples.
Waveform OverlapAddFrames(const Tensor& frames, const FramingSpec& spec);

}  // namespace sagrnn

#endif  // SAGRNN_CHUNKER_H_
