// Copyright 2026 The sagrnn-stream Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

// Self-attentive gated-RNN separator: encoder, B dual-path blocks (intra-chunk
// then inter-chunk), per-block decoders and monaural / binaural top levels.
//
// The same block code serves offline and streaming execution. Streaming
// threads a BlockState per block through successive calls; offline execution
// starts every block from a fresh state and processes all chunks at once.

#ifndef SAGRNN_MODEL_H_
#define SAGRNN_MODEL_H_

#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "sagrnn/chunker.h"
#include "sagrnn/model_config.h"
#include "sagrnn/model_params.h"
#include "sagrnn/nn.h"
#include "sagrnn/tensor.h"
#include "sagrnn/weights.h"

namespace sagrnn {

// Multichannel time-domain audio; all channels have equal length.
struct SignalBundle {
  int sample_rate = 8000;
  std::vector<Waveform> channels;

  std::size_t length() const { return channels.empty() ? 0 : channels[0].size(); }
};

// sources[c][e]: source c as heard at output channel e (one channel for
// monaural models, left/right for binaural).
using SourceChannels = std::vector<std::vector<Waveform>>;

struct SeparationResult {
  SourceChannels sources;
  // Zero-padding appended to reach whole segments, removed from the output.
  std::size_t trimmed_length = 0;
  // Per-block waveforms [block][source][channel]; filled only on request.
  std::vector<SourceChannels> block_sources;

  std::size_t length() const {
    return sources.empty() || sources[0].empty() ? 0 : sources[0][0].size();
  }
};

enum class Axis { kIntra, kInter };
enum class EncoderRole { kMonaural, kReference, kNonReference };

// Past inputs of one inter-chunk attention layer, oldest first; each entry is
// a chunk laid out [R x N].
struct AttentionHistory {
  std::deque<Tensor> chunks;
};

// One LSTM state per intra-chunk position; the inter-chunk RNN runs R
// independent sequences along the chunk axis.
using InterRnnState = std::vector<LstmState>;

// Running first and second moments for cumulative normalization.
struct CumulativeNormState {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::uint64_t count = 0;
};

struct BlockState {
  InterRnnState rnn;
  AttentionHistory history;
  CumulativeNormState norm;
};

struct BlockRunOptions {
  // Past chunks visible to each inter-chunk attention query. nullopt means
  // every earlier chunk.
  std::optional<std::size_t> attention_history;
  // Append this call's chunks to BlockState::history (streaming).
  bool retain_history = false;
};

struct BlockOutput {
  ChunkTensor embedding;                  // input to the next block
  std::vector<Tensor> per_source_frames;  // C x [N x S x R]; may be empty
};

struct ForwardOptions {
  std::optional<std::size_t> attention_history;
  bool keep_block_outputs = false;
};

struct WindowOutput {
  std::vector<Waveform> sources;                   // final block
  std::vector<std::vector<Waveform>> block_sources;  // [block][source]
};

// Immutable once constructed; concurrent calls are safe. The WeightContainer
// must outlive the Separator.
class Separator {
 public:
  Separator(const ModelConfig& config, const WeightContainer& weights);

  const ModelConfig& config() const { return config_; }
  const ModelParams& params() const { return params_; }

  // Strided conv (kernel P, hop P/2) + ReLU. x needs at least P samples.
  // Returns [N x L], L = floor((T - P) / (P/2)) + 1.
  Tensor Encode(std::span<const float> x,
                EncoderRole role = EncoderRole::kMonaural) const;
  // Reference and non-reference encodings concatenated along channels and
  // projected back to N per frame.
  Tensor EncodeBinaural(std::span<const float> reference,
                        std::span<const float> non_reference) const;

  // Self-attention over slices along `axis` with concat skip projection.
  // `history` is only legal on the inter axis of a causal model.
  ChunkTensor SelfAttention(const ChunkTensor& x, Axis axis, std::size_t block,
                            const AttentionHistory* history = nullptr,
                            std::optional<std::size_t> max_history = {}) const;

  // u = LSTM(x) along `axis`; y = x + scale * tanh(W_a u) * sigmoid(W_b u).
  // The inter axis of a causal model is forward-only and resumable from
  // `state`; everything else starts from zero and rejects a state.
  std::pair<ChunkTensor, InterRnnState> GatedRnn(
      const ChunkTensor& x, Axis axis, std::size_t block,
      const InterRnnState* state = nullptr) const;

  // Per-chunk layer norm (non-causal) or cumulative norm over all chunks seen
  // so far (causal, resumable via `state`).
  ChunkTensor Normalize(const ChunkTensor& x, std::size_t block,
                        CumulativeNormState* state = nullptr) const;

  // PReLU, 1x1 conv to C*N channels, split into C tensors [N x S x R].
  std::vector<Tensor> DecodeBlock(const ChunkTensor& x, std::size_t block) const;

  // attention(intra) -> rnn(intra) -> attention(inter) -> rnn(inter) -> norm,
  // then the block's decoder when `decode` is set.
  BlockOutput RunBlock(const ChunkTensor& x, std::size_t block,
                       BlockState& state, const BlockRunOptions& options,
                       bool decode) const;

  // All B blocks. Returns decoded sources for the final block only, or for
  // every block when `all_blocks` is set ([block][source]).
  std::vector<std::vector<Tensor>> RunBlocks(const ChunkTensor& x,
                                             std::vector<BlockState>& states,
                                             const BlockRunOptions& options,
                                             bool all_blocks = false) const;
  std::vector<BlockState> FreshStates() const;

  // Frame synthesis basis: [N x L] decoded frames -> [P x L] waveform frames.
  Tensor SynthesisFrames(const Tensor& frames, std::size_t block) const;

  // Separates a window whose length is (L + 1) * P/2 with L a multiple of R/2
  // and L >= R. Output per source has the same length. `non_reference` is
  // empty for monaural models.
  WindowOutput SeparateWindow(std::span<const float> reference,
                              std::span<const float> non_reference,
                              const ForwardOptions& options = {}) const;

  // Full offline pipeline. The input is zero-padded to whole segments plus a
  // half-segment of future context, processed in one pass and trimmed back to
  // the input length. Binaural models run twice with the ears swapped.
  SeparationResult ForwardOffline(const SignalBundle& input,
                                  const ForwardOptions& options = {}) const;

  // Length the offline path pads a T-sample input to.
  std::size_t PaddedLength(std::size_t samples) const;

 private:
  ModelConfig config_;
  ModelParams params_;
};

}  // namespace sagrnn

#endif  // SAGRNN_MODEL_H_
