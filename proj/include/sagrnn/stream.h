// Copyright 2026 The sagrnn-stream Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

// Online execution of a causal separator.
//
// Stateful mode keeps a sample buffer per input channel. Whenever it holds one
// segment (R frames) plus the half-segment of future context, the window is
// encoded into 3R/2 frames = 2 chunks, run through the blocks with threaded
// inter-chunk RNN states, attention history and norm statistics, decoded and
// overlap-added against the carries. Exactly one segment per source is
// emitted, and the future half-segment stays in the buffer as the head of the
// next window.
//
// Stateless mode re-runs a fresh forward on [history | segment | future] for
// every segment and keeps only the segment.

#ifndef SAGRNN_STREAM_H_
#define SAGRNN_STREAM_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sagrnn/chunker.h"
#include "sagrnn/model.h"

namespace sagrnn {

enum class StreamMode { kStateless, kStateful };

struct StreamConfig {
  StreamMode mode = StreamMode::kStateful;
  // Stateless: audio prepended before each segment, rounded down to a whole
  // number of chunk hops.
  double history_ms = 640.0;
  // Stateful: past chunks kept for inter-chunk attention. nullopt = all.
  std::optional<std::size_t> attention_history_chunks = 20;

  void Validate() const;  // throws ConfigError
};

// Stateless history in samples for `model`.
std::size_t StatelessHistorySamples(const ModelConfig& model,
                                    const StreamConfig& stream);

// Per-ear mutable state. Each output ear runs its own copy of the network.
struct EarState {
  std::vector<BlockState> blocks;
  std::vector<OlaCarry> chunk_carry;  // one per source
  std::vector<OlaCarry> frame_carry;  // one per source
};

// One logical stream; not thread-safe. The Separator must outlive it.
class StatefulStream {
 public:
  StatefulStream(const Separator& separator, const StreamConfig& config = {});

  // Appends samples (one span per input channel, equal lengths) and processes
  // every complete window. Returns the audio emitted by this call,
  // [source][channel]; each waveform is a multiple of one segment long.
  SourceChannels Push(const std::vector<std::span<const float>>& channels);
  SourceChannels Push(std::span<const float> mono);

  // Zero-pads and processes until everything consumed has been emitted, then
  // trims to the consumed length. The stream is finished afterwards; Reset()
  // makes it reusable.
  SourceChannels Flush();
  void Reset();

  std::size_t buffered() const { return buffer_.empty() ? 0 : buffer_[0].size(); }
  std::uint64_t samples_consumed() const { return consumed_; }
  std::uint64_t samples_emitted() const { return emitted_; }
  std::uint64_t segments_processed() const { return segments_; }
  bool finished() const { return finished_; }
  const std::vector<EarState>& ears() const { return ears_; }
  const StreamConfig& config() const { return config_; }

 private:
  void Step(SourceChannels& out);
  SourceChannels EmptyOutput() const;

  const Separator* separator_;
  StreamConfig config_;
  std::vector<Waveform> buffer_;  // per input channel
  std::vector<EarState> ears_;
  std::uint64_t consumed_ = 0;
  std::uint64_t emitted_ = 0;
  std::uint64_t segments_ = 0;
  bool finished_ = false;
};

// Whole-utterance convenience: push everything at once, then flush.
SeparationResult RunStateful(const Separator& separator, const SignalBundle& input,
                             const StreamConfig& config = {});

// Sliding-window stateless separation. Each segment is computed from a fresh
// forward over at most history + segment + future samples.
SeparationResult RunStateless(const Separator& separator, const SignalBundle& input,
                              const StreamConfig& config = {});

// Dispatches on config.mode.
SeparationResult RunStream(const Separator& separator, const SignalBundle& input,
                           const StreamConfig& config);

}  // namespace sagrnn

#endif  // SAGRNN_STREAM_H_
