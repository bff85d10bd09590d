// Copyright 2026 The sagrnn-stream Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef SAGRNN_MODEL_CONFIG_H_
#define SAGRNN_MODEL_CONFIG_H_

#include <cstddef>
#include <string>

#include "sagrnn/chunker.h"

namespace sagrnn {

// Architecture hyperparameters. Field comments give the conventional symbol.
struct ModelConfig {
  std::size_t channels = 64;       // N, embedding channels
  std::size_t frame_size = 16;     // P, encoder frame in samples
  std::size_t chunk_size = 64;     // R, chunk/segment length in frames
  std::size_t num_blocks = 4;      // B
  std::size_t attention_dim = 64;  // D
  std::size_t hidden_size = 128;   // H, LSTM hidden units per direction
  std::size_t num_sources = 2;     // C
  bool causal = true;
  bool binaural = false;
  int sample_rate = 8000;

  void Validate() const;  // throws ConfigError

  FramingSpec framing() const { return FramingSpec::Make(frame_size, chunk_size); }
  std::size_t frame_hop() const { return frame_size / 2; }
  std::size_t input_channels() const { return binaural ? 2 : 1; }
  // One streaming segment: R frames of hop P/2.
  std::size_t segment_samples() const { return chunk_size * frame_hop(); }
  std::size_t chunk_hop_samples() const { return chunk_size / 2 * frame_hop(); }
  // Audio needed to encode one segment plus its half-segment future context,
  // i.e. 3R/2 complete frames.
  std::size_t window_samples() const {
    return (3 * chunk_size / 2 + 1) * frame_hop();
  }
  // Minimum input for an offline forward: one chunk of frames.
  std::size_t min_offline_samples() const {
    return (chunk_size + 1) * frame_hop();
  }
  double segment_ms() const {
    return 1000.0 * static_cast<double>(segment_samples()) / sample_rate;
  }

  bool operator==(const ModelConfig& other) const = default;
};

// Future samples a causal model must see beyond a chunk-hop boundary before
// every output sample preceding that boundary is final:
// (R/2 frames) * (P/2) + P/2 = R*P/4 + P/2. Throws ContractError for a
// non-causal config, whose lookahead is unbounded.
std::size_t DeclaredLookahead(const ModelConfig& config);

std::string Describe(const ModelConfig& config);

}  // namespace sagrnn

#endif  // SAGRNN_MODEL_CONFIG_H_
