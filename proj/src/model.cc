// Copyright 2026 The sagrnn-stream Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "sagrnn/model.h"

#include <algorithm>
#include <sstream>

#include "sagrnn/error.h"

namespace sagrnn {

void ModelConfig::Validate() const {
  auto positive = [](std::size_t v, const char* what) {
    if (v < 1) throw ConfigError(std::string(what) + " must be >= 1");
  };
  positive(channels, "channels (N)");
  positive(num_blocks, "num_blocks (B)");
  positive(attention_dim, "attention_dim (D)");
  positive(hidden_size, "hidden_size (H)");
  if (num_sources < 2) throw ConfigError("num_sources (C) must be >= 2");
  if (sample_rate <= 0) throw ConfigError("sample_rate must be positive");
  framing();  // P and R even
}

std::size_t DeclaredLookahead(const ModelConfig& config) {
  if (!config.causal) {
    throw ContractError("a non-causal model has no bounded lookahead");
  }
  return config.chunk_size * config.frame_size / 4 + config.frame_size / 2;
}

std::string Describe(const ModelConfig& c) {
  std::ostringstream os;
  os << "N=" << c.channels << " P=" << c.frame_size << " R=" << c.chunk_size
     << " B=" << c.num_blocks << " D=" << c.attention_dim
     << " H=" << c.hidden_size << " C=" << c.num_sources
     << (c.causal ? " causal" : " non-causal")
     << (c.binaural ? " binaural" : " monaural") << " sr=" << c.sample_rate;
  return os.str();
}

Separator::Separator(const ModelConfig& config, const WeightContainer& weights)
    : config_(config), params_(ModelParams::Bind(config, weights)) {}

std::vector<BlockState> Separator::FreshStates() const {
  return std::vector<BlockState>(config_.num_blocks);
}

Tensor Separator::Encode(std::span<const float> x, EncoderRole role) const {
  const Tensor* kernel = nullptr;
  switch (role) {
    case EncoderRole::kMonaural: kernel = params_.encoder.kernel; break;
    case EncoderRole::kReference: kernel = params_.encoder.ref_kernel; break;
    case EncoderRole::kNonReference: kernel = params_.encoder.nonref_kernel; break;
  }
  if (!kernel) {
    throw ContractError(config_.binaural
                            ? "binaural model: use a reference/non-reference encoder"
                            : "monaural model has a single encoder");
  }
  if (x.size() < config_.frame_size) {
    throw InsufficientInputError("encoder needs at least P=" +
                                 std::to_string(config_.frame_size) +
                                 " samples, got " + std::to_string(x.size()));
  }
  Tensor input({1, x.size()}, std::vector<float>(x.begin(), x.end()));
  Tensor frames = CausalConv1d(input, *kernel, config_.frame_hop());
  ReluInPlace(frames.span());
  return frames;
}

Tensor Separator::EncodeBinaural(std::span<const float> reference,
                                 std::span<const float> non_reference) const {
  if (!config_.binaural) throw ContractError("EncodeBinaural on a monaural model");
  if (reference.size() != non_reference.size()) {
    throw InputError("binaural channels differ in length: " +
                     std::to_string(reference.size()) + " vs " +
                     std::to_string(non_reference.size()));
  }
  const Tensor ref = Encode(reference, EncoderRole::kReference);
  const Tensor non = Encode(non_reference, EncoderRole::kNonReference);
  const std::size_t n = config_.channels, len = ref.dim(1);
  Tensor concat({len, 2 * n});
  for (std::size_t l = 0; l < len; ++l) {
    for (std::size_t c = 0; c < n; ++c) {
      concat.at(l, c) = ref.at(c, l);
      concat.at(l, n + c) = non.at(c, l);
    }
  }
  return Linear(concat, *params_.encoder.proj_w, params_.encoder.proj_b)
      .Transposed();
}

std::vector<Tensor> Separator::DecodeBlock(const ChunkTensor& x,
                                           std::size_t block) const {
  const DecoderParams& dec = params_.blocks.at(block).decoder;
  const std::size_t n = x.channels(), s_count = x.num_chunks(),
                    r = x.chunk_size(), c_count = config_.num_sources;
  const std::size_t positions = s_count * r;
  Tensor rows({positions, n});
  for (std::size_t c = 0; c < n; ++c) {
    const float* src = &x.data.at(c, 0, 0);
    for (std::size_t p = 0; p < positions; ++p) rows.at(p, c) = src[p];
  }
  PreluInPlace(rows.span(), (*dec.prelu)[0]);
  const Tensor out = Linear(rows, *dec.conv_w, dec.conv_b);  // [SR x CN]
  std::vector<Tensor> sources;
  sources.reserve(c_count);
  for (std::size_t src_idx = 0; src_idx < c_count; ++src_idx) {
    Tensor t({n, s_count, r});
    for (std::size_t c = 0; c < n; ++c) {
      float* dst = &t.at(c, 0, 0);
      for (std::size_t p = 0; p < positions; ++p) {
        dst[p] = out.at(p, src_idx * n + c);
      }
    }
    sources.push_back(std::move(t));
  }
  return sources;
}

Tensor Separator::SynthesisFrames(const Tensor& frames, std::size_t block) const {
  return Linear(frames.Transposed(), *params_.blocks.at(block).decoder.basis)
      .Transposed();
}

std::vector<std::vector<Tensor>> Separator::RunBlocks(
    const ChunkTensor& x, std::vector<BlockState>& states,
    const BlockRunOptions& options, bool all_blocks) const {
  if (states.size() != config_.num_blocks) {
    throw ContractError("RunBlocks: expected one state per block");
  }
  std::vector<std::vector<Tensor>> decoded;
  ChunkTensor h = x;
  for (std::size_t b = 0; b < config_.num_blocks; ++b) {
    const bool decode = all_blocks || b + 1 == config_.num_blocks;
    BlockOutput out = RunBlock(h, b, states[b], options, decode);
    if (decode) decoded.push_back(std::move(out.per_source_frames));
    h = std::move(out.embedding);
  }
  return decoded;
}

WindowOutput Separator::SeparateWindow(std::span<const float> reference,
                                       std::span<const float> non_reference,
                                       const ForwardOptions& options) const {
  const std::size_t hop = config_.frame_hop();
  const std::size_t len = reference.size();
  const FramingSpec spec = config_.framing();
  if (len % hop != 0 || len / hop < config_.chunk_size + 1 ||
      (len / hop - 1) % spec.chunk_hop != 0) {
    throw ContractError("SeparateWindow: length " + std::to_string(len) +
                        " is not on the chunk grid");
  }
  const Tensor frames = config_.binaural ? EncodeBinaural(reference, non_reference)
                                         : Encode(reference);
  const ChunkTensor chunks = FramesToChunks(frames, spec);
  std::vector<BlockState> states = FreshStates();
  BlockRunOptions run{options.attention_history, false};
  const auto decoded = RunBlocks(chunks, states, run, options.keep_block_outputs);

  auto synthesize = [&](const std::vector<Tensor>& sources, std::size_t block) {
    std::vector<Waveform> waves;
    for (const Tensor& src : sources) {
      ChunkTensor ct{src, spec, 0, 0};
      waves.push_back(
          OverlapAddFrames(SynthesisFrames(ChunksToFrames(ct), block), spec));
    }
    return waves;
  };
  WindowOutput out;
  out.sources = synthesize(decoded.back(), config_.num_blocks - 1);
  if (options.keep_block_outputs) {
    for (std::size_t b = 0; b < decoded.size(); ++b) {
      out.block_sources.push_back(synthesize(decoded[b], b));
    }
  }
  return out;
}

std::size_t Separator::PaddedLength(std::size_t samples) const {
  const std::size_t seg = config_.segment_samples();
  const std::size_t segments = std::max<std::size_t>(1, (samples + seg - 1) / seg);
  return (segments * config_.chunk_size + config_.chunk_size / 2 + 1) *
         config_.frame_hop();
}

SeparationResult Separator::ForwardOffline(const SignalBundle& input,
                                           const ForwardOptions& options) const {
  const std::size_t ears = config_.input_channels();
  if (input.channels.size() != ears) {
    throw InputError("model expects " + std::to_string(ears) +
                     " input channel(s), got " +
                     std::to_string(input.channels.size()));
  }
  if (input.sample_rate != config_.sample_rate) {
    throw InputError("sample rate " + std::to_string(input.sample_rate) +
                     " does not match model rate " +
                     std::to_string(config_.sample_rate));
  }
  const std::size_t len = input.length();
  for (const Waveform& ch : input.channels) {
    if (ch.size() != len) throw InputError("input channels differ in length");
  }
  if (len < config_.min_offline_samples()) {
    throw InsufficientInputError("input of " + std::to_string(len) +
                                 " samples is shorter than one chunk (" +
                                 std::to_string(config_.min_offline_samples()) +
                                 ")");
  }
  const std::size_t padded_len = PaddedLength(len);
  std::vector<Waveform> padded;
  for (const Waveform& ch : input.channels) {
    Waveform p(padded_len, 0.0f);
    std::copy(ch.begin(), ch.end(), p.begin());
    padded.push_back(std::move(p));
  }

  SeparationResult result;
  result.trimmed_length = padded_len - len;
  result.sources.assign(config_.num_sources, std::vector<Waveform>(ears));
  if (options.keep_block_outputs) {
    result.block_sources.assign(config_.num_blocks, result.sources);
  }
  for (std::size_t ear = 0; ear < ears; ++ear) {
    // Outputs always belong to the reference ear.
    std::span<const float> non_ref;
    if (config_.binaural) non_ref = padded[1 - ear];
    WindowOutput out = SeparateWindow(padded[ear], non_ref, options);
    for (std::size_t c = 0; c < config_.num_sources; ++c) {
      out.sources[c].resize(len);
      result.sources[c][ear] = std::move(out.sources[c]);
      for (std::size_t b = 0; b < out.block_sources.size(); ++b) {
        out.block_sources[b][c].resize(len);
        result.block_sources[b][c][ear] = std::move(out.block_sources[b][c]);
      }
    }
  }
  return result;
}

}  // namespace sagrnn
