// Copyright 2026 The sagrnn-stream Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "sagrnn/stream.h"

#include <algorithm>
#include <cmath>

#include "sagrnn/error.h"

namespace sagrnn {
namespace {

void CheckInput(const ModelConfig& config, const SignalBundle& input) {
  if (input.channels.size() != config.input_channels()) {
    throw InputError("model expects " + std::to_string(config.input_channels()) +
                     " input channel(s), got " +
                     std::to_string(input.channels.size()));
  }
  if (input.sample_rate != config.sample_rate) {
    throw InputError("sample rate " + std::to_string(input.sample_rate) +
                     " does not match model rate " +
                     std::to_string(config.sample_rate));
  }
  for (const Waveform& ch : input.channels) {
    if (ch.size() != input.length()) throw InputError("input channels differ in length");
  }
}

void RequireCausal(const ModelConfig& config) {
  if (!config.causal) {
    throw ContractError("streaming requires a causal model; " + Describe(config));
  }
}

std::vector<std::span<const float>> Spans(const SignalBundle& input) {
  return {input.channels.begin(), input.channels.end()};
}

void Append(SourceChannels& dst, const SourceChannels& src) {
  for (std::size_t c = 0; c < dst.size(); ++c) {
    for (std::size_t e = 0; e < dst[c].size(); ++e) {
      dst[c][e].insert(dst[c][e].end(), src[c][e].begin(), src[c][e].end());
    }
  }
}

}  // namespace

void StreamConfig::Validate() const {
  if (!std::isfinite(history_ms) || history_ms < 0.0) {
    throw ConfigError("history_ms must be finite and >= 0");
  }
}

std::size_t StatelessHistorySamples(const ModelConfig& model,
                                    const StreamConfig& stream) {
  stream.Validate();
  const double samples = stream.history_ms * model.sample_rate / 1000.0;
  const auto whole = static_cast<std::size_t>(std::floor(samples + 1e-9));
  const std::size_t hop = model.chunk_hop_samples();
  return whole / hop * hop;
}

StatefulStream::StatefulStream(const Separator& separator, const StreamConfig& config)
    : separator_(&separator), config_(config) {
  RequireCausal(separator.config());
  config_.Validate();
  Reset();
}

void StatefulStream::Reset() {
  const ModelConfig& mc = separator_->config();
  buffer_.assign(mc.input_channels(), {});
  EarState fresh{separator_->FreshStates(),
                 std::vector<OlaCarry>(mc.num_sources),
                 std::vector<OlaCarry>(mc.num_sources)};
  ears_.assign(mc.input_channels(), fresh);
  consumed_ = emitted_ = segments_ = 0;
  finished_ = false;
}

SourceChannels StatefulStream::EmptyOutput() const {
  const ModelConfig& mc = separator_->config();
  return SourceChannels(mc.num_sources, std::vector<Waveform>(mc.input_channels()));
}

SourceChannels StatefulStream::Push(std::span<const float> mono) {
  return Push(std::vector<std::span<const float>>{mono});
}

SourceChannels StatefulStream::Push(
    const std::vector<std::span<const float>>& channels) {
  if (finished_) throw ContractError("Push after Flush; call Reset first");
  const ModelConfig& mc = separator_->config();
  if (channels.size() != mc.input_channels()) {
    throw InputError("stream expects " + std::to_string(mc.input_channels()) +
                     " channel(s), got " + std::to_string(channels.size()));
  }
  for (const auto& ch : channels) {
    if (ch.size() != channels[0].size()) {
      throw InputError("pushed channels differ in length");
    }
  }
  for (std::size_t e = 0; e < channels.size(); ++e) {
    buffer_[e].insert(buffer_[e].end(), channels[e].begin(), channels[e].end());
  }
  consumed_ += channels[0].size();

  SourceChannels out = EmptyOutput();
  while (buffered() >= mc.window_samples()) Step(out);
  return out;
}

void StatefulStream::Step(SourceChannels& out) {
  const Separator& sep = *separator_;
  const ModelConfig& mc = sep.config();
  const std::size_t window = mc.window_samples(), segment = mc.segment_samples();
  const FramingSpec spec = mc.framing();
  const BlockRunOptions run{config_.attention_history_chunks, true};

  for (std::size_t e = 0; e < ears_.size(); ++e) {
    EarState& ear = ears_[e];
    std::span<const float> ref(buffer_[e].data(), window);
    const Tensor frames =
        mc.binaural ? sep.EncodeBinaural(ref, {buffer_[1 - e].data(), window})
                    : sep.Encode(ref);
    const ChunkTensor chunks =
        FramesToChunks(frames, spec, segments_ * mc.chunk_size);
    const auto decoded = sep.RunBlocks(chunks, ear.blocks, run);
    for (std::size_t c = 0; c < mc.num_sources; ++c) {
      const ChunkTensor source{decoded.back()[c], spec, chunks.frame_offset, 0};
      ChunkOlaResult cf = ChunksToFramesStreaming(source, ear.chunk_carry[c]);
      ear.chunk_carry[c] = std::move(cf.carry);
      const Tensor wave_frames = sep.SynthesisFrames(cf.frames, mc.num_blocks - 1);
      FrameOlaResult fs = FramesToSamples(wave_frames, spec, ear.frame_carry[c]);
      ear.frame_carry[c] = std::move(fs.carry);
      out[c][e].insert(out[c][e].end(), fs.samples.begin(), fs.samples.end());
    }
  }
  for (Waveform& buf : buffer_) {
    buf.erase(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(segment));
  }
  emitted_ += segment;
  ++segments_;
}

SourceChannels StatefulStream::Flush() {
  SourceChannels out = EmptyOutput();
  if (finished_) return out;
  const std::size_t window = separator_->config().window_samples();
  const std::uint64_t emitted_before = emitted_;
  while (emitted_ < consumed_) {
    for (Waveform& buf : buffer_) buf.resize(window, 0.0f);
    Step(out);
  }
  const std::size_t keep = consumed_ - emitted_before;
  for (auto& source : out) {
    for (Waveform& w : source) w.resize(keep);
  }
  emitted_ = consumed_;
  finished_ = true;
  return out;
}

SeparationResult RunStateful(const Separator& separator, const SignalBundle& input,
                             const StreamConfig& config) {
  CheckInput(separator.config(), input);
  StatefulStream stream(separator, config);
  SeparationResult result;
  result.sources = stream.Push(Spans(input));
  Append(result.sources, stream.Flush());
  result.trimmed_length =
      stream.segments_processed() * separator.config().segment_samples() -
      input.length();
  return result;
}

SeparationResult RunStateless(const Separator& separator, const SignalBundle& input,
                              const StreamConfig& config) {
  const ModelConfig& mc = separator.config();
  RequireCausal(mc);
  CheckInput(mc, input);
  const std::size_t len = input.length();
  const std::size_t ears = mc.input_channels();
  SeparationResult result;
  result.sources.assign(mc.num_sources, std::vector<Waveform>(ears));
  if (len == 0) return result;

  const std::size_t segment = mc.segment_samples(), window = mc.window_samples();
  const std::size_t history = StatelessHistorySamples(mc, config);
  const std::size_t segments = (len + segment - 1) / segment;
  const std::size_t padded_len = separator.PaddedLength(len);
  std::vector<Waveform> padded;
  for (const Waveform& ch : input.channels) {
    Waveform p(padded_len, 0.0f);
    std::copy(ch.begin(), ch.end(), p.begin());
    padded.push_back(std::move(p));
  }

  for (std::size_t i = 0; i < segments; ++i) {
    const std::size_t seg_begin = i * segment;
    const std::size_t start = seg_begin > history ? seg_begin - history : 0;
    const std::size_t end = seg_begin + window;
    for (std::size_t e = 0; e < ears; ++e) {
      std::span<const float> ref(padded[e].data() + start, end - start);
      std::span<const float> non_ref;
      if (mc.binaural) non_ref = {padded[1 - e].data() + start, end - start};
      const WindowOutput out = separator.SeparateWindow(ref, non_ref);
      for (std::size_t c = 0; c < mc.num_sources; ++c) {
        const auto first = out.sources[c].begin() +
                           static_cast<std::ptrdiff_t>(seg_begin - start);
        Waveform& dst = result.sources[c][e];
        dst.insert(dst.end(), first, first + static_cast<std::ptrdiff_t>(segment));
      }
    }
  }
  for (auto& source : result.sources) {
    for (Waveform& w : source) w.resize(len);
  }
  result.trimmed_length = segments * segment - len;
  return result;
}

SeparationResult RunStream(const Separator& separator, const SignalBundle& input,
                           const StreamConfig& config) {
  return config.mode == StreamMode::kStateful
             ? RunStateful(separator, input, config)
             : RunStateless(separator, input, config);
}

}  // namespace sagrnn
