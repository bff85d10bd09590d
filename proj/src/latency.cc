// Copyright 2026 The sagrnn-stream Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "sagrnn/latency.h"

#include <algorithm>
#include <chrono>
#include <random>

#include "sagrnn/error.h"

namespace sagrnn {
namespace {

constexpr double kMinDurationS = 10.0;
constexpr double kWarmupS = 1.0;

SignalBundle Noise(const ModelConfig& config, std::size_t samples,
                   std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> dist(-0.5f, 0.5f);
  SignalBundle b;
  b.sample_rate = config.sample_rate;
  b.channels.assign(config.input_channels(), Waveform(samples));
  for (Waveform& ch : b.channels) {
    for (float& v : ch) v = dist(rng);
  }
  return b;
}

void Process(const Separator& separator, const StreamConfig& stream,
             const SignalBundle& input) {
  if (stream.mode == StreamMode::kStateless) {
    RunStateless(separator, input, stream);
    return;
  }
  StatefulStream s(separator, stream);
  const std::size_t segment = separator.config().segment_samples();
  for (std::size_t pos = 0; pos < input.length(); pos += segment) {
    const std::size_t n = std::min(segment, input.length() - pos);
    std::vector<std::span<const float>> block;
    for (const Waveform& ch : input.channels) block.emplace_back(ch.data() + pos, n);
    s.Push(block);
  }
  s.Flush();
}

double Median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

LatencyReport MakeLatencyReport(double segment_ms, double rtf,
                                double future_context_ms) {
  LatencyReport r;
  r.segment_ms = segment_ms;
  r.rtf = rtf;
  r.future_context_ms = future_context_ms;
  r.total_latency_ms = segment_ms + rtf * segment_ms + future_context_ms;
  return r;
}

double FutureContextMs(const ModelConfig& config) {
  return 1000.0 * static_cast<double>(DeclaredLookahead(config)) / config.sample_rate;
}

LatencyReport MakeLatencyReport(const ModelConfig& config, double rtf) {
  return MakeLatencyReport(config.segment_ms(), rtf, FutureContextMs(config));
}

RtfMeasurement MeasureRtf(const Separator& separator, const StreamConfig& stream,
                          const RtfOptions& options) {
  if (!(options.duration_s >= kMinDurationS)) {
    throw ConfigError("RTF measurement needs at least 10 s of audio");
  }
  if (options.repetitions < 1) throw ConfigError("repetitions must be >= 1");
  const ModelConfig& mc = separator.config();
  const auto samples = static_cast<std::size_t>(options.duration_s * mc.sample_rate);
  const SignalBundle input = Noise(mc, samples, options.seed);

  const auto warm = static_cast<std::size_t>(kWarmupS * mc.sample_rate);
  Process(separator, stream, Noise(mc, std::max(warm, mc.window_samples()),
                                   options.seed + 1));

  RtfMeasurement m;
  m.audio_seconds = static_cast<double>(samples) / mc.sample_rate;
  for (std::size_t rep = 0; rep < options.repetitions; ++rep) {
    const auto t0 = std::chrono::steady_clock::now();
    Process(separator, stream, input);
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    m.rtf_per_rep.push_back(dt.count() / m.audio_seconds);
  }
  m.report = MakeLatencyReport(mc, Median(m.rtf_per_rep));
  return m;
}

}  // namespace sagrnn
