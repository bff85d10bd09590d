// Copyright 2026 The sagrnn-stream Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "sagrnn/mixer.h"

#include <cmath>
#include <random>

#include "sagrnn/error.h"

namespace sagrnn {
namespace {

void CheckSources(const std::vector<Waveform>& sources, std::span<const float> gains) {
  if (sources.empty()) throw InputError("mix needs at least one source");
  if (gains.size() != sources.size()) {
    throw InputError("expected one gain per source (" + std::to_string(sources.size()) +
                     "), got " + std::to_string(gains.size()));
  }
  for (float g : gains) {
    if (!std::isfinite(g) || g == 0.0f) throw InputError("gains must be finite and nonzero");
  }
  for (const Waveform& s : sources) {
    if (s.size() != sources[0].size()) throw InputError("sources differ in length");
  }
}

double Energy(const std::vector<Waveform>& channels, std::size_t len) {
  double e = 0.0;
  for (const Waveform& ch : channels) {
    for (std::size_t t = 0; t < len; ++t) e += static_cast<double>(ch[t]) * ch[t];
  }
  return e;
}

// Adds g * noise to the clean mix in place; fills result.noise and mixture.
void AddNoise(MixResult& result, const std::vector<Waveform>& noise, double snr_db) {
  result.noise_gain = NoiseGainForSnr(result.clean, noise, snr_db);
  const auto g = static_cast<float>(result.noise_gain);
  result.mixture = result.clean;
  for (std::size_t e = 0; e < result.clean.size(); ++e) {
    Waveform scaled(result.clean[e].size());
    for (std::size_t t = 0; t < scaled.size(); ++t) {
      scaled[t] = g * noise[e][t];
      result.mixture[e][t] += scaled[t];
    }
    result.noise.push_back(std::move(scaled));
  }
}

}  // namespace

std::vector<float> MixSpec::DefaultGains(std::size_t sources, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<float> gains;
  for (std::size_t j = 0; j < sources; ++j) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    gains.push_back(static_cast<float>(0.9 + 0.2 * u));
  }
  return gains;
}

Waveform MixAnechoic(const std::vector<Waveform>& sources,
                     std::span<const float> gains) {
  CheckSources(sources, gains);
  Waveform out(sources[0].size(), 0.0f);
  for (std::size_t j = 0; j < sources.size(); ++j) {
    for (std::size_t t = 0; t < out.size(); ++t) out[t] += gains[j] * sources[j][t];
  }
  return out;
}

double NoiseGainForSnr(const std::vector<Waveform>& clean,
                       const std::vector<Waveform>& noise, double snr_db) {
  if (!std::isfinite(snr_db)) throw InputError("snr_db must be finite");
  if (noise.size() != clean.size()) {
    throw InputError("expected " + std::to_string(clean.size()) +
                     " noise channel(s), got " + std::to_string(noise.size()));
  }
  const std::size_t len = clean.empty() ? 0 : clean[0].size();
  for (const Waveform& n : noise) {
    if (n.size() < len) {
      throw InputError("noise (" + std::to_string(n.size()) +
                       " samples) is shorter than the mix (" + std::to_string(len) + ")");
    }
  }
  const double noise_energy = Energy(noise, len);
  if (noise_energy == 0.0) throw DomainError("noise has zero energy");
  const double clean_energy = Energy(clean, len);
  return std::sqrt(clean_energy / (noise_energy * std::pow(10.0, snr_db / 10.0)));
}

MixResult MixNoisy(const std::vector<Waveform>& sources, std::span<const float> gains,
                   const Waveform& noise, double snr_db) {
  MixResult result;
  result.clean.push_back(MixAnechoic(sources, gains));
  for (std::size_t j = 0; j < sources.size(); ++j) {
    Waveform img(sources[j].size());
    for (std::size_t t = 0; t < img.size(); ++t) img[t] = gains[j] * sources[j][t];
    result.images.push_back({std::move(img)});
  }
  AddNoise(result, {noise}, snr_db);
  return result;
}

Waveform ConvolveTruncated(std::span<const float> x, std::span<const float> h) {
  if (h.empty()) throw InputError("impulse response is empty");
  Waveform y(x.size());
  for (std::size_t t = 0; t < x.size(); ++t) {
    double acc = 0.0;
    const std::size_t kmax = std::min(h.size(), t + 1);
    for (std::size_t k = 0; k < kmax; ++k) acc += static_cast<double>(h[k]) * x[t - k];
    y[t] = static_cast<float>(acc);
  }
  return y;
}

MixResult MixReverberant(const std::vector<Waveform>& sources,
                         std::span<const float> gains,
                         const std::vector<std::vector<Waveform>>& impulse_responses,
                         const std::vector<Waveform>& noise,
                         std::optional<double> snr_db) {
  CheckSources(sources, gains);
  if (impulse_responses.size() != sources.size()) {
    throw InputError("expected impulse responses for each of " +
                     std::to_string(sources.size()) + " sources");
  }
  const std::size_t channels = impulse_responses[0].size();
  if (channels == 0) throw InputError("impulse responses need at least one channel");
  for (const auto& irs : impulse_responses) {
    if (irs.size() != channels) {
      throw InputError("every source needs the same number of impulse-response channels");
    }
  }
  const std::size_t len = sources[0].size();
  MixResult result;
  result.clean.assign(channels, Waveform(len, 0.0f));
  for (std::size_t j = 0; j < sources.size(); ++j) {
    std::vector<Waveform> img;
    for (std::size_t e = 0; e < channels; ++e) {
      Waveform y = ConvolveTruncated(sources[j], impulse_responses[j][e]);
      for (std::size_t t = 0; t < len; ++t) {
        y[t] *= gains[j];
        result.clean[e][t] += y[t];
      }
      img.push_back(std::move(y));
    }
    result.images.push_back(std::move(img));
  }
  if (snr_db) {
    AddNoise(result, noise, *snr_db);
  } else {
    if (!noise.empty()) throw InputError("noise given without a target SNR");
    result.mixture = result.clean;
  }
  return result;
}

}  // namespace sagrnn
