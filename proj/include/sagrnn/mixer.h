// Copyright 2026 The sagrnn-stream Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

// Evaluation mixtures from caller-supplied sources, noise and impulse
// responses: x = sum_j a_j (s_j * h_j) + n. The noise is scaled so that the
// summed clean mixture (all channels together) sits at the requested SNR.

#ifndef SAGRNN_MIXER_H_
#define SAGRNN_MIXER_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sagrnn/tensor.h"

namespace sagrnn {

struct MixSpec {
  std::vector<float> gains;     // one per source, finite and nonzero
  std::optional<double> snr_db; // absent: no noise
  // [source][output channel]; empty for the anechoic/noisy conditions.
  std::vector<std::vector<Waveform>> impulse_responses;

  // Uniform gains in [0.9, 1.1] from `seed`.
  static std::vector<float> DefaultGains(std::size_t sources, std::uint64_t seed);
};

struct MixResult {
  std::vector<Waveform> mixture;  // per output channel
  std::vector<Waveform> clean;    // summed clean mix per channel
  std::vector<Waveform> noise;    // scaled noise per channel (empty if none)
  // Reverberant but unmixed sources [source][channel], i.e. a_j (s_j * h_j).
  std::vector<std::vector<Waveform>> images;
  double noise_gain = 0.0;
};

// Exact float weighted sum; sources must have equal lengths.
Waveform MixAnechoic(const std::vector<Waveform>& sources,
                     std::span<const float> gains);

// Noise rescaled to `snr_db` against the clean mix and added. Noise must be at
// least as long as the mix (extra samples are ignored); zero-energy noise
// throws DomainError.
MixResult MixNoisy(const std::vector<Waveform>& sources,
                   std::span<const float> gains, const Waveform& noise,
                   double snr_db);

// Direct-form FIR per source and output channel, truncated to the source
// length, then as MixNoisy. `noise` holds one waveform per output channel, or
// is empty for a noiseless mix.
MixResult MixReverberant(const std::vector<Waveform>& sources,
                         std::span<const float> gains,
                         const std::vector<std::vector<Waveform>>& impulse_responses,
                         const std::vector<Waveform>& noise,
                         std::optional<double> snr_db);

// y[t] = sum_k h[k] x[t - k] for t < len(x).
Waveform ConvolveTruncated(std::span<const float> x, std::span<const float> h);

// Scale factor g with 10 log10(|clean|^2 / |g n|^2) == snr_db, energies summed
// across channels.
double NoiseGainForSnr(const std::vector<Waveform>& clean,
                       const std::vector<Waveform>& noise, double snr_db);

}  // namespace sagrnn

#endif  // SAGRNN_MIXER_H_
