// Copyright 2026 The sagrnn-stream Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

// Separation quality metrics, computed in double precision over the whole
// utterance. Every value is clamped to [-80, 80] dB.

#ifndef SAGRNN_METRICS_H_
#define SAGRNN_METRICS_H_

#include <span>
#include <vector>

#include "sagrnn/tensor.h"

namespace sagrnn {

inline constexpr double kMetricClampDb = 80.0;
inline constexpr std::size_t kMaxPitSources = 6;

enum class Metric { kSiSnr, kSnr };

// Scale-invariant SNR. The estimate is not mean-removed. Zero reference
// throws DomainError; zero estimate gives -80 dB.
double SiSnr(std::span<const float> reference, std::span<const float> estimate);
// 10 log10(|s|^2 / |s - s_hat|^2).
double Snr(std::span<const float> reference, std::span<const float> estimate);
// Double-precision inputs, for signals that must not be rounded to float
// (e.g. an estimate scaled by a non-representable factor).
double SiSnr(std::span<const double> reference, std::span<const double> estimate);
double Snr(std::span<const double> reference, std::span<const double> estimate);
double Score(Metric metric, std::span<const float> reference,
             std::span<const float> estimate);

struct PermutationAssignment {
  // perm[j] is the estimate index assigned to reference j.
  std::vector<std::size_t> perm;
  std::vector<double> scores;  // per reference under perm
  double mean_score = 0.0;
};

// Exhaustive search over all C! assignments; ties go to the lexicographically
// smallest permutation. C > 6 throws ConfigError.
PermutationAssignment PitAssign(const std::vector<Waveform>& references,
                                const std::vector<Waveform>& estimates,
                                Metric metric);

struct Improvement {
  std::vector<double> per_source;  // metric(ref, est) - metric(ref, mixture)
  double mean = 0.0;
  PermutationAssignment assignment;
};

Improvement ImprovementOverMixture(std::span<const float> mixture,
                                   const std::vector<Waveform>& references,
                                   const std::vector<Waveform>& estimates,
                                   Metric metric);

// Concatenates the channels of each source ([source][channel] -> [source]),
// so binaural estimates are scored jointly over both ears.
std::vector<Waveform> ConcatChannels(const std::vector<std::vector<Waveform>>& sources);

}  // namespace sagrnn

#endif  // SAGRNN_METRICS_H_
