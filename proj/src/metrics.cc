// Copyright 2026 The sagrnn-stream Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "sagrnn/metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sagrnn/error.h"

namespace sagrnn {
namespace {

template <typename T>
void CheckPair(std::span<const T> reference, std::span<const T> estimate) {
  if (reference.size() != estimate.size()) {
    throw InputError("reference and estimate lengths differ: " +
                     std::to_string(reference.size()) + " vs " +
                     std::to_string(estimate.size()));
  }
}

template <typename T>
double Energy(std::span<const T> x) {
  double e = 0.0;
  for (T v : x) e += static_cast<double>(v) * v;
  return e;
}

// 10 log10(signal / noise) clamped; signal == 0 is -inf (this also covers a
// zero estimate, where both terms vanish), otherwise noise == 0 is +inf.
double RatioDb(double signal, double noise) {
  if (signal == 0.0) return -kMetricClampDb;
  if (noise == 0.0) return kMetricClampDb;
  return std::clamp(10.0 * std::log10(signal / noise), -kMetricClampDb,
                    kMetricClampDb);
}

template <typename T>
double SiSnrImpl(std::span<const T> reference, std::span<const T> estimate) {
  CheckPair(reference, estimate);
  const double ref_energy = Energy(reference);
  if (ref_energy == 0.0) throw DomainError("SI-SNR of an all-zero reference");
  double dot = 0.0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    dot += static_cast<double>(reference[i]) * estimate[i];
  }
  const double alpha = dot / ref_energy;
  double target = 0.0, residual = 0.0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const double t = alpha * reference[i];
    const double e = estimate[i] - t;
    target += t * t;
    residual += e * e;
  }
  return RatioDb(target, residual);
}

template <typename T>
double SnrImpl(std::span<const T> reference, std::span<const T> estimate) {
  CheckPair(reference, estimate);
  const double ref_energy = Energy(reference);
  if (ref_energy == 0.0) throw DomainError("SNR of an all-zero reference");
  double residual = 0.0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const double e = static_cast<double>(reference[i]) - estimate[i];
    residual += e * e;
  }
  return RatioDb(ref_energy, residual);
}

}  // namespace

double SiSnr(std::span<const float> reference, std::span<const float> estimate) {
  return SiSnrImpl(reference, estimate);
}
double SiSnr(std::span<const double> reference, std::span<const double> estimate) {
  return SiSnrImpl(reference, estimate);
}
double Snr(std::span<const float> reference, std::span<const float> estimate) {
  return SnrImpl(reference, estimate);
}
double Snr(std::span<const double> reference, std::span<const double> estimate) {
  return SnrImpl(reference, estimate);
}

double Score(Metric metric, std::span<const float> reference,
             std::span<const float> estimate) {
  return metric == Metric::kSiSnr ? SiSnr(reference, estimate)
                                  : Snr(reference, estimate);
}

PermutationAssignment PitAssign(const std::vector<Waveform>& references,
                                const std::vector<Waveform>& estimates,
                                Metric metric) {
  const std::size_t c = references.size();
  if (c == 0 || estimates.size() != c) {
    throw InputError("PIT needs the same nonzero number of references and estimates");
  }
  if (c > kMaxPitSources) {
    throw ConfigError("PIT supports at most 6 sources, got " + std::to_string(c));
  }
  // Pairwise score table, reused by every permutation.
  std::vector<std::vector<double>> table(c, std::vector<double>(c));
  for (std::size_t j = 0; j < c; ++j) {
    for (std::size_t k = 0; k < c; ++k) {
      table[j][k] = Score(metric, references[j], estimates[k]);
    }
  }
  std::vector<std::size_t> perm(c);
  std::iota(perm.begin(), perm.end(), 0);
  PermutationAssignment best;
  bool have_best = false;
  do {
    double sum = 0.0;
    for (std::size_t j = 0; j < c; ++j) sum += table[j][perm[j]];
    const double mean = sum / static_cast<double>(c);
    if (!have_best || mean > best.mean_score) {
      best.perm = perm;
      best.mean_score = mean;
      have_best = true;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  for (std::size_t j = 0; j < c; ++j) best.scores.push_back(table[j][best.perm[j]]);
  return best;
}

Improvement ImprovementOverMixture(std::span<const float> mixture,
                                   const std::vector<Waveform>& references,
                                   const std::vector<Waveform>& estimates,
                                   Metric metric) {
  Improvement out;
  out.assignment = PitAssign(references, estimates, metric);
  double sum = 0.0;
  for (std::size_t j = 0; j < references.size(); ++j) {
    const double delta =
        out.assignment.scores[j] - Score(metric, references[j], mixture);
    out.per_source.push_back(delta);
    sum += delta;
  }
  out.mean = sum / static_cast<double>(references.size());
  return out;
}

std::vector<Waveform> ConcatChannels(
    const std::vector<std::vector<Waveform>>& sources) {
  std::vector<Waveform> out;
  for (const auto& channels : sources) {
    Waveform joined;
    for (const Waveform& ch : channels) joined.insert(joined.end(), ch.begin(), ch.end());
    out.push_back(std::move(joined));
  }
  return out;
}

}  // namespace sagrnn
