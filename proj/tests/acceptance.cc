// Copyright 2026 The sagrnn-stream Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

// Acceptance run: one PASS/FAIL line per headline criterion. Every tolerance,
// count and duration below is fixed; the process exits nonzero on any FAIL.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <memory>
#include <numeric>
#include <random>
#include <string>

#include "oracles.h"
#include "sagrnn/chunker.h"
#include "sagrnn/latency.h"
#include "sagrnn/metrics.h"
#include "sagrnn/mixer.h"
#include "sagrnn/model.h"
#include "sagrnn/stream.h"

using namespace sagrnn;

namespace {

constexpr double kStreamTol = 1e-5;
constexpr double kOlaTol = 1e-6;
constexpr double kScaleInvTolDb = 1e-9;
constexpr double kHalfScaleSnrDb = 6.0206;
constexpr double kHalfScaleTolDb = 1e-4;
constexpr double kMixSnrTolDb = 1e-6;
constexpr double kConvTol = 1e-6;
constexpr double kStreamCpuBudgetS = 300.0;
constexpr double kRtfCpuBudgetS = 600.0;

int failures = 0;

void Report(const char* name, bool pass, const std::string& detail) {
  std::printf("%s %s: %s\n", pass ? "PASS" : "FAIL", name, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string Fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double CpuSeconds() { return static_cast<double>(std::clock()) / CLOCKS_PER_SEC; }

struct Model {
  ModelConfig config;
  std::unique_ptr<WeightContainer> weights;
  std::unique_ptr<Separator> sep;
  Model(const ModelConfig& c, std::uint64_t seed)
      : config(c),
        weights(std::make_unique<WeightContainer>(InitWeights(c, seed))),
        sep(std::make_unique<Separator>(c, *weights)) {}
};

template <typename T>
T Pick(std::mt19937_64& rng, std::initializer_list<T> options) {
  return *(options.begin() + rng() % options.size());
}

ModelConfig SmallConfig(std::mt19937_64& rng, bool binaural) {
  ModelConfig c;
  c.frame_size = Pick<std::size_t>(rng, {8, 16});
  c.chunk_size = Pick<std::size_t>(rng, {16, 32, 64});
  c.channels = Pick<std::size_t>(rng, {8, 16});
  c.hidden_size = Pick<std::size_t>(rng, {8, 16});
  c.attention_dim = Pick<std::size_t>(rng, {8, 16});
  c.num_blocks = Pick<std::size_t>(rng, {1, 2});
  c.binaural = binaural;
  return c;
}

SignalBundle Noise(const ModelConfig& c, std::size_t len, std::mt19937_64& rng) {
  SignalBundle x;
  x.sample_rate = c.sample_rate;
  for (std::size_t e = 0; e < c.input_channels(); ++e)
    x.channels.push_back(oracle::RandomVector(len, rng));
  return x;
}

std::size_t SecondsToSamples(const ModelConfig& c, double lo, double hi,
                             std::mt19937_64& rng) {
  return static_cast<std::size_t>(
      std::uniform_real_distribution<double>(lo, hi)(rng) * c.sample_rate);
}

double MaxDiff(const SourceChannels& a, const SourceChannels& b) {
  if (a.size() != b.size()) return INFINITY;
  double worst = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) {
    if (a[c].size() != b[c].size()) return INFINITY;
    for (std::size_t e = 0; e < a[c].size(); ++e) {
      if (a[c][e].size() != b[c][e].size()) return INFINITY;
      for (std::size_t i = 0; i < a[c][e].size(); ++i)
        worst = std::max(worst, std::abs(double(a[c][e][i]) - b[c][e][i]));
    }
  }
  return worst;
}

StreamConfig Unbounded() {
  StreamConfig s;
  s.attention_history_chunks = std::nullopt;
  return s;
}

SourceChannels StreamPieces(const Separator& sep, const SignalBundle& x,
                            const std::vector<std::size_t>& pieces) {
  StatefulStream stream(sep, Unbounded());
  SourceChannels out;
  auto append = [&](const SourceChannels& part) {
    if (out.empty()) out = part;
    else
      for (std::size_t c = 0; c < part.size(); ++c)
        for (std::size_t e = 0; e < part[c].size(); ++e)
          out[c][e].insert(out[c][e].end(), part[c][e].begin(), part[c][e].end());
  };
  std::size_t at = 0;
  for (std::size_t n : pieces) {
    std::vector<std::span<const float>> chans;
    for (const Waveform& ch : x.channels) chans.emplace_back(ch.data() + at, n);
    append(stream.Push(chans));
    at += n;
  }
  append(stream.Flush());
  return out;
}

void StreamingEquivalence() {
  const double cpu0 = CpuSeconds();
  std::mt19937_64 rng(1001);
  double worst = 0.0;
  std::size_t runs = 0;
  for (int k = 0; k < 5; ++k) {
    Model m(SmallConfig(rng, false), rng());
    for (int i = 0; i < 20; ++i) {
      const SignalBundle x = Noise(m.config, SecondsToSamples(m.config, 3.0, 10.0, rng), rng);
      const SeparationResult offline = m.sep->ForwardOffline(x);
      const SeparationResult stream = RunStateful(*m.sep, x, Unbounded());
      worst = std::max(worst, MaxDiff(stream.sources, offline.sources));
      ++runs;
    }
  }
  const double cpu = CpuSeconds() - cpu0;
  Report("streaming equivalence", worst < kStreamTol && cpu < kStreamCpuBudgetS,
         std::to_string(runs) + " inputs of 3-10 s over 5 configs, max |stream - offline| = " +
             Fmt("%.3g", worst) + " (< 1e-5), " + Fmt("%.1f", cpu) + " s CPU (< 300)");
}

// Perturbs every sample from `from` on and compares offline outputs before t0.
bool PastUnchanged(const Separator& sep, const SignalBundle& x, std::size_t t0,
                   std::size_t from, std::mt19937_64& rng) {
  SignalBundle y = x;
  for (Waveform& ch : y.channels)
    for (std::size_t i = from; i < ch.size(); ++i)
      ch[i] = std::uniform_real_distribution<float>(-1.0f, 1.0f)(rng);
  const auto a = sep.ForwardOffline(x).sources, b = sep.ForwardOffline(y).sources;
  for (std::size_t c = 0; c < a.size(); ++c)
    for (std::size_t e = 0; e < a[c].size(); ++e)
      for (std::size_t i = 0; i < t0; ++i)
        if (a[c][e][i] != b[c][e][i]) return false;
  return true;
}

void Causality() {
  std::mt19937_64 rng(2002);
  std::size_t held = 0, detected = 0;
  const int probes = 20;
  for (int p = 0; p < probes; ++p) {
    Model m(SmallConfig(rng, p % 4 == 3), rng());
    const ModelConfig& c = m.config;
    const SignalBundle x = Noise(c, SecondsToSamples(c, 0.5, 1.0, rng), rng);
    const std::size_t hop = c.chunk_hop_samples(), look = DeclaredLookahead(c);
    const std::size_t max_k = (x.length() - look - c.frame_hop()) / hop;
    const std::size_t t0 = hop * (1 + rng() % max_k);
    if (PastUnchanged(*m.sep, x, t0, t0 + look, rng)) ++held;
    if (!PastUnchanged(*m.sep, x, t0, t0 + look - c.frame_hop(), rng)) ++detected;
  }
  Report("causality tightness", held == probes && detected == probes,
         std::to_string(held) + "/20 probes bit-exact before t0 with perturbation at the "
         "declared lookahead; " + std::to_string(detected) +
             "/20 detected one frame hop inside it");
}

void PushGranularity() {
  std::mt19937_64 rng(3003);
  Model m(SmallConfig(rng, false), rng());
  const SignalBundle x = Noise(m.config, SecondsToSamples(m.config, 3.0, 4.0, rng), rng);
  const SourceChannels ref = StreamPieces(*m.sep, x, {x.length()});
  std::size_t identical = 0;
  for (int t = 0; t < 10; ++t) {
    std::vector<std::size_t> pieces;
    std::size_t left = x.length();
    const std::size_t max_piece = (t % 2 == 0) ? 7 : 3 * m.config.window_samples();
    while (left > 0) {
      const std::size_t n = std::min<std::size_t>(left, rng() % (max_piece + 1));
      pieces.push_back(n);
      left -= n;
    }
    if (StreamPieces(*m.sep, x, pieces) == ref) ++identical;
  }
  Report("push granularity", identical == 10,
         std::to_string(identical) + "/10 random partitions bit-identical to one push");
}

void OlaRoundTrips() {
  std::mt19937_64 rng(4004);
  double chunk_worst = 0.0, frame_worst = 0.0;
  std::size_t split_exact = 0;
  for (int t = 0; t < 100; ++t) {
    // Chunk level.
    const std::size_t r = 2 * (1 + rng() % 64), n = 1 + rng() % 8;
    const std::size_t len = r / 2 * (2 + rng() % 8);
    const Tensor frames({n, len}, oracle::RandomVector(n * len, rng));
    const ChunkTensor ct = FramesToChunks(frames, FramingSpec::Make(2, r));
    chunk_worst = std::max<double>(chunk_worst, MaxAbsDiff(ChunksToFrames(ct).span(), frames.span()));
    std::vector<std::vector<double>> noisy_windows;
    ChunkTensor noisy = ct;
    for (float& v : noisy.data.span()) v = oracle::RandomVector(1, rng)[0];
    const Tensor y = ChunksToFrames(noisy);
    for (std::size_t s = 0; s < noisy.num_chunks(); ++s) {
      noisy_windows.emplace_back();
      for (std::size_t u = 0; u < r; ++u) noisy_windows.back().push_back(noisy.data.at(0, s, u));
    }
    const auto ref = oracle::CountingOla(noisy_windows, r);
    for (std::size_t l = 0; l < len; ++l)
      chunk_worst = std::max(chunk_worst, std::abs(y.at(0, l) - ref[l]));

    // Frame level.
    const std::size_t p = 2 * (1 + rng() % 32), h = p / 2, nf = 1 + rng() % 40;
    const FramingSpec spec = FramingSpec::Make(p, 2);
    const Waveform w = oracle::RandomVector((nf + 1) * h, rng);
    Tensor f({p, nf});
    for (std::size_t l = 0; l < nf; ++l)
      for (std::size_t u = 0; u < p; ++u) f.at(u, l) = w[l * h + u];
    frame_worst = std::max<double>(frame_worst, MaxAbsDiff(OverlapAddFrames(f, spec), w));

    // Streamed frame OLA over a random split.
    const Tensor g({p, nf}, oracle::RandomVector(p * nf, rng));
    const Waveform whole = OverlapAddFrames(g, spec);
    Waveform streamed;
    OlaCarry carry;
    std::size_t at = 0;
    while (at < nf) {
      const std::size_t k = std::min<std::size_t>(nf - at, 1 + rng() % 5);
      Tensor part({p, k});
      for (std::size_t u = 0; u < p; ++u)
        for (std::size_t l = 0; l < k; ++l) part.at(u, l) = g.at(u, at + l);
      const FrameOlaResult res = FramesToSamples(part, spec, carry);
      streamed.insert(streamed.end(), res.samples.begin(), res.samples.end());
      carry = res.carry;
      at += k;
    }
    const Waveform tail = FinishFrameOla(carry);
    streamed.insert(streamed.end(), tail.begin(), tail.end());
    if (streamed == whole) ++split_exact;
  }
  Report("ola round trips",
         chunk_worst < kOlaTol && frame_worst < kOlaTol && split_exact == 100,
         "100 shapes: chunk max diff " + Fmt("%.3g", chunk_worst) + ", frame max diff " +
             Fmt("%.3g", frame_worst) + " (< 1e-6); streamed split bit-exact " +
             std::to_string(split_exact) + "/100");
}

void ChunkCount() {
  std::size_t ok = 0, cases = 0;
  for (std::size_t r : {2u, 4u, 8u, 16u, 32u, 64u, 128u, 256u, 512u, 1024u}) {
    for (std::size_t k = 2; k <= 6; ++k) {
      const std::size_t len = k * r / 2;
      const ChunkTensor ct = FramesToChunks(Tensor({1, len}), FramingSpec::Make(2, r));
      ++cases;
      if (ct.num_chunks() == 2 * len / r - 1 &&
          ct.num_chunks() == oracle::EnumeratedChunks(len, r))
        ++ok;
    }
  }
  Report("chunk count", ok == cases && cases == 50,
         std::to_string(ok) + "/" + std::to_string(cases) +
             " grid cases with S = floor(2L/R) - 1 matching enumeration");
}

void MetricProperties() {
  std::mt19937_64 rng(5005);
  double scale_worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    std::vector<double> s(1000), e(1000);
    for (std::size_t i = 0; i < s.size(); ++i) {
      s[i] = oracle::RandomVector(1, rng)[0];
      e[i] = 0.7 * s[i] + oracle::RandomVector(1, rng)[0];
    }
    const double base = SiSnr(s, e);
    for (double a : {0.1, 3.0, -2.0}) {
      std::vector<double> se = e;
      for (double& v : se) v *= a;
      scale_worst = std::max(scale_worst, std::abs(SiSnr(s, se) - base));
    }
  }
  const Waveform s = oracle::RandomVector(4000, rng);
  Waveform half = s;
  for (float& v : half) v *= 0.5f;
  const double half_db = Snr(s, half);

  std::size_t pit_ok = 0, pit_cases = 0;
  for (std::size_t c = 2; c <= kMaxPitSources; ++c) {
    for (int t = 0; t < 4; ++t) {
      std::vector<Waveform> refs, ests;
      for (std::size_t j = 0; j < c; ++j) refs.push_back(oracle::RandomVector(256, rng));
      for (std::size_t j = 0; j < c; ++j) {
        Waveform est = refs[(j * 7 + t) % c];
        const Waveform n = oracle::RandomVector(256, rng);
        for (std::size_t i = 0; i < est.size(); ++i) est[i] += 1.2f * n[i];
        ests.push_back(est);
      }
      oracle::Matrix score(c, std::vector<double>(c));
      for (std::size_t j = 0; j < c; ++j)
        for (std::size_t k = 0; k < c; ++k) score[j][k] = oracle::SiSnrDb(refs[j], ests[k]);
      std::vector<std::size_t> best;
      const double best_mean = oracle::BestPermutation(score, best);
      const PermutationAssignment p = PitAssign(refs, ests, Metric::kSiSnr);
      ++pit_cases;
      if (p.perm == best && std::abs(p.mean_score - best_mean) < 1e-9) ++pit_ok;
    }
  }

  const Waveform a = oracle::RandomVector(2000, rng), b = oracle::RandomVector(2000, rng);
  Waveform mix(2000);
  for (std::size_t i = 0; i < mix.size(); ++i) mix[i] = a[i] + b[i];
  bool zero = true;
  for (Metric metric : {Metric::kSiSnr, Metric::kSnr}) {
    const Improvement imp = ImprovementOverMixture(mix, {a, b}, {mix, mix}, metric);
    zero = zero && imp.mean == 0.0;
    for (double d : imp.per_source) zero = zero && d == 0.0;
  }
  const bool pass = scale_worst < kScaleInvTolDb &&
                    std::abs(half_db - kHalfScaleSnrDb) < kHalfScaleTolDb &&
                    pit_ok == pit_cases && zero;
  Report("metric properties", pass,
         "SI-SNR scale drift " + Fmt("%.3g", scale_worst) + " dB (< 1e-9); SNR(s, 0.5s) = " +
             Fmt("%.6f", half_db) + " dB (6.0206 +- 1e-4); PIT optimal " +
             std::to_string(pit_ok) + "/" + std::to_string(pit_cases) +
             " (C = 2..6); mixture-as-estimate improvement " + (zero ? "exactly 0" : "nonzero"));
}

void LatencyEquation() {
  std::mt19937_64 rng(6006);
  bool exact = true;
  for (int t = 0; t < 1000; ++t) {
    std::uniform_real_distribution<double> u(0.0, 500.0);
    const double seg = u(rng), rtf = u(rng) / 100.0, fc = u(rng);
    const LatencyReport r = MakeLatencyReport(seg, rtf, fc);
    exact = exact && r.total_latency_ms == seg + rtf * seg + fc && r.segment_ms == seg &&
            r.rtf == rtf && r.future_context_ms == fc;
  }
  const LatencyReport r = MakeLatencyReport(64.0, 0.65, 32.0);
  const bool reads = std::abs(r.total_latency_ms - 137.6) < 1e-9;
  const bool near = std::abs(r.total_latency_ms - 138.0) <= 0.5;
  Report("latency equation", exact && reads && near,
         std::string("equation exact on 1000 random reports: ") + (exact ? "yes" : "no") +
             "; segment 64 ms, FC 32 ms, RTF 0.65 -> " + Fmt("%.4f", r.total_latency_ms) +
             " ms, |total - 138| = " + Fmt("%.1f", std::abs(r.total_latency_ms - 138.0)) +
             " (<= 0.5)");
}

void RtfOrdering() {
  const double cpu0 = CpuSeconds();
  Model m(ModelConfig{}, 7007);
  const RtfOptions opt{10.0, 3, 7};
  StreamConfig stateful;
  StreamConfig stateless;
  stateless.mode = StreamMode::kStateless;
  stateless.history_ms = 640.0;
  const RtfMeasurement a = MeasureRtf(*m.sep, stateful, opt);
  const RtfMeasurement b = MeasureRtf(*m.sep, stateless, opt);
  const double cpu = CpuSeconds() - cpu0;
  Report("rtf ordering", a.report.rtf < b.report.rtf && cpu < kRtfCpuBudgetS,
         "default config, 10 s of audio, median of 3: stateful RTF " +
             Fmt("%.4f", a.report.rtf) + " < stateless (640 ms history) RTF " +
             Fmt("%.4f", b.report.rtf) + "; " + Fmt("%.1f", cpu) + " s CPU (< 600)");
}

void BinauralSwap() {
  std::mt19937_64 rng(8008);
  std::size_t exact = 0;
  const int trials = 10;
  for (int t = 0; t < trials; ++t) {
    Model m(SmallConfig(rng, true), rng());
    const SignalBundle x = Noise(m.config, SecondsToSamples(m.config, 1.0, 3.0, rng), rng);
    SignalBundle swapped = x;
    std::swap(swapped.channels[0], swapped.channels[1]);
    const auto a = m.sep->ForwardOffline(x).sources;
    const auto b = m.sep->ForwardOffline(swapped).sources;
    const auto sa = RunStateful(*m.sep, x).sources, sb = RunStateful(*m.sep, swapped).sources;
    bool ok = true;
    for (std::size_t c = 0; c < a.size(); ++c) {
      ok = ok && a[c][0] == b[c][1] && a[c][1] == b[c][0];
      ok = ok && sa[c][0] == sb[c][1] && sa[c][1] == sb[c][0];
    }
    if (ok) ++exact;
  }
  Report("binaural swap symmetry", exact == trials,
         std::to_string(exact) + "/10 binaural models permute output ears bit-exactly "
         "(offline and stateful)");
}

void Mixer() {
  std::mt19937_64 rng(9009);
  double snr_worst = 0.0, conv_worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const std::size_t len = 500 + rng() % 4000, ears = 1 + t % 2;
    const Waveform a = oracle::RandomVector(len, rng), b = oracle::RandomVector(len, rng);
    std::vector<std::vector<Waveform>> irs(2);
    for (auto& per_source : irs)
      for (std::size_t e = 0; e < ears; ++e)
        per_source.push_back(oracle::RandomVector(1 + rng() % 256, rng));
    std::vector<Waveform> noise;
    for (std::size_t e = 0; e < ears; ++e) noise.push_back(oracle::RandomVector(len, rng));
    const double snr = std::uniform_real_distribution<double>(-10.0, 30.0)(rng);
    const std::vector<float> g = MixSpec::DefaultGains(2, t);
    const MixResult r = MixReverberant({a, b}, g, irs, noise, snr);
    double clean = 0.0, n = 0.0;
    for (std::size_t e = 0; e < ears; ++e) {
      for (std::size_t i = 0; i < len; ++i) {
        clean += double(r.clean[e][i]) * r.clean[e][i];
        n += double(r.noise[e][i]) * r.noise[e][i];
      }
    }
    snr_worst = std::max(snr_worst, std::abs(10.0 * std::log10(clean / n) - snr));

    const Waveform x = oracle::RandomVector(len, rng);
    const Waveform h = oracle::RandomVector(1 + rng() % 512, rng);
    const Waveform y = ConvolveTruncated(x, h);
    const auto ref = oracle::Fir(x, h);
    for (std::size_t i = 0; i < len; ++i) conv_worst = std::max(conv_worst, std::abs(y[i] - ref[i]));
  }
  Report("mixer", snr_worst < kMixSnrTolDb && conv_worst < kConvTol,
         "50 reverberant mixes: SNR error " + Fmt("%.3g", snr_worst) +
             " dB (< 1e-6); convolution vs naive max diff " + Fmt("%.3g", conv_worst) +
             " (< 1e-6)");
}

}  // namespace

int main() {
  StreamingEquivalence();
  Causality();
  PushGranularity();
  OlaRoundTrips();
  ChunkCount();
  MetricProperties();
  LatencyEquation();
  RtfOrdering();
  BinauralSwap();
  Mixer();
  std::printf("%s: %d failed\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  return failures == 0 ? 0 : 1;
}
