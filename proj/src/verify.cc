// Copyright 2026 The sagrnn-stream Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "sagrnn/verify.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "sagrnn/chunker.h"
#include "sagrnn/latency.h"
#include "sagrnn/metrics.h"
#include "sagrnn/mixer.h"

namespace sagrnn {
namespace {

template <typename T>
T Pick(std::mt19937_64& rng, std::initializer_list<T> options) {
  std::uniform_int_distribution<std::size_t> d(0, options.size() - 1);
  return *(options.begin() + d(rng));
}

std::size_t Uniform(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

Waveform Noise(std::size_t n, std::mt19937_64& rng, float scale = 0.5f) {
  std::uniform_real_distribution<float> d(-scale, scale);
  Waveform w(n);
  for (float& v : w) v = d(rng);
  return w;
}

CriterionResult Result(std::string name, bool passed, std::string detail) {
  return {std::move(name), passed, false, std::move(detail)};
}

CriterionResult Skipped(std::string name, std::string why) {
  return {std::move(name), true, true, std::move(why)};
}

std::string Fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

// Random utterance long enough for several segments and a causality probe.
std::size_t ProbeLength(const ModelConfig& c, std::mt19937_64& rng) {
  return c.min_offline_samples() + Uniform(rng, 2, 6) * c.segment_samples() +
         Uniform(rng, 0, c.segment_samples() - 1);
}

CriterionResult CheckEquivalence(const Separator& sep, const VerifyOptions& o,
                                 std::mt19937_64& rng) {
  const char* name = "streaming equivalence";
  if (!sep.config().causal) return Skipped(name, "non-causal model does not stream");
  double worst = 0.0;
  for (std::size_t t = 0; t < o.trials; ++t) {
    const SignalBundle x = RandomSignal(sep.config(), ProbeLength(sep.config(), rng), rng);
    worst = std::max(worst, StreamOfflineMaxDiff(sep, x, std::nullopt));
  }
  return Result(name, worst < 1e-5, "max |stream - offline| = " + Fmt(worst) +
                                        " over " + std::to_string(o.trials) +
                                        " inputs (tol 1e-5)");
}

// Probes at chunk-hop boundaries t0; returns how many left the past unchanged.
std::size_t CausalityProbes(const Separator& sep, std::size_t probes,
                            std::ptrdiff_t offset, std::mt19937_64& rng) {
  const ModelConfig& c = sep.config();
  const auto bound = static_cast<std::ptrdiff_t>(DeclaredLookahead(c));
  std::size_t unchanged = 0;
  for (std::size_t p = 0; p < probes; ++p) {
    const std::size_t len = ProbeLength(c, rng);
    const SignalBundle x = RandomSignal(c, len, rng);
    const std::size_t hop = c.chunk_hop_samples();
    const auto limit = static_cast<std::ptrdiff_t>(len) - bound - 1 -
                       std::max<std::ptrdiff_t>(offset, 0);
    const std::size_t max_k = std::max<std::ptrdiff_t>(limit, 0) / hop;
    const std::size_t t0 = Uniform(rng, 1, std::max<std::size_t>(max_k, 1)) * hop;
    if (CausalOutputsUnchanged(sep, x, t0, offset, rng())) ++unchanged;
  }
  return unchanged;
}

CriterionResult CheckCausality(const Separator& sep, const VerifyOptions& o,
                               std::mt19937_64& rng) {
  const char* name = "causality";
  if (!sep.config().causal) return Skipped(name, "non-causal model");
  const std::size_t ok = CausalityProbes(sep, o.trials, o.lookahead_offset, rng);
  return Result(name, ok == o.trials,
                std::to_string(ok) + "/" + std::to_string(o.trials) +
                    " probes unchanged before t0 with perturbation at lookahead " +
                    std::to_string(static_cast<std::ptrdiff_t>(
                                       DeclaredLookahead(sep.config())) +
                                   o.lookahead_offset) +
                    " samples");
}

CriterionResult CheckCausalityControl(const Separator& sep, const VerifyOptions& o,
                                      std::mt19937_64& rng) {
  const char* name = "causality negative control";
  if (!sep.config().causal) return Skipped(name, "non-causal model");
  const auto hop = static_cast<std::ptrdiff_t>(sep.config().frame_hop());
  const std::size_t ok = CausalityProbes(sep, o.trials, -hop, rng);
  return Result(name, ok == 0,
                std::to_string(o.trials - ok) + "/" + std::to_string(o.trials) +
                    " probes detected a dependence one frame hop inside the lookahead");
}

CriterionResult CheckPushGranularity(const Separator& sep, const VerifyOptions& o,
                                     std::mt19937_64& rng) {
  const char* name = "push granularity";
  if (!sep.config().causal) return Skipped(name, "non-causal model does not stream");
  const ModelConfig& c = sep.config();
  const SignalBundle x = RandomSignal(c, ProbeLength(c, rng), rng);
  const SourceChannels reference = StreamInPieces(sep, x, {x.length()});
  std::size_t identical = 0;
  for (std::size_t t = 0; t < o.trials; ++t) {
    const auto pieces = RandomPartition(x.length(), c.window_samples() * 2, rng);
    if (StreamInPieces(sep, x, pieces) == reference) ++identical;
  }
  return Result(name, identical == o.trials,
                std::to_string(identical) + "/" + std::to_string(o.trials) +
                    " random partitions bit-identical");
}

CriterionResult CheckOla(const VerifyOptions& o, std::mt19937_64& rng) {
  double chunk_err = 0.0, frame_err = 0.0;
  bool split_exact = true;
  for (std::size_t t = 0; t < o.trials; ++t) {
    const std::size_t r = 2 * Uniform(rng, 1, 16), p = 2 * Uniform(rng, 1, 16);
    const FramingSpec spec = FramingSpec::Make(p, r);
    const std::size_t n = Uniform(rng, 1, 6);
    const std::size_t frames = spec.chunk_hop * Uniform(rng, 2, 12);
    Tensor x({n, frames}, Noise(n * frames, rng));
    const Tensor back = ChunksToFrames(FramesToChunks(x, spec));
    chunk_err = std::max<double>(chunk_err, MaxAbsDiff(back.span(), x.span()));

    // Frame level: slice a waveform into hop-P/2 frames and overlap-add back.
    const std::size_t len = Uniform(rng, 1, 40);
    const Waveform w = Noise((len + 1) * spec.frame_hop, rng);
    Tensor f({p, len});
    for (std::size_t l = 0; l < len; ++l) {
      for (std::size_t u = 0; u < p; ++u) f.at(u, l) = w[l * spec.frame_hop + u];
    }
    const Waveform y = OverlapAddFrames(f, spec);
    frame_err = std::max<double>(frame_err, MaxAbsDiff(y, w));

    // Streamed in two pieces vs. one shot.
    const std::size_t cut = Uniform(rng, 0, len);
    Waveform streamed;
    OlaCarry carry;
    for (auto [begin, end] : {std::pair{std::size_t{0}, cut}, std::pair{cut, len}}) {
      if (begin == end) continue;
      Tensor part({p, end - begin});
      for (std::size_t l = begin; l < end; ++l) {
        for (std::size_t u = 0; u < p; ++u) part.at(u, l - begin) = f.at(u, l);
      }
      FrameOlaResult r2 = FramesToSamples(part, spec, carry);
      streamed.insert(streamed.end(), r2.samples.begin(), r2.samples.end());
      carry = r2.carry;
    }
    const Waveform tail = FinishFrameOla(carry);
    streamed.insert(streamed.end(), tail.begin(), tail.end());
    split_exact = split_exact && streamed == y;
  }
  return Result("ola round trips",
                chunk_err < 1e-6 && frame_err < 1e-6 && split_exact,
                "chunk err " + Fmt(chunk_err) + ", frame err " + Fmt(frame_err) +
                    (split_exact ? ", streamed split bit-exact" : ", streamed split differs"));
}

CriterionResult CheckChunkCount(const VerifyOptions& o, std::mt19937_64& rng) {
  std::size_t bad = 0;
  for (std::size_t t = 0; t < o.trials; ++t) {
    const std::size_t r = 2 * Uniform(rng, 1, 64);
    const FramingSpec spec = FramingSpec::Make(2, r);
    const std::size_t len = spec.chunk_hop * Uniform(rng, 2, 40);
    const Tensor x({1, len}, 0.0f);
    const ChunkTensor ct = FramesToChunks(x, spec);
    if (ct.num_chunks() != 2 * len / r - 1 || ct.trimmed_frames != 0) ++bad;
  }
  return Result("chunk count", bad == 0,
                std::to_string(o.trials - bad) + "/" + std::to_string(o.trials) +
                    " lengths give S = floor(2L/R) - 1");
}

CriterionResult CheckMetrics(const VerifyOptions& o, std::mt19937_64& rng) {
  double scale_err = 0.0;
  bool pit_optimal = true, improvement_zero = true;
  for (std::size_t t = 0; t < o.trials; ++t) {
    const std::size_t len = Uniform(rng, 16, 400);
    const Waveform s32 = Noise(len, rng), e32 = Noise(len, rng);
    const std::vector<double> s(s32.begin(), s32.end()), e(e32.begin(), e32.end());
    const double base = SiSnr(std::span<const double>(s), std::span<const double>(e));
    for (double a : {0.1, 3.0, -2.0}) {
      std::vector<double> scaled = e;
      for (double& v : scaled) v *= a;
      scale_err = std::max(scale_err,
                           std::abs(SiSnr(std::span<const double>(s),
                                          std::span<const double>(scaled)) - base));
    }
    const std::size_t c = Uniform(rng, 2, 4);
    std::vector<Waveform> refs, ests;
    for (std::size_t j = 0; j < c; ++j) {
      refs.push_back(Noise(len, rng));
      ests.push_back(Noise(len, rng));
    }
    const PermutationAssignment pa = PitAssign(refs, ests, Metric::kSiSnr);
    std::vector<std::size_t> perm(c);
    for (std::size_t j = 0; j < c; ++j) perm[j] = j;
    do {
      double mean = 0.0;
      for (std::size_t j = 0; j < c; ++j) mean += SiSnr(refs[j], ests[perm[j]]);
      if (mean / static_cast<double>(c) > pa.mean_score) pit_optimal = false;
    } while (std::next_permutation(perm.begin(), perm.end()));
    Waveform mix(len, 0.0f);
    for (const Waveform& r : refs) {
      for (std::size_t i = 0; i < len; ++i) mix[i] += r[i];
    }
    const Improvement imp = ImprovementOverMixture(
        mix, refs, std::vector<Waveform>(c, mix), Metric::kSnr);
    improvement_zero = improvement_zero && imp.mean == 0.0;
  }
  Waveform s = Noise(256, rng), half = s;
  for (float& v : half) v *= 0.5f;
  const double six = Snr(s, half);
  const bool ok = scale_err <= 1e-9 && std::abs(six - 6.0206) <= 1e-4 &&
                  pit_optimal && improvement_zero;
  return Result("metric properties", ok,
                "SI-SNR scale drift " + Fmt(scale_err) + " dB, SNR(s, 0.5s) = " +
                    std::to_string(six) + " dB, PIT " +
                    (pit_optimal ? "optimal" : "suboptimal") + ", mixture improvement " +
                    (improvement_zero ? "0" : "nonzero"));
}

CriterionResult CheckLatency(const Separator& sep) {
  const LatencyReport paper = MakeLatencyReport(64.0, 0.65, 32.0);
  const LatencyReport own = sep.config().causal
                                ? MakeLatencyReport(sep.config(), 0.5)
                                : MakeLatencyReport(64.0, 0.5, 32.0);
  auto consistent = [](const LatencyReport& r) {
    return r.total_latency_ms ==
           r.segment_ms + r.rtf * r.segment_ms + r.future_context_ms;
  };
  const bool ok = consistent(paper) && consistent(own) &&
                  std::abs(paper.total_latency_ms - 137.6) < 1e-9 &&
                  std::abs(paper.total_latency_ms - 138.0) <= 0.5;
  return Result("latency equation", ok,
                "64 ms + 0.65 * 64 ms + 32 ms = " + std::to_string(paper.total_latency_ms) +
                    " ms");
}

CriterionResult CheckBinauralSwap(const Separator& sep, const VerifyOptions& o,
                                  std::mt19937_64& rng) {
  const char* name = "binaural swap symmetry";
  if (!sep.config().binaural) return Skipped(name, "monaural model");
  std::size_t exact = 0;
  for (std::size_t t = 0; t < o.trials; ++t) {
    SignalBundle x = RandomSignal(sep.config(), ProbeLength(sep.config(), rng), rng);
    const SeparationResult a = sep.ForwardOffline(x);
    std::swap(x.channels[0], x.channels[1]);
    const SeparationResult b = sep.ForwardOffline(x);
    bool same = true;
    for (std::size_t c = 0; c < a.sources.size(); ++c) {
      same = same && a.sources[c][0] == b.sources[c][1] &&
             a.sources[c][1] == b.sources[c][0];
    }
    if (same) ++exact;
  }
  return Result(name, exact == o.trials,
                std::to_string(exact) + "/" + std::to_string(o.trials) +
                    " swaps permuted the output ears bit-exactly");
}

CriterionResult CheckMixer(const VerifyOptions& o, std::mt19937_64& rng) {
  double snr_err = 0.0, conv_err = 0.0;
  for (std::size_t t = 0; t < o.trials; ++t) {
    const std::size_t len = Uniform(rng, 64, 2000);
    const std::vector<Waveform> src{Noise(len, rng), Noise(len, rng)};
    const std::vector<float> gains = MixSpec::DefaultGains(2, rng());
    const double target = std::uniform_real_distribution<double>(-10, 30)(rng);
    const MixResult m = MixNoisy(src, gains, Noise(len + 10, rng), target);
    double es = 0.0, en = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
      es += static_cast<double>(m.clean[0][i]) * m.clean[0][i];
      en += static_cast<double>(m.noise[0][i]) * m.noise[0][i];
    }
    snr_err = std::max(snr_err, std::abs(10.0 * std::log10(es / en) - target));

    const Waveform h = Noise(Uniform(rng, 1, 64), rng);
    const Waveform y = ConvolveTruncated(src[0], h);
    for (std::size_t i = 0; i < len; ++i) {
      double acc = 0.0;
      for (std::size_t k = 0; k < h.size() && k <= i; ++k) acc += h[k] * src[0][i - k];
      conv_err = std::max(conv_err, std::abs(acc - y[i]));
    }
  }
  return Result("mixer", snr_err <= 1e-6 && conv_err <= 1e-6,
                "SNR error " + Fmt(snr_err) + " dB, convolution error " + Fmt(conv_err));
}

}  // namespace

ModelConfig RandomSmallConfig(std::mt19937_64& rng, bool binaural) {
  ModelConfig c;
  const auto [p, r] = Pick<std::pair<std::size_t, std::size_t>>(
      rng, {{8, 64}, {16, 32}, {16, 64}});
  c.frame_size = p;
  c.chunk_size = r;
  c.channels = Pick<std::size_t>(rng, {8, 16});
  c.hidden_size = Pick<std::size_t>(rng, {8, 16});
  c.attention_dim = 16;
  c.num_blocks = Pick<std::size_t>(rng, {1, 2});
  c.num_sources = 2;
  c.causal = true;
  c.binaural = binaural;
  c.Validate();
  return c;
}

SignalBundle RandomSignal(const ModelConfig& config, std::size_t samples,
                          std::mt19937_64& rng) {
  SignalBundle b;
  b.sample_rate = config.sample_rate;
  for (std::size_t e = 0; e < config.input_channels(); ++e) {
    b.channels.push_back(Noise(samples, rng));
  }
  return b;
}

double MaxSourceDiff(const SourceChannels& a, const SourceChannels& b) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  if (a.size() != b.size()) return kInf;
  double worst = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) {
    if (a[c].size() != b[c].size()) return kInf;
    for (std::size_t e = 0; e < a[c].size(); ++e) {
      const double d = MaxAbsDiff(a[c][e], b[c][e]);
      if (!(d <= kInf)) return d;  // NaN
      worst = std::max(worst, d);
    }
  }
  return worst;
}

double StreamOfflineMaxDiff(const Separator& separator, const SignalBundle& input,
                            std::optional<std::size_t> attention_history) {
  StreamConfig sc;
  sc.attention_history_chunks = attention_history;
  const SeparationResult streamed = RunStateful(separator, input, sc);
  ForwardOptions fo;
  fo.attention_history = attention_history;
  const SeparationResult offline = separator.ForwardOffline(input, fo);
  return MaxSourceDiff(streamed.sources, offline.sources);
}

bool CausalOutputsUnchanged(const Separator& separator, const SignalBundle& input,
                            std::size_t t0, std::ptrdiff_t offset,
                            std::uint64_t seed) {
  const auto from = static_cast<std::ptrdiff_t>(t0) +
                    static_cast<std::ptrdiff_t>(DeclaredLookahead(separator.config())) +
                    offset;
  SignalBundle perturbed = input;
  std::mt19937_64 rng(seed);
  for (Waveform& ch : perturbed.channels) {
    for (std::size_t i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(from, 0));
         i < ch.size(); ++i) {
      ch[i] = std::uniform_real_distribution<float>(-1.0f, 1.0f)(rng);
    }
  }
  const SeparationResult a = separator.ForwardOffline(input);
  const SeparationResult b = separator.ForwardOffline(perturbed);
  for (std::size_t c = 0; c < a.sources.size(); ++c) {
    for (std::size_t e = 0; e < a.sources[c].size(); ++e) {
      const Waveform& x = a.sources[c][e];
      const Waveform& y = b.sources[c][e];
      if (!std::equal(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(t0), y.begin())) {
        return false;
      }
    }
  }
  return true;
}

SourceChannels StreamInPieces(const Separator& separator, const SignalBundle& input,
                              const std::vector<std::size_t>& pieces,
                              const StreamConfig& config) {
  StatefulStream stream(separator, config);
  SourceChannels out = SourceChannels(separator.config().num_sources,
                                      std::vector<Waveform>(input.channels.size()));
  auto append = [&out](const SourceChannels& part) {
    for (std::size_t c = 0; c < out.size(); ++c) {
      for (std::size_t e = 0; e < out[c].size(); ++e) {
        out[c][e].insert(out[c][e].end(), part[c][e].begin(), part[c][e].end());
      }
    }
  };
  std::size_t pos = 0;
  for (std::size_t n : pieces) {
    std::vector<std::span<const float>> chunk;
    for (const Waveform& ch : input.channels) chunk.emplace_back(ch.data() + pos, n);
    append(stream.Push(chunk));
    pos += n;
  }
  append(stream.Flush());
  return out;
}

std::vector<std::size_t> RandomPartition(std::size_t total, std::size_t max_piece,
                                         std::mt19937_64& rng) {
  std::vector<std::size_t> pieces;
  std::size_t left = total;
  while (left > 0) {
    // Zero-length pushes are legal and part of the contract.
    const std::size_t n = std::min(left, Uniform(rng, 0, max_piece));
    pieces.push_back(n);
    left -= n;
  }
  return pieces;
}

std::vector<CriterionResult> RunVerifySuites(const Separator& separator,
                                             const VerifyOptions& options) {
  std::vector<CriterionResult> out;
  if (options.trials == 0) return out;
  std::mt19937_64 rng(options.seed);
  out.push_back(CheckEquivalence(separator, options, rng));
  out.push_back(CheckCausality(separator, options, rng));
  out.push_back(CheckCausalityControl(separator, options, rng));
  out.push_back(CheckPushGranularity(separator, options, rng));
  out.push_back(CheckOla(options, rng));
  out.push_back(CheckChunkCount(options, rng));
  out.push_back(CheckMetrics(options, rng));
  out.push_back(CheckLatency(separator));
  out.push_back(CheckBinauralSwap(separator, options, rng));
  out.push_back(CheckMixer(options, rng));
  if (options.include_rtf) {
    out.push_back(CheckRtfOrdering(separator, options.rtf_duration_s,
                                   options.rtf_repetitions, options.seed));
  }
  return out;
}

CriterionResult CheckRtfOrdering(const Separator& separator, double duration_s,
                                 std::size_t repetitions, std::uint64_t seed) {
  const char* name = "rtf ordering";
  if (!separator.config().causal) return Skipped(name, "non-causal model does not stream");
  RtfOptions ro{duration_s, repetitions, seed};
  StreamConfig stateful;
  StreamConfig stateless;
  stateless.mode = StreamMode::kStateless;
  stateless.history_ms = 640.0;
  const double a = MeasureRtf(separator, stateful, ro).report.rtf;
  const double b = MeasureRtf(separator, stateless, ro).report.rtf;
  return Result(name, a < b,
                "stateful RTF " + std::to_string(a) + " vs stateless (640 ms) RTF " +
                    std::to_string(b));
}

bool AllPassed(const std::vector<CriterionResult>& results) {
  return std::all_of(results.begin(), results.end(),
                     [](const CriterionResult& r) { return r.passed; });
}

}  // namespace sagrnn
