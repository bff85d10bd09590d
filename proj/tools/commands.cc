// Copyright 2026 The sagrnn-stream Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "commands.h"

#include <openssl/evp.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <memory>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "sagrnn/error.h"
#include "sagrnn/latency.h"
#include "sagrnn/metrics.h"
#include "sagrnn/mixer.h"
#include "sagrnn/model_params.h"
#include "sagrnn/verify.h"
#include "sagrnn/weights.h"

namespace sagrnn {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

using Clock = std::chrono::steady_clock;

double SecondsSince(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Weights plus a Separator viewing them; the container must stay put.
struct LoadedModel {
  WeightContainer weights;
  std::unique_ptr<Separator> separator;
  std::string digest;
};

std::unique_ptr<LoadedModel> LoadModel(const std::string& weights_path,
                                       const RunConfig& config, std::uint64_t seed) {
  auto m = std::make_unique<LoadedModel>();
  if (weights_path.empty()) {
    m->weights = InitWeights(config.model, seed);
    m->digest = Sha256Hex(SerializeWeights(m->weights));
  } else {
    m->weights = LoadWeights(weights_path);
    m->digest = FileSha256(weights_path);
  }
  m->separator = std::make_unique<Separator>(config.model, m->weights);
  return m;
}

json ConfigJson(const RunConfig& c) {
  json j;
  j["channels"] = c.model.channels;
  j["frame_size"] = c.model.frame_size;
  j["chunk_size"] = c.model.chunk_size;
  j["num_blocks"] = c.model.num_blocks;
  j["attention_dim"] = c.model.attention_dim;
  j["hidden_size"] = c.model.hidden_size;
  j["num_sources"] = c.model.num_sources;
  j["causal"] = c.model.causal;
  j["binaural"] = c.model.binaural;
  j["sample_rate"] = c.model.sample_rate;
  j["mode"] = std::string(ModeName(c.stream.mode));
  j["history_ms"] = c.stream.history_ms;
  if (c.stream.attention_history_chunks) {
    j["attention_history_chunks"] = *c.stream.attention_history_chunks;
  } else {
    j["attention_history_chunks"] = "unbounded";
  }
  return j;
}

json BaseManifest(const std::string& command, const CommonFlags& flags,
                  const RunConfig& config) {
  json j;
  j["command"] = command;
  j["argv"] = flags.argv;
  j["seed"] = flags.seed;
  j["config"] = ConfigJson(config);
  return j;
}

void WriteJson(const fs::path& path, const json& j) {
  std::ofstream f(path);
  if (!f) throw InputError("cannot write " + path.string());
  f << j.dump(2) << "\n";
}

void EnsureDir(const std::string& dir) {
  if (dir.empty()) throw InputError("an output directory is required (--out)");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InputError("cannot create " + dir + ": " + ec.message());
}

json WriteOutput(const fs::path& path, const SignalBundle& audio, SampleFormat format) {
  WriteWav(path.string(), audio, format);
  return {{"path", path.string()},
          {"sha256", FileSha256(path.string())},
          {"samples", audio.length()}};
}

// Loads one multichannel file or several mono files as one bundle.
SignalBundle LoadInputs(const std::vector<std::string>& paths) {
  if (paths.empty()) throw InputError("no input files given");
  if (paths.size() == 1) return ReadWav(paths[0]).audio;
  SignalBundle out;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    SignalBundle b = ReadWav(paths[i]).audio;
    if (b.channels.size() != 1) {
      throw InputError(paths[i] + " must be mono when several inputs are given");
    }
    if (i == 0) out.sample_rate = b.sample_rate;
    if (b.sample_rate != out.sample_rate) {
      throw InputError(paths[i] + " has a different sample rate");
    }
    if (i > 0 && b.length() != out.length()) {
      throw InputError(paths[i] + " has a different length");
    }
    out.channels.push_back(std::move(b.channels[0]));
  }
  return out;
}

void CheckModelInput(const ModelConfig& config, const SignalBundle& input) {
  const std::size_t want = config.input_channels();
  if (input.channels.size() != want) {
    throw InputError(std::string(input.channels.size() == 2 ? "stereo" : "mono") +
                     " input (" + std::to_string(input.channels.size()) +
                     " channel(s)) does not fit a " +
                     (config.binaural ? "binaural" : "monaural") + " model, which needs " +
                     std::to_string(want));
  }
  if (input.sample_rate != config.sample_rate) {
    throw InputError("input sample rate " + std::to_string(input.sample_rate) +
                     " Hz differs from the model's " +
                     std::to_string(config.sample_rate) + " Hz; resample first");
  }
}

std::string CsvLatencyFields(const LatencyReport& r) {
  return FormatFixed4(r.segment_ms) + "," + FormatFixed4(r.rtf) + "," +
         FormatFixed4(r.future_context_ms) + "," + FormatFixed4(r.total_latency_ms);
}

void CheckLatencyRow(const LatencyReport& r) {
  if (r.total_latency_ms != r.segment_ms + r.rtf * r.segment_ms + r.future_context_ms) {
    throw ContractError("latency report is internally inconsistent");
  }
}

}  // namespace

std::string FormatFixed4(double value) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(4) << value;
  return os.str();
}

std::string Sha256Hex(const std::vector<std::uint8_t>& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw ContractError("SHA-256 digest failed");
  }
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) {
    os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  }
  return os.str();
}

std::string FileSha256(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return Sha256Hex(bytes);
}

RunConfig ResolveConfig(const CommonFlags& flags) {
  RunConfig config;
  if (!flags.config_path.empty()) config = LoadConfigFile(flags.config_path);
  if (flags.mode) ApplyConfigValue(config, "mode", *flags.mode);
  if (flags.history_ms) config.stream.history_ms = *flags.history_ms;
  if (flags.attention_history_chunks) {
    ApplyConfigValue(config, "attention_history_chunks", *flags.attention_history_chunks);
  }
  config.model.Validate();
  config.stream.Validate();
  return config;
}

int CmdInitWeights(const InitWeightsArgs& args, std::ostream& out, std::ostream&) {
  const RunConfig config = ResolveConfig(args.common);
  if (args.out_path.empty()) throw InputError("an output path is required (--out)");
  const WeightContainer w =
      InitWeights(config.model, args.common.seed, InitOptions{args.zero_bias});
  SaveWeights(w, args.out_path);
  out << "wrote " << w.size() << " tensors to " << args.out_path << "\n"
      << "sha256 " << FileSha256(args.out_path) << "\n";
  return 0;
}

int CmdSeparate(const SeparateArgs& args, std::ostream& out, std::ostream&) {
  // "offline" is a separation mode but not a stream mode; keep it out of the
  // stream config.
  CommonFlags flags = args.common;
  std::string mode = args.separate_mode;
  if (flags.mode == "offline") {
    if (mode.empty()) mode = "offline";
    flags.mode.reset();
  }
  const RunConfig config = ResolveConfig(flags);
  if (mode.empty()) mode = std::string(ModeName(config.stream.mode));
  if (args.weights_path.empty()) throw InputError("--weights is required");
  if (mode != "offline" && mode != "stateless" && mode != "stateful") {
    throw ConfigError("unknown separation mode '" + mode + "'");
  }
  const SignalBundle input = LoadInputs(args.inputs);
  CheckModelInput(config.model, input);
  const auto model = LoadModel(args.weights_path, config, args.common.seed);
  const Separator& sep = *model->separator;
  EnsureDir(args.out_dir);

  StreamConfig stream = config.stream;
  const auto t0 = Clock::now();
  SeparationResult result;
  if (mode == "offline") {
    result = sep.ForwardOffline(input);
  } else {
    stream.mode = mode == "stateful" ? StreamMode::kStateful : StreamMode::kStateless;
    result = RunStream(sep, input, stream);
  }
  const double seconds = SecondsSince(t0);
  const double audio_s = static_cast<double>(input.length()) / input.sample_rate;

  json manifest = BaseManifest("separate", args.common, config);
  manifest["mode"] = mode;
  manifest["weights"] = {{"path", args.weights_path}, {"sha256", model->digest}};
  for (const std::string& p : args.inputs) {
    manifest["inputs"].push_back({{"path", p}, {"sha256", FileSha256(p)}});
  }
  manifest["timings"] = {{"seconds", seconds},
                         {"audio_seconds", audio_s},
                         {"rtf", audio_s > 0 ? seconds / audio_s : 0.0}};
  manifest["trimmed_length"] = result.trimmed_length;
  if (mode != "offline") {
    const SeparationResult offline = sep.ForwardOffline(input);
    manifest["offline_max_abs_diff"] = MaxSourceDiff(result.sources, offline.sources);
  }
  for (std::size_t c = 0; c < result.sources.size(); ++c) {
    for (std::size_t e = 0; e < result.sources[c].size(); ++e) {
      SignalBundle b{input.sample_rate, {result.sources[c][e]}};
      const fs::path p = fs::path(args.out_dir) /
                         ("src" + std::to_string(c) + "_ch" + std::to_string(e) + ".wav");
      manifest["outputs"].push_back(WriteOutput(p, b, args.format));
    }
  }
  WriteJson(fs::path(args.out_dir) / "manifest.json", manifest);
  out << "separated " << input.length() << " samples (" << mode << ") into "
      << args.out_dir << "\n";
  if (manifest.contains("offline_max_abs_diff")) {
    out << "max |" << mode << " - offline| = "
        << manifest["offline_max_abs_diff"].get<double>() << "\n";
  }
  return 0;
}

int CmdBench(const BenchArgs& args, std::ostream& out, std::ostream&) {
  const RunConfig config = ResolveConfig(args.common);
  const auto model = LoadModel(args.weights_path, config, args.common.seed);
  out << "mode,R,segment_ms,rtf,future_context_ms,total_latency_ms,history_ms\n";
  for (const std::string& m : args.modes) {
    StreamConfig stream = config.stream;
    stream.mode = ParseMode(m);
    const RtfMeasurement rtf = MeasureRtf(
        *model->separator, stream, {args.duration_s, args.repetitions, args.common.seed});
    CheckLatencyRow(rtf.report);
    out << m << "," << config.model.chunk_size << "," << CsvLatencyFields(rtf.report)
        << ","
        << (stream.mode == StreamMode::kStateless ? FormatFixed4(stream.history_ms)
                                                  : std::string("n/a"))
        << "\n";
  }
  return 0;
}

int CmdSweep(const SweepArgs& args, std::ostream& out, std::ostream& err) {
  const RunConfig base = ResolveConfig(args.common);
  const bool have_eval = !args.eval_mixture.empty();
  SignalBundle eval_mix;
  std::vector<Waveform> eval_refs;
  if (have_eval) {
    eval_mix = ReadWav(args.eval_mixture).audio;
    for (const std::string& p : args.eval_references) {
      SignalBundle r = ReadWav(p).audio;
      if (r.channels.size() != 1) throw InputError(p + " must be mono");
      eval_refs.push_back(std::move(r.channels[0]));
    }
    if (eval_refs.size() != base.model.num_sources) {
      throw InputError("expected one reference per source");
    }
  }
  out << "R,segment_ms,rtf,future_context_ms,total_latency_ms,quality\n";
  for (std::size_t r : args.chunk_sizes) {
    RunConfig config = base;
    config.model.chunk_size = r;
    config.model.Validate();
    const fs::path path = fs::path(args.weights_dir) / ("R" + std::to_string(r) + ".ntwc");
    if (!fs::exists(path)) {
      err << "warning: " << path.string() << " not found; skipping R=" << r << "\n";
      continue;
    }
    const auto model = LoadModel(path.string(), config, args.common.seed);
    StreamConfig stream = config.stream;
    stream.mode = StreamMode::kStateful;
    const double rtf = args.assume_rtf
                           ? *args.assume_rtf
                           : MeasureRtf(*model->separator, stream,
                                        {args.duration_s, args.repetitions, args.common.seed})
                                 .report.rtf;
    const LatencyReport report = MakeLatencyReport(config.model, rtf);
    CheckLatencyRow(report);
    std::string quality = "untrained";
    if (have_eval) {
      CheckModelInput(config.model, eval_mix);
      const SeparationResult res = RunStateful(*model->separator, eval_mix, stream);
      quality = FormatFixed4(ImprovementOverMixture(eval_mix.channels[0], eval_refs,
                                                    ConcatChannels(res.sources),
                                                    Metric::kSiSnr)
                                 .mean);
    }
    out << r << "," << CsvLatencyFields(report) << "," << quality << "\n";
  }
  return 0;
}

int CmdVerify(const VerifyArgs& args, std::ostream& out, std::ostream&) {
  const RunConfig config = ResolveConfig(args.common);
  if (args.trials == 0) {
    out << "0 suites run (trials=0): pass\n";
    return 0;
  }
  const auto model = LoadModel(args.weights_path, config, args.common.seed);
  VerifyOptions options;
  options.trials = args.trials;
  options.seed = args.common.seed;
  options.lookahead_offset = args.lookahead_offset;
  options.include_rtf = args.include_rtf;
  const auto results = RunVerifySuites(*model->separator, options);
  for (const CriterionResult& r : results) {
    out << (r.skipped ? "SKIP" : r.passed ? "PASS" : "FAIL") << " " << r.name << ": "
        << r.detail << "\n";
  }
  const bool ok = AllPassed(results);
  out << (ok ? "all suites passed" : "some suites FAILED") << "\n";
  return ok ? 0 : 1;
}

int CmdMix(const MixArgs& args, std::ostream& out, std::ostream&) {
  if (args.sources.empty()) throw InputError("at least one --source is required");
  std::vector<Waveform> sources;
  int rate = 0;
  for (const std::string& p : args.sources) {
    SignalBundle b = ReadWav(p).audio;
    if (b.channels.size() != 1) throw InputError(p + " must be mono");
    if (rate == 0) rate = b.sample_rate;
    if (b.sample_rate != rate) throw InputError(p + " has a different sample rate");
    sources.push_back(std::move(b.channels[0]));
  }
  const std::vector<float> gains =
      args.gains.empty() ? MixSpec::DefaultGains(sources.size(), args.common.seed)
                         : args.gains;

  std::vector<std::vector<Waveform>> irs;
  if (args.impulse_responses.empty()) {
    irs.assign(sources.size(), {Waveform{1.0f}});
  } else {
    if (args.impulse_responses.size() != sources.size()) {
      throw InputError("give one impulse response file per source");
    }
    for (const std::string& p : args.impulse_responses) {
      SignalBundle b = ReadWav(p).audio;
      if (b.sample_rate != rate) throw InputError(p + " has a different sample rate");
      irs.push_back(std::move(b.channels));
    }
  }
  std::vector<Waveform> noise;
  if (!args.noise.empty()) {
    SignalBundle b = ReadWav(args.noise).audio;
    if (b.sample_rate != rate) throw InputError(args.noise + " has a different sample rate");
    noise = std::move(b.channels);
    if (!args.snr_db) throw InputError("--snr is required with --noise");
  } else if (args.snr_db) {
    throw InputError("--snr needs --noise");
  }
  const MixResult mix = MixReverberant(sources, gains, irs, noise, args.snr_db);

  EnsureDir(args.out_dir);
  json manifest = BaseManifest("mix", args.common, RunConfig{});
  manifest.erase("config");
  manifest["gains"] = gains;
  manifest["gain_distribution"] = args.gains.empty() ? "uniform[0.9,1.1]" : "given";
  manifest["snr_reference"] = "summed clean mixture, energy over all channels";
  if (args.snr_db) manifest["snr_db"] = *args.snr_db;
  manifest["noise_gain"] = mix.noise_gain;
  manifest["outputs"].push_back(WriteOutput(fs::path(args.out_dir) / "mixture.wav",
                                            {rate, mix.mixture}, args.format));
  for (std::size_t j = 0; j < mix.images.size(); ++j) {
    manifest["outputs"].push_back(
        WriteOutput(fs::path(args.out_dir) / ("image" + std::to_string(j) + ".wav"),
                    {rate, mix.images[j]}, args.format));
  }
  WriteJson(fs::path(args.out_dir) / "manifest.json", manifest);
  out << "mixed " << sources.size() << " sources into " << args.out_dir << "\n";
  return 0;
}

}  // namespace sagrnn
