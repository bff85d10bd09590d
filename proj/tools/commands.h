// Copyright 2026 The sagrnn-stream Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

// The sagrnn command verbs, callable without a process boundary. Each command
// writes its report to `out`, warnings to `err`, and returns an exit code.

#ifndef SAGRNN_TOOLS_COMMANDS_H_
#define SAGRNN_TOOLS_COMMANDS_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sagrnn/config_file.h"
#include "sagrnn/wav.h"

namespace sagrnn {

// Flags shared by every verb.
struct CommonFlags {
  std::string config_path;  // optional key=value file
  std::uint64_t seed = 0;
  std::optional<std::string> mode;
  std::optional<double> history_ms;
  std::optional<std::string> attention_history_chunks;  // integer or "unbounded"
  std::vector<std::string> argv;  // recorded in manifests
};

// Config file (if any) with the flag overrides applied.
RunConfig ResolveConfig(const CommonFlags& flags);

std::string Sha256Hex(const std::vector<std::uint8_t>& bytes);
std::string FileSha256(const std::string& path);

struct InitWeightsArgs {
  CommonFlags common;
  std::string out_path;
  bool zero_bias = false;
};
int CmdInitWeights(const InitWeightsArgs& args, std::ostream& out, std::ostream& err);

struct SeparateArgs {
  CommonFlags common;
  std::vector<std::string> inputs;  // one mono/stereo file, or two mono files
  std::string weights_path;
  // offline | stateless | stateful. Empty: --mode, else the configured mode.
  std::string separate_mode;
  std::string out_dir;
  SampleFormat format = SampleFormat::kFloat32;
};
// Writes src<c>_ch<e>.wav per source and output channel plus manifest.json.
// Streaming modes also record the max abs difference to the offline forward.
int CmdSeparate(const SeparateArgs& args, std::ostream& out, std::ostream& err);

struct BenchArgs {
  CommonFlags common;
  std::string weights_path;  // empty: random weights from the seed
  double duration_s = 10.0;
  std::size_t repetitions = 3;
  std::vector<std::string> modes = {"stateful", "stateless"};
};
// CSV: mode,R,segment_ms,rtf,future_context_ms,total_latency_ms,history_ms
int CmdBench(const BenchArgs& args, std::ostream& out, std::ostream& err);

struct SweepArgs {
  CommonFlags common;
  std::string weights_dir;  // holds R<r>.ntwc per chunk size
  std::vector<std::size_t> chunk_sizes = {32, 64, 128, 256};
  double duration_s = 10.0;
  std::size_t repetitions = 3;
  std::optional<double> assume_rtf;  // skip timing and use this RTF
  // Optional evaluation data for the quality column.
  std::string eval_mixture;
  std::vector<std::string> eval_references;
};
// CSV: R,segment_ms,rtf,future_context_ms,total_latency_ms,quality
int CmdSweep(const SweepArgs& args, std::ostream& out, std::ostream& err);

struct VerifyArgs {
  CommonFlags common;
  std::string weights_path;  // empty: random weights from the seed
  std::size_t trials = 5;
  std::ptrdiff_t lookahead_offset = 0;
  bool include_rtf = false;
};
int CmdVerify(const VerifyArgs& args, std::ostream& out, std::ostream& err);

struct MixArgs {
  CommonFlags common;
  std::vector<std::string> sources;       // mono wav per source
  std::vector<float> gains;               // empty: U[0.9, 1.1] from the seed
  std::string noise;                      // optional wav, one channel per output
  std::optional<double> snr_db;
  std::vector<std::string> impulse_responses;  // one wav per source
  std::string out_dir;
  SampleFormat format = SampleFormat::kFloat32;
};
// Writes mixture.wav, image<j>.wav (scaled, reverberated sources) and
// manifest.json.
int CmdMix(const MixArgs& args, std::ostream& out, std::ostream& err);

// Fixed 4-decimal formatting used for every numeric CSV field.
std::string FormatFixed4(double value);

}  // namespace sagrnn

#endif  // SAGRNN_TOOLS_COMMANDS_H_
