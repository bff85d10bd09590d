// Copyright 2026 The sagrnn-stream Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

// sagrnn: separate, stream, benchmark and verify a causal SAGRNN separator.

#include <iostream>
#include <stdexcept>

#include "CLI11.hpp"
#include "commands.h"

namespace {

void AddCommon(CLI::App* cmd, sagrnn::CommonFlags& f) {
  cmd->add_option("--config", f.config_path, "key=value model/stream config file");
  cmd->add_option("--seed", f.seed, "seed for all randomness");
  cmd->add_option("--mode", f.mode,
                  "stream mode: stateful | stateless (separate also takes offline)");
  cmd->add_option("--history-ms", f.history_ms, "stateless history in ms");
  cmd->add_option("--attn-history-chunks", f.attention_history_chunks,
                  "past chunks for inter-chunk attention, or 'unbounded'");
}

void AddFormat(CLI::App* cmd, sagrnn::SampleFormat& format) {
  cmd->add_option("--format", format, "output sample format: pcm16 | float32")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, sagrnn::SampleFormat>{
              {"pcm16", sagrnn::SampleFormat::kPcm16},
              {"float32", sagrnn::SampleFormat::kFloat32}},
          CLI::ignore_case));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Causal SAGRNN speech separation: offline, stateless and stateful"};
  app.require_subcommand(1);

  sagrnn::InitWeightsArgs init;
  auto* init_cmd = app.add_subcommand("init-weights", "write seeded random weights");
  AddCommon(init_cmd, init.common);
  init_cmd->add_option("--out", init.out_path, "output .ntwc file")->required();
  init_cmd->add_flag("--zero-bias", init.zero_bias, "zero every bias and norm offset");

  sagrnn::SeparateArgs sep;
  auto* sep_cmd = app.add_subcommand("separate", "separate wav file(s)");
  AddCommon(sep_cmd, sep.common);
  sep_cmd->add_option("inputs", sep.inputs, "mono/stereo wav, or two mono wavs")
      ->required();
  sep_cmd->add_option("--weights", sep.weights_path, "weight file")->required();
  sep_cmd->add_option("--run", sep.separate_mode,
                      "offline | stateless | stateful (overrides --mode)")
      ->check(CLI::IsMember({"offline", "stateless", "stateful"}));
  sep_cmd->add_option("--out", sep.out_dir, "output directory")->required();
  AddFormat(sep_cmd, sep.format);

  sagrnn::BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "measure RTF and latency (CSV)");
  AddCommon(bench_cmd, bench.common);
  bench_cmd->add_option("--weights", bench.weights_path, "weight file (default: random)");
  bench_cmd->add_option("--duration", bench.duration_s, "seconds of audio (>= 10)");
  bench_cmd->add_option("--reps", bench.repetitions, "timed repetitions");
  bench_cmd->add_option("--modes", bench.modes, "stream modes to time");

  sagrnn::SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "segment-size sweep (CSV)");
  AddCommon(sweep_cmd, sweep.common);
  sweep_cmd->add_option("--weights-dir", sweep.weights_dir, "directory with R<r>.ntwc")
      ->required();
  sweep_cmd->add_option("--chunk-sizes", sweep.chunk_sizes, "R values")->delimiter(',');
  sweep_cmd->add_option("--duration", sweep.duration_s, "seconds of audio per row");
  sweep_cmd->add_option("--reps", sweep.repetitions, "timed repetitions");
  sweep_cmd->add_option("--rtf", sweep.assume_rtf, "use this RTF instead of timing");
  sweep_cmd->add_option("--eval-mixture", sweep.eval_mixture, "mixture wav for quality");
  sweep_cmd->add_option("--eval-references", sweep.eval_references, "reference wavs")
      ->delimiter(',');

  sagrnn::VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "run the property suites");
  AddCommon(verify_cmd, verify.common);
  verify_cmd->add_option("--weights", verify.weights_path, "weight file (default: random)");
  verify_cmd->add_option("--trials", verify.trials, "trials per suite");
  verify_cmd->add_option("--lookahead-offset", verify.lookahead_offset,
                         "samples added to the declared lookahead in the causality probe");
  verify_cmd->add_flag("--rtf", verify.include_rtf, "also check the RTF ordering (slow)");

  sagrnn::MixArgs mix;
  auto* mix_cmd = app.add_subcommand("mix", "synthesize an evaluation mixture");
  AddCommon(mix_cmd, mix.common);
  mix_cmd->add_option("--source", mix.sources, "mono source wav (repeat)")->required();
  mix_cmd->add_option("--gains", mix.gains, "linear gains")->delimiter(',');
  mix_cmd->add_option("--noise", mix.noise, "noise wav");
  mix_cmd->add_option("--snr", mix.snr_db, "noise SNR in dB");
  mix_cmd->add_option("--ir", mix.impulse_responses, "impulse response wav per source");
  mix_cmd->add_option("--out", mix.out_dir, "output directory")->required();
  AddFormat(mix_cmd, mix.format);

  CLI11_PARSE(app, argc, argv);
  const std::vector<std::string> args(argv, argv + argc);
  for (sagrnn::CommonFlags* f : {&init.common, &sep.common, &bench.common, &sweep.common,
                                 &verify.common, &mix.common}) {
    f->argv = args;
  }

  try {
    if (*init_cmd) return sagrnn::CmdInitWeights(init, std::cout, std::cerr);
    if (*sep_cmd) return sagrnn::CmdSeparate(sep, std::cout, std::cerr);
    if (*bench_cmd) return sagrnn::CmdBench(bench, std::cout, std::cerr);
    if (*sweep_cmd) return sagrnn::CmdSweep(sweep, std::cout, std::cerr);
    if (*verify_cmd) return sagrnn::CmdVerify(verify, std::cout, std::cerr);
    if (*mix_cmd) return sagrnn::CmdMix(mix, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
