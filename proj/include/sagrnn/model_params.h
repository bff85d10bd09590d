// Copyright 2026 The sagrnn-stream Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

// Parameter naming, initialization and binding. The full naming table lives
// in docs/parameters.md.

#ifndef SAGRNN_MODEL_PARAMS_H_
#define SAGRNN_MODEL_PARAMS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "sagrnn/model_config.h"
#include "sagrnn/nn.h"
#include "sagrnn/weights.h"

namespace sagrnn {

enum class ParamInit {
  kUniform,    // U(-k, k), k = 1/sqrt(fan_in)
  kBias,       // like kUniform, or zero when biases are disabled
  kOnes,       // gains and layer scales
  kZeros,      // normalization offsets
  kPreluSlope  // 0.25
};

struct ParamSpec {
  std::string name;
  Shape shape;
  ParamInit init;
  std::size_t fan_in = 1;
};

// Parameters required by `config`, in a fixed declaration order.
std::vector<ParamSpec> ParameterSpecs(const ModelConfig& config);

struct InitOptions {
  // Zero every bias and normalization offset; a silent input then maps to a
  // silent output.
  bool zero_bias = false;
};

// Deterministic: the same (config, seed, options) gives identical tensors.
WeightContainer InitWeights(const ModelConfig& config, std::uint64_t seed,
                            const InitOptions& options = {});

struct AttentionParams {
  const Tensor* query_w;
  const Tensor* query_b;
  const Tensor* key_w;
  const Tensor* key_b;
  const Tensor* value_w;
  const Tensor* value_b;
  const Tensor* out_w;    // [D x N]
  const Tensor* out_b;
  const Tensor* merge_w;  // [2N x N], skip concat projection
  const Tensor* merge_b;
};

struct GatedRnnParams {
  LstmWeights lstm;
  const Tensor* tanh_w;     // [H*dirs x N]
  const Tensor* tanh_b;
  const Tensor* sigmoid_w;  // [H*dirs x N]
  const Tensor* sigmoid_b;
  const Tensor* scale;      // [N]
};

struct AxisParams {
  AttentionParams attention;
  GatedRnnParams rnn;
};

struct DecoderParams {
  const Tensor* prelu;   // [1]
  const Tensor* conv_w;  // [N x C*N]
  const Tensor* conv_b;  // [C*N]
  const Tensor* basis;   // [N x P], frame synthesis
};

struct BlockParams {
  AxisParams intra;
  AxisParams inter;
  const Tensor* norm_gain;
  const Tensor* norm_bias;
  DecoderParams decoder;
};

struct EncoderParams {
  const Tensor* kernel = nullptr;  // monaural [N x 1 x P]
  const Tensor* ref_kernel = nullptr;
  const Tensor* nonref_kernel = nullptr;
  const Tensor* proj_w = nullptr;  // [2N x N]
  const Tensor* proj_b = nullptr;
};

// Non-owning views into a WeightContainer, validated against a config once.
struct ModelParams {
  EncoderParams encoder;
  std::vector<BlockParams> blocks;

  // Throws ConfigError on any missing name or shape mismatch.
  static ModelParams Bind(const ModelConfig& config,
                          const WeightContainer& weights);
};

}  // namespace sagrnn

#endif  // SAGRNN_MODEL_PARAMS_H_
