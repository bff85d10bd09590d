// Copyright 2026 The sagrnn-stream Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "sagrnn/model_params.h"

#include <cmath>
#include <map>
#include <random>

#include "sagrnn/error.h"

namespace sagrnn {

namespace {

const char* AxisName(bool inter) { return inter ? "inter" : "intra"; }

std::string BlockPrefix(std::size_t b) { return "block" + std::to_string(b) + "."; }

bool AxisIsBidirectional(const ModelConfig& config) { return !config.causal; }

void AddLinear(std::vector<ParamSpec>& specs, const std::string& name,
               std::size_t in, std::size_t out) {
  specs.push_back({name + ".weight", {in, out}, ParamInit::kUniform, in});
  specs.push_back({name + ".bias", {out}, ParamInit::kBias, in});
}

void AddLstmDirection(std::vector<ParamSpec>& specs, const std::string& name,
                      std::size_t in, std::size_t hidden) {
  specs.push_back({name + ".w_ih", {in, 4 * hidden}, ParamInit::kUniform, in});
  specs.push_back({name + ".w_hh", {hidden, 4 * hidden}, ParamInit::kUniform, hidden});
  specs.push_back({name + ".bias", {4 * hidden}, ParamInit::kBias, hidden});
}

}  // namespace

std::vector<ParamSpec> ParameterSpecs(const ModelConfig& config) {
  config.Validate();
  const std::size_t n = config.channels, p = config.frame_size,
                    d = config.attention_dim, h = config.hidden_size,
                    c = config.num_sources;
  const std::size_t dirs = AxisIsBidirectional(config) ? 2 : 1;
  std::vector<ParamSpec> specs;
  if (config.binaural) {
    specs.push_back({"encoder.ref.kernel", {n, 1, p}, ParamInit::kUniform, p});
    specs.push_back({"encoder.nonref.kernel", {n, 1, p}, ParamInit::kUniform, p});
    AddLinear(specs, "encoder.proj", 2 * n, n);
  } else {
    specs.push_back({"encoder.kernel", {n, 1, p}, ParamInit::kUniform, p});
  }
  for (std::size_t b = 0; b < config.num_blocks; ++b) {
    const std::string block = BlockPrefix(b);
    for (bool inter : {false, true}) {
      const std::string axis = block + AxisName(inter) + ".";
      AddLinear(specs, axis + "attn.query", n, d);
      AddLinear(specs, axis + "attn.key", n, d);
      AddLinear(specs, axis + "attn.value", n, d);
      AddLinear(specs, axis + "attn.out", d, n);
      AddLinear(specs, axis + "attn.merge", 2 * n, n);
      AddLstmDirection(specs, axis + "rnn.fwd", n, h);
      if (dirs == 2) AddLstmDirection(specs, axis + "rnn.bwd", n, h);
      AddLinear(specs, axis + "rnn.gate_tanh", h * dirs, n);
      AddLinear(specs, axis + "rnn.gate_sigmoid", h * dirs, n);
      specs.push_back({axis + "rnn.scale", {n}, ParamInit::kOnes, 1});
    }
    specs.push_back({block + "norm.gain", {n}, ParamInit::kOnes, 1});
    specs.push_back({block + "norm.bias", {n}, ParamInit::kZeros, 1});
    specs.push_back({block + "decoder.prelu", {1}, ParamInit::kPreluSlope, 1});
    AddLinear(specs, block + "decoder.conv", n, c * n);
    specs.push_back({block + "decoder.basis", {n, p}, ParamInit::kUniform, n});
  }
  return specs;
}

WeightContainer InitWeights(const ModelConfig& config, std::uint64_t seed,
                            const InitOptions& options) {
  std::mt19937_64 gen(seed);
  // Map 53 random bits to [0, 1) explicitly; std distributions are not
  // specified bit-for-bit across standard libraries.
  auto uniform = [&gen](double bound) {
    const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    return static_cast<float>((2.0 * u - 1.0) * bound);
  };
  std::map<std::string, Tensor> entries;
  for (const ParamSpec& spec : ParameterSpecs(config)) {
    Tensor t(spec.shape);
    const double bound = 1.0 / std::sqrt(static_cast<double>(spec.fan_in));
    switch (spec.init) {
      case ParamInit::kUniform:
        for (float& v : t.span()) v = uniform(bound);
        break;
      case ParamInit::kBias:
        // Draw even when zeroing so both variants share the weight stream.
        for (float& v : t.span()) {
          float draw = uniform(bound);
          v = options.zero_bias ? 0.0f : draw;
        }
        break;
      case ParamInit::kOnes:
        for (float& v : t.span()) v = 1.0f;
        break;
      case ParamInit::kZeros:
        break;
      case ParamInit::kPreluSlope:
        for (float& v : t.span()) v = 0.25f;
        break;
    }
    entries.emplace(spec.name, std::move(t));
  }
  return WeightContainer(std::move(entries), seed);
}

namespace {

class Binder {
 public:
  explicit Binder(const WeightContainer& weights) : weights_(weights) {}

  const Tensor* Get(const std::string& name, const Shape& shape) const {
    return &weights_.Get(name, shape);
  }

 private:
  const WeightContainer& weights_;
};

}  // namespace

ModelParams ModelParams::Bind(const ModelConfig& config,
                              const WeightContainer& weights) {
  config.Validate();
  const std::size_t n = config.channels, p = config.frame_size,
                    d = config.attention_dim, h = config.hidden_size,
                    c = config.num_sources;
  const std::size_t dirs = AxisIsBidirectional(config) ? 2 : 1;
  Binder w(weights);
  ModelParams params;
  if (config.binaural) {
    params.encoder.ref_kernel = w.Get("encoder.ref.kernel", {n, 1, p});
    params.encoder.nonref_kernel = w.Get("encoder.nonref.kernel", {n, 1, p});
    params.encoder.proj_w = w.Get("encoder.proj.weight", {2 * n, n});
    params.encoder.proj_b = w.Get("encoder.proj.bias", {n});
  } else {
    params.encoder.kernel = w.Get("encoder.kernel", {n, 1, p});
  }
  auto lstm_dir = [&](const std::string& name) {
    return LstmDirectionWeights{w.Get(name + ".w_ih", {n, 4 * h}),
                                w.Get(name + ".w_hh", {h, 4 * h}),
                                w.Get(name + ".bias", {4 * h})};
  };
  for (std::size_t b = 0; b < config.num_blocks; ++b) {
    const std::string block = BlockPrefix(b);
    BlockParams bp;
    for (bool inter : {false, true}) {
      const std::string axis = block + AxisName(inter) + ".";
      AxisParams ap;
      AttentionParams& at = ap.attention;
      at.query_w = w.Get(axis + "attn.query.weight", {n, d});
      at.query_b = w.Get(axis + "attn.query.bias", {d});
      at.key_w = w.Get(axis + "attn.key.weight", {n, d});
      at.key_b = w.Get(axis + "attn.key.bias", {d});
      at.value_w = w.Get(axis + "attn.value.weight", {n, d});
      at.value_b = w.Get(axis + "attn.value.bias", {d});
      at.out_w = w.Get(axis + "attn.out.weight", {d, n});
      at.out_b = w.Get(axis + "attn.out.bias", {n});
      at.merge_w = w.Get(axis + "attn.merge.weight", {2 * n, n});
      at.merge_b = w.Get(axis + "attn.merge.bias", {n});
      GatedRnnParams& rnn = ap.rnn;
      rnn.lstm.forward = lstm_dir(axis + "rnn.fwd");
      if (dirs == 2) rnn.lstm.backward = lstm_dir(axis + "rnn.bwd");
      rnn.tanh_w = w.Get(axis + "rnn.gate_tanh.weight", {h * dirs, n});
      rnn.tanh_b = w.Get(axis + "rnn.gate_tanh.bias", {n});
      rnn.sigmoid_w = w.Get(axis + "rnn.gate_sigmoid.weight", {h * dirs, n});
      rnn.sigmoid_b = w.Get(axis + "rnn.gate_sigmoid.bias", {n});
      rnn.scale = w.Get(axis + "rnn.scale", {n});
      (inter ? bp.inter : bp.intra) = ap;
    }
    bp.norm_gain = w.Get(block + "norm.gain", {n});
    bp.norm_bias = w.Get(block + "norm.bias", {n});
    bp.decoder.prelu = w.Get(block + "decoder.prelu", {1});
    bp.decoder.conv_w = w.Get(block + "decoder.conv.weight", {n, c * n});
    bp.decoder.conv_b = w.Get(block + "decoder.conv.bias", {c * n});
    bp.decoder.basis = w.Get(block + "decoder.basis", {n, p});
    params.blocks.push_back(bp);
  }
  return params;
}

}  // namespace sagrnn
