// Copyright 2026 The sagrnn-stream Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "sagrnn/nn.h"

#include <algorithm>
#include <cmath>

#include "sagrnn/error.h"

namespace sagrnn {

Tensor Linear(const Tensor& x, const Tensor& weight, const Tensor* bias) {
  if (x.rank() != 2 || weight.rank() != 2 || x.dim(1) != weight.dim(0)) {
    throw ConfigError("Linear: cannot multiply " + ShapeString(x.shape()) +
                      " by " + ShapeString(weight.shape()));
  }
  const std::size_t rows = x.dim(0), in = x.dim(1), out = weight.dim(1);
  if (bias && bias->size() != out) {
    throw ConfigError("Linear: bias " + ShapeString(bias->shape()) +
                      " does not match output width " + std::to_string(out));
  }
  Tensor y({rows, out});
  const float* w = weight.data();
  for (std::size_t m = 0; m < rows; ++m) {
    float* yr = y.data() + m * out;
    if (bias) std::copy(bias->data(), bias->data() + out, yr);
    const float* xr = x.data() + m * in;
    for (std::size_t a = 0; a < in; ++a) {
      const float xa = xr[a];
      const float* wr = w + a * out;
      for (std::size_t b = 0; b < out; ++b) yr[b] += xa * wr[b];
    }
  }
  return y;
}

Tensor CausalConv1d(const Tensor& x, const Tensor& kernel, std::size_t stride) {
  if (stride < 1) throw ConfigError("CausalConv1d: stride must be >= 1");
  if (x.rank() != 2 || kernel.rank() != 3 || kernel.dim(1) != x.dim(0)) {
    throw ConfigError("CausalConv1d: input " + ShapeString(x.shape()) +
                      " incompatible with kernel " +
                      ShapeString(kernel.shape()));
  }
  const std::size_t cin = x.dim(0), len = x.dim(1);
  const std::size_t cout = kernel.dim(0), k = kernel.dim(2);
  if (len < k) {
    throw InsufficientInputError("CausalConv1d: " + std::to_string(len) +
                                 " samples, kernel needs " + std::to_string(k));
  }
  const std::size_t frames = (len - k) / stride + 1;
  Tensor y({cout, frames});
  for (std::size_t o = 0; o < cout; ++o) {
    float* yr = y.data() + o * frames;
    for (std::size_t c = 0; c < cin; ++c) {
      const float* kr = kernel.data() + (o * cin + c) * k;
      const float* xr = x.data() + c * len;
      for (std::size_t t = 0; t < frames; ++t) {
        const float* xs = xr + t * stride;
        float acc = 0.0f;
        for (std::size_t j = 0; j < k; ++j) acc += kr[j] * xs[j];
        yr[t] += acc;
      }
    }
  }
  return y;
}

void ReluInPlace(std::span<float> x) {
  for (float& v : x) v = v > 0.0f ? v : 0.0f;
}

void PreluInPlace(std::span<float> x, float slope) {
  for (float& v : x) v = v >= 0.0f ? v : slope * v;
}

float Sigmoid(float x) { return 1.0f / (1.0f + std::exp(-x)); }

void SoftmaxRowsInPlace(Tensor& x) {
  if (x.rank() != 2) throw ConfigError("SoftmaxRowsInPlace: rank-2 input required");
  for (std::size_t i = 0; i < x.dim(0); ++i) {
    auto r = x.row(i);
    float mx = *std::max_element(r.begin(), r.end());
    float sum = 0.0f;
    for (float& v : r) {
      v = std::exp(v - mx);
      sum += v;
    }
    for (float& v : r) v /= sum;
  }
}

}  // namespace sagrnn
