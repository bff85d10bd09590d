// Copyright 2026 The sagrnn-stream Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <algorithm>
#include <cmath>

#include "sagrnn/error.h"
#include "sagrnn/nn.h"

namespace sagrnn {

namespace {

struct KeyRange {
  std::size_t begin;
  std::size_t end;  // exclusive
};

KeyRange AllowedKeys(std::size_t query, std::size_t num_queries,
                     std::size_t num_keys, const AttentionMask& mask) {
  if (!mask.causal) return {0, num_keys};
  const std::size_t pos = (num_keys - num_queries) + query;
  std::size_t begin = 0;
  if (mask.max_history && pos > *mask.max_history) {
    begin = pos - *mask.max_history;
  }
  return {begin, pos + 1};
}

void CheckShapes(const Tensor& q, const Tensor& k, const AttentionMask& mask) {
  if (q.rank() != 2 || k.rank() != 2 || q.dim(1) != k.dim(1)) {
    throw ConfigError("attention: query " + ShapeString(q.shape()) +
                      " and key " + ShapeString(k.shape()) + " disagree");
  }
  if (mask.causal && k.dim(0) < q.dim(0)) {
    throw ConfigError("attention: causal mask needs at least as many keys as queries");
  }
  if (!mask.causal && mask.max_history) {
    throw ConfigError("attention: max_history is only meaningful with a causal mask");
  }
}

}  // namespace

Tensor AttentionWeights(const Tensor& q, const Tensor& k,
                        const AttentionMask& mask) {
  CheckShapes(q, k, mask);
  const std::size_t m = q.dim(0), mk = k.dim(0), d = q.dim(1);
  const float scale = 1.0f / std::sqrt(static_cast<float>(d));
  Tensor w({m, mk});
  for (std::size_t i = 0; i < m; ++i) {
    const KeyRange range = AllowedKeys(i, m, mk, mask);
    const float* qi = q.data() + i * d;
    float* wi = w.data() + i * mk;
    float mx = -INFINITY;
    for (std::size_t j = range.begin; j < range.end; ++j) {
      const float* kj = k.data() + j * d;
      float dot = 0.0f;
      for (std::size_t c = 0; c < d; ++c) dot += qi[c] * kj[c];
      wi[j] = dot * scale;
      mx = std::max(mx, wi[j]);
    }
    float sum = 0.0f;
    for (std::size_t j = range.begin; j < range.end; ++j) {
      wi[j] = std::exp(wi[j] - mx);
      sum += wi[j];
    }
    for (std::size_t j = range.begin; j < range.end; ++j) wi[j] /= sum;
  }
  return w;
}

Tensor ScaledDotAttention(const Tensor& q, const Tensor& k, const Tensor& v,
                          const AttentionMask& mask) {
  if (v.rank() != 2 || v.dim(0) != k.dim(0)) {
    throw ConfigError("attention: value " + ShapeString(v.shape()) +
                      " does not match key " + ShapeString(k.shape()));
  }
  const Tensor w = AttentionWeights(q, k, mask);
  const std::size_t m = q.dim(0), mk = k.dim(0), dv = v.dim(1);
  Tensor out({m, dv});
  for (std::size_t i = 0; i < m; ++i) {
    const KeyRange range = AllowedKeys(i, m, mk, mask);
    float* oi = out.data() + i * dv;
    for (std::size_t j = range.begin; j < range.end; ++j) {
      const float wij = w.at(i, j);
      const float* vj = v.data() + j * dv;
      for (std::size_t c = 0; c < dv; ++c) oi[c] += wij * vj[c];
    }
  }
  return out;
}

}  // namespace sagrnn
