// Copyright 2026 The sagrnn-stream Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

// Stateless neural primitives. Every function is pure; recurrent state is
// passed in and returned explicitly, so all of these are thread-safe.

#ifndef SAGRNN_NN_H_
#define SAGRNN_NN_H_

#include <cstddef>
#include <optional>
#include <span>

#include "sagrnn/tensor.h"

namespace sagrnn {

// y[m, b] = sum_a x[m, a] * weight[a, b] (+ bias[b]).
Tensor Linear(const Tensor& x, const Tensor& weight,
              const Tensor* bias = nullptr);

// x: [Cin x T], kernel: [Cout x Cin x K]. Output frame t reads input samples
// [t*stride, t*stride + K). No padding on either side; T < K throws
// InsufficientInputError.
Tensor CausalConv1d(const Tensor& x, const Tensor& kernel, std::size_t stride);

void ReluInPlace(std::span<float> x);
void PreluInPlace(std::span<float> x, float slope);
float Sigmoid(float x);

// Row-wise softmax of a rank-2 tensor.
void SoftmaxRowsInPlace(Tensor& x);

struct AttentionMask {
  // Query i may only see keys up to (M' - M) + i; the first M' - M keys are
  // history preceding the queries.
  bool causal = false;
  // With `causal`, additionally hide keys more than this many positions
  // before the query's own position. nullopt: unbounded.
  std::optional<std::size_t> max_history;
};

// Softmax(Q K^T / sqrt(D)) restricted to the allowed positions; masked
// entries are exactly zero. Q: [M x D], K: [M' x D].
Tensor AttentionWeights(const Tensor& q, const Tensor& k,
                        const AttentionMask& mask = {});
// V: [M' x Dv]. Masked value rows are never read.
Tensor ScaledDotAttention(const Tensor& q, const Tensor& k, const Tensor& v,
                          const AttentionMask& mask = {});

// ---------------------------------------------------------------------------
// LSTM

enum class Direction { kForward, kBidirectional };

// Gate layout along the 4H axis is (input, forget, cell, output).
struct LstmDirectionWeights {
  const Tensor* w_ih = nullptr;  // [I x 4H]
  const Tensor* w_hh = nullptr;  // [H x 4H]
  const Tensor* bias = nullptr;  // [4H]
};

struct LstmWeights {
  LstmDirectionWeights forward;
  std::optional<LstmDirectionWeights> backward;

  std::size_t hidden_size() const { return forward.w_hh->dim(0); }
  std::size_t input_size() const { return forward.w_ih->dim(0); }
};

// hidden and cell are [layers x directions x H] with a single layer.
struct LstmState {
  Tensor hidden;
  Tensor cell;

  static LstmState Zeros(std::size_t directions, std::size_t hidden_size);
  bool IsZero() const;
  bool AllFinite() const;
  bool operator==(const LstmState& other) const = default;
};

struct LstmResult {
  Tensor output;  // [T x H * directions], forward half first
  LstmState state;
};

// Runs the recurrence over all T rows of x. For kForward the returned state is
// the state after the last row, so Lstm(x1 ++ x2) == Lstm(x2, Lstm(x1).state).
// A nonzero incoming state with kBidirectional throws ContractError; the
// backward pass needs the whole sequence and cannot be resumed.
LstmResult Lstm(const Tensor& x, const LstmState* state,
                const LstmWeights& weights, Direction direction);

}  // namespace sagrnn

#endif  // SAGRNN_NN_H_
