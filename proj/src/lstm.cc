// Copyright 2026 The sagrnn-stream Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <algorithm>
#include <cmath>

#include "sagrnn/error.h"
#include "sagrnn/nn.h"

namespace sagrnn {

LstmState LstmState::Zeros(std::size_t directions, std::size_t hidden_size) {
  return {Tensor::Zeros({1, directions, hidden_size}),
          Tensor::Zeros({1, directions, hidden_size})};
}

bool LstmState::IsZero() const {
  auto zero = [](const Tensor& t) {
    return std::all_of(t.values().begin(), t.values().end(),
                       [](float v) { return v == 0.0f; });
  };
  return zero(hidden) && zero(cell);
}

bool LstmState::AllFinite() const {
  auto finite = [](const Tensor& t) {
    return std::all_of(t.values().begin(), t.values().end(),
                       [](float v) { return std::isfinite(v); });
  };
  return finite(hidden) && finite(cell);
}

namespace {

void CheckDirection(const LstmDirectionWeights& w, std::size_t in,
                    std::size_t hidden) {
  if (!w.w_ih || !w.w_hh || !w.bias) throw ConfigError("LSTM: missing weights");
  if (w.w_ih->shape() != Shape{in, 4 * hidden} ||
      w.w_hh->shape() != Shape{hidden, 4 * hidden} ||
      w.bias->shape() != Shape{4 * hidden}) {
    throw ConfigError("LSTM: weight shapes " + ShapeString(w.w_ih->shape()) +
                      ", " + ShapeString(w.w_hh->shape()) + ", " +
                      ShapeString(w.bias->shape()) + " do not fit input " +
                      std::to_string(in) + " / hidden " + std::to_string(hidden));
  }
}

// Runs one direction over x. h and c are updated in place; outputs land in
// columns [col, col + H) of `out`.
void RunDirection(const Tensor& x, const LstmDirectionWeights& w, bool reverse,
                  std::span<float> h, std::span<float> c, Tensor& out,
                  std::size_t col) {
  const std::size_t steps = x.dim(0), hidden = h.size(), g4 = 4 * hidden;
  const Tensor pre = Linear(x, *w.w_ih, w.bias);  // [T x 4H]
  std::vector<float> gates(g4);
  const float* whh = w.w_hh->data();
  for (std::size_t n = 0; n < steps; ++n) {
    const std::size_t t = reverse ? steps - 1 - n : n;
    std::copy(pre.data() + t * g4, pre.data() + (t + 1) * g4, gates.begin());
    for (std::size_t a = 0; a < hidden; ++a) {
      const float ha = h[a];
      const float* wr = whh + a * g4;
      for (std::size_t b = 0; b < g4; ++b) gates[b] += ha * wr[b];
    }
    float* yr = out.data() + t * out.dim(1) + col;
    for (std::size_t j = 0; j < hidden; ++j) {
      const float i_g = Sigmoid(gates[j]);
      const float f_g = Sigmoid(gates[hidden + j]);
      const float g_g = std::tanh(gates[2 * hidden + j]);
      const float o_g = Sigmoid(gates[3 * hidden + j]);
      c[j] = f_g * c[j] + i_g * g_g;
      h[j] = o_g * std::tanh(c[j]);
      yr[j] = h[j];
    }
  }
}

}  // namespace

LstmResult Lstm(const Tensor& x, const LstmState* state,
                const LstmWeights& weights, Direction direction) {
  if (x.rank() != 2) throw ConfigError("LSTM: input must be [T x I]");
  const std::size_t in = x.dim(1), hidden = weights.hidden_size();
  const std::size_t dirs = direction == Direction::kBidirectional ? 2 : 1;
  CheckDirection(weights.forward, in, hidden);
  if (direction == Direction::kBidirectional) {
    if (!weights.backward) throw ConfigError("LSTM: bidirectional needs backward weights");
    CheckDirection(*weights.backward, in, hidden);
    if (state && !state->IsZero()) {
      throw ContractError(
          "LSTM: a bidirectional layer cannot resume from a carried state");
    }
  }
  LstmState next = LstmState::Zeros(dirs, hidden);
  if (state) {
    if (state->hidden.shape() != next.hidden.shape() ||
        state->cell.shape() != next.cell.shape()) {
      throw ConfigError("LSTM: state shape " + ShapeString(state->hidden.shape()) +
                        " does not match " + ShapeString(next.hidden.shape()));
    }
    next = *state;
  }
  LstmResult result{Tensor::Zeros({x.dim(0), hidden * dirs}), {}};
  RunDirection(x, weights.forward, false, next.hidden.span().subspan(0, hidden),
               next.cell.span().subspan(0, hidden), result.output, 0);
  if (dirs == 2) {
    RunDirection(x, *weights.backward, true,
                 next.hidden.span().subspan(hidden, hidden),
                 next.cell.span().subspan(hidden, hidden), result.output, hidden);
  }
  result.state = std::move(next);
  return result;
}

}  // namespace sagrnn
