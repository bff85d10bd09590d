// Copyright 2026 The sagrnn-stream Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

// Dual-path block internals. Embeddings are stored [N x S x R]; each layer
// gathers 2-D slices [sequence x N] along one axis, processes them and
// scatters the results back.

#include <algorithm>
#include <cmath>

#include "sagrnn/error.h"
#include "sagrnn/model.h"

namespace sagrnn {
namespace {

constexpr double kNormEps = 1e-8;

std::size_t SliceCount(const ChunkTensor& x, Axis axis) {
  return axis == Axis::kIntra ? x.num_chunks() : x.chunk_size();
}

// Slice `i` along `axis`: chunk i over its R positions (intra) or position i
// over all S chunks (inter). Returns [sequence x N].
Tensor Gather(const ChunkTensor& x, Axis axis, std::size_t i) {
  const std::size_t n = x.channels();
  const std::size_t len = axis == Axis::kIntra ? x.chunk_size() : x.num_chunks();
  Tensor out({len, n});
  for (std::size_t t = 0; t < len; ++t) {
    for (std::size_t c = 0; c < n; ++c) {
      out.at(t, c) = axis == Axis::kIntra ? x.data.at(c, i, t) : x.data.at(c, t, i);
    }
  }
  return out;
}

void Scatter(const Tensor& slice, Axis axis, std::size_t i, ChunkTensor& x) {
  const std::size_t n = x.channels();
  for (std::size_t t = 0; t < slice.dim(0); ++t) {
    for (std::size_t c = 0; c < n; ++c) {
      float& dst = axis == Axis::kIntra ? x.data.at(c, i, t) : x.data.at(c, t, i);
      dst = slice.at(t, c);
    }
  }
}

const AxisParams& AxisOf(const BlockParams& block, Axis axis) {
  return axis == Axis::kIntra ? block.intra : block.inter;
}

}  // namespace

ChunkTensor Separator::SelfAttention(const ChunkTensor& x, Axis axis,
                                     std::size_t block,
                                     const AttentionHistory* history,
                                     std::optional<std::size_t> max_history) const {
  const bool inter_causal = axis == Axis::kInter && config_.causal;
  if (history && !inter_causal) {
    throw ContractError("attention history is only defined for the inter-chunk "
                        "axis of a causal model");
  }
  if (max_history && !inter_causal) {
    throw ContractError("an attention history limit needs causal inter-chunk attention");
  }
  const AttentionParams& p = AxisOf(params_.blocks.at(block), axis).attention;
  const std::size_t n = x.channels();
  const std::size_t past = history ? history->chunks.size() : 0;
  AttentionMask mask;
  mask.causal = inter_causal;
  mask.max_history = max_history;

  ChunkTensor y = x;
  for (std::size_t i = 0; i < SliceCount(x, axis); ++i) {
    const Tensor z = Gather(x, axis, i);
    const Tensor* kv_in = &z;
    Tensor with_past;
    if (past > 0) {
      with_past = Tensor({past + z.dim(0), n});
      for (std::size_t h = 0; h < past; ++h) {
        const Tensor& chunk = history->chunks[h];
        if (chunk.dim(0) != x.chunk_size() || chunk.dim(1) != n) {
          throw ContractError("attention history entry has shape " +
                              ShapeString(chunk.shape()));
        }
        for (std::size_t c = 0; c < n; ++c) with_past.at(h, c) = chunk.at(i, c);
      }
      for (std::size_t t = 0; t < z.dim(0); ++t) {
        for (std::size_t c = 0; c < n; ++c) with_past.at(past + t, c) = z.at(t, c);
      }
      kv_in = &with_past;
    }
    const Tensor q = Linear(z, *p.query_w, p.query_b);
    const Tensor k = Linear(*kv_in, *p.key_w, p.key_b);
    const Tensor v = Linear(*kv_in, *p.value_w, p.value_b);
    const Tensor o = Linear(ScaledDotAttention(q, k, v, mask), *p.out_w, p.out_b);
    Tensor cat({z.dim(0), 2 * n});
    for (std::size_t t = 0; t < z.dim(0); ++t) {
      for (std::size_t c = 0; c < n; ++c) {
        cat.at(t, c) = z.at(t, c);
        cat.at(t, n + c) = o.at(t, c);
      }
    }
    Scatter(Linear(cat, *p.merge_w, p.merge_b), axis, i, y);
  }
  return y;
}

std::pair<ChunkTensor, InterRnnState> Separator::GatedRnn(
    const ChunkTensor& x, Axis axis, std::size_t block,
    const InterRnnState* state) const {
  const Direction dir = config_.causal ? Direction::kForward : Direction::kBidirectional;
  const bool resumable = axis == Axis::kInter && config_.causal;
  if (state && !resumable) {
    throw ContractError("only the causal inter-chunk RNN carries state");
  }
  const std::size_t slices = SliceCount(x, axis);
  if (state && state->size() != slices) {
    throw ContractError("inter-chunk RNN state has " + std::to_string(state->size()) +
                        " entries, expected " + std::to_string(slices));
  }
  const GatedRnnParams& p = AxisOf(params_.blocks.at(block), axis).rnn;
  const std::size_t n = x.channels();

  ChunkTensor y = x;
  InterRnnState next;
  if (resumable) next.reserve(slices);
  for (std::size_t i = 0; i < slices; ++i) {
    const Tensor z = Gather(x, axis, i);
    LstmResult u = Lstm(z, state ? &(*state)[i] : nullptr, p.lstm, dir);
    const Tensor a = Linear(u.output, *p.tanh_w, p.tanh_b);
    const Tensor b = Linear(u.output, *p.sigmoid_w, p.sigmoid_b);
    Tensor out({z.dim(0), n});
    for (std::size_t t = 0; t < z.dim(0); ++t) {
      for (std::size_t c = 0; c < n; ++c) {
        out.at(t, c) = z.at(t, c) + (*p.scale)[c] * std::tanh(a.at(t, c)) *
                                        Sigmoid(b.at(t, c));
      }
    }
    Scatter(out, axis, i, y);
    if (resumable) next.push_back(std::move(u.state));
  }
  return {std::move(y), std::move(next)};
}

ChunkTensor Separator::Normalize(const ChunkTensor& x, std::size_t block,
                                 CumulativeNormState* state) const {
  if (state && !config_.causal) {
    throw ContractError("per-chunk layer norm has no state");
  }
  const BlockParams& p = params_.blocks.at(block);
  const std::size_t n = x.channels(), s_count = x.num_chunks(), r = x.chunk_size();
  CumulativeNormState local;
  CumulativeNormState& acc = state ? *state : local;

  ChunkTensor y = x;
  for (std::size_t s = 0; s < s_count; ++s) {
    if (!config_.causal) acc = {};
    for (std::size_t c = 0; c < n; ++c) {
      for (std::size_t t = 0; t < r; ++t) {
        const double v = x.data.at(c, s, t);
        acc.sum += v;
        acc.sum_sq += v * v;
      }
    }
    acc.count += n * r;
    const double count = static_cast<double>(acc.count);
    const double mean = acc.sum / count;
    const double var = std::max(0.0, acc.sum_sq / count - mean * mean);
    const double inv = 1.0 / std::sqrt(var + kNormEps);
    for (std::size_t c = 0; c < n; ++c) {
      const double gain = (*p.norm_gain)[c], bias = (*p.norm_bias)[c];
      for (std::size_t t = 0; t < r; ++t) {
        y.data.at(c, s, t) =
            static_cast<float>(gain * (x.data.at(c, s, t) - mean) * inv + bias);
      }
    }
  }
  return y;
}

BlockOutput Separator::RunBlock(const ChunkTensor& x, std::size_t block,
                                BlockState& state, const BlockRunOptions& options,
                                bool decode) const {
  const bool causal = config_.causal;
  ChunkTensor h = SelfAttention(x, Axis::kIntra, block);
  h = GatedRnn(h, Axis::kIntra, block).first;

  const AttentionHistory* past =
      causal && !state.history.chunks.empty() ? &state.history : nullptr;
  ChunkTensor attended = SelfAttention(
      h, Axis::kInter, block, past,
      causal ? options.attention_history : std::optional<std::size_t>{});
  if (causal && options.retain_history) {
    for (std::size_t s = 0; s < h.num_chunks(); ++s) {
      state.history.chunks.push_back(Gather(h, Axis::kIntra, s));
    }
    if (options.attention_history) {
      while (state.history.chunks.size() > *options.attention_history) {
        state.history.chunks.pop_front();
      }
    }
  }

  auto [rnn_out, rnn_state] = GatedRnn(
      attended, Axis::kInter, block,
      causal && !state.rnn.empty() ? &state.rnn : nullptr);
  if (causal) state.rnn = std::move(rnn_state);

  BlockOutput out;
  out.embedding = Normalize(rnn_out, block, causal ? &state.norm : nullptr);
  if (decode) out.per_source_frames = DecodeBlock(out.embedding, block);
  return out;
}

}  // namespace sagrnn
