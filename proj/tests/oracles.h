// Copyright 2026 The sagrnn-stream Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

// Independent reference implementations for tests. Written for clarity, in
// double precision where that helps, and sharing no code with the library.

#ifndef SAGRNN_TESTS_ORACLES_H_
#define SAGRNN_TESTS_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

using Matrix = std::vector<std::vector<double>>;

inline std::vector<float> RandomVector(std::size_t n, std::mt19937_64& rng,
                                       float scale = 1.0f) {
  std::uniform_real_distribution<float> d(-scale, scale);
  std::vector<float> v(n);
  for (float& x : v) x = d(rng);
  return v;
}

// x [M x A] row-major, w [A x B] row-major.
inline Matrix MatMul(const std::vector<float>& x, const std::vector<float>& w,
                     std::size_t m, std::size_t a, std::size_t b) {
  Matrix y(m, std::vector<double>(b, 0.0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < b; ++j)
      for (std::size_t k = 0; k < a; ++k) y[i][j] += double(x[i * a + k]) * w[k * b + j];
  return y;
}

// x [Cin x T], kernel [Cout x Cin x K]; y[o][t] = sum_c sum_k ker * x[c][t*s+k].
inline Matrix Conv1d(const std::vector<float>& x, std::size_t cin, std::size_t len,
                     const std::vector<float>& ker, std::size_t cout, std::size_t k,
                     std::size_t stride) {
  const std::size_t frames = (len - k) / stride + 1;
  Matrix y(cout, std::vector<double>(frames, 0.0));
  for (std::size_t o = 0; o < cout; ++o)
    for (std::size_t t = 0; t < frames; ++t)
      for (std::size_t c = 0; c < cin; ++c)
        for (std::size_t j = 0; j < k; ++j)
          y[o][t] += double(ker[(o * cin + c) * k + j]) * x[c * len + t * stride + j];
  return y;
}

inline double Sigmoid(double v) { return 1.0 / (1.0 + std::exp(-v)); }

// One LSTM step with gate order (i, f, g, o). w_ih [I x 4H], w_hh [H x 4H].
struct ScalarLstm {
  std::size_t in, hidden;
  std::vector<float> w_ih, w_hh, bias;

  void Step(const std::vector<double>& x, std::vector<double>& h,
            std::vector<double>& c) const {
    std::vector<double> g(4 * hidden);
    for (std::size_t j = 0; j < 4 * hidden; ++j) {
      double acc = bias[j];
      for (std::size_t a = 0; a < in; ++a) acc += x[a] * w_ih[a * 4 * hidden + j];
      for (std::size_t a = 0; a < hidden; ++a) acc += h[a] * w_hh[a * 4 * hidden + j];
      g[j] = acc;
    }
    for (std::size_t j = 0; j < hidden; ++j) {
      const double i = Sigmoid(g[j]), f = Sigmoid(g[hidden + j]);
      const double gg = std::tanh(g[2 * hidden + j]), o = Sigmoid(g[3 * hidden + j]);
      c[j] = f * c[j] + i * gg;
      h[j] = o * std::tanh(c[j]);
    }
  }
};

// Masked softmax attention in double. q [M x D], k/v [M' x D].
inline Matrix Attention(const Matrix& q, const Matrix& k, const Matrix& v, bool causal,
                        long max_history = -1) {
  const std::size_t m = q.size(), mk = k.size();
  Matrix out(m, std::vector<double>(v[0].size(), 0.0));
  for (std::size_t i = 0; i < m; ++i) {
    const long pos = static_cast<long>(mk - m + i);
    std::vector<double> s(mk, -INFINITY);
    double mx = -INFINITY;
    for (std::size_t j = 0; j < mk; ++j) {
      const long jj = static_cast<long>(j);
      if (causal && jj > pos) continue;
      if (causal && max_history >= 0 && jj < pos - max_history) continue;
      double d = 0.0;
      for (std::size_t t = 0; t < q[i].size(); ++t) d += q[i][t] * k[j][t];
      s[j] = d / std::sqrt(double(q[i].size()));
      mx = std::max(mx, s[j]);
    }
    double z = 0.0;
    for (double& e : s) z += (e = std::isinf(e) ? 0.0 : std::exp(e - mx));
    for (std::size_t j = 0; j < mk; ++j)
      for (std::size_t t = 0; t < v[j].size(); ++t) out[i][t] += s[j] / z * v[j][t];
  }
  return out;
}

// Overlap-add of windows of `size` at hop size/2 with explicit coverage
// counting: each output element is the mean of the windows covering it.
inline std::vector<double> CountingOla(const std::vector<std::vector<double>>& windows,
                                       std::size_t size) {
  const std::size_t hop = size / 2, len = (windows.size() + 1) * hop;
  std::vector<double> sum(len, 0.0), count(len, 0.0);
  for (std::size_t w = 0; w < windows.size(); ++w)
    for (std::size_t u = 0; u < size; ++u) {
      sum[w * hop + u] += windows[w][u];
      count[w * hop + u] += 1.0;
    }
  for (std::size_t i = 0; i < len; ++i) sum[i] /= count[i];
  return sum;
}

// Number of chunks by enumerating start frames s*R/2 with s*R/2 + R <= L.
inline std::size_t EnumeratedChunks(std::size_t frames, std::size_t r) {
  std::size_t count = 0;
  for (std::size_t start = 0; start + r <= frames; start += r / 2) ++count;
  return count;
}

// Frames from T samples (size P, hop P/2) by enumerating start indices.
inline std::size_t EnumeratedFrames(std::size_t samples, std::size_t p) {
  std::size_t count = 0;
  for (std::size_t start = 0; start + p <= samples; start += p / 2) ++count;
  return count;
}

inline std::vector<double> Fir(const std::vector<float>& x, const std::vector<float>& h) {
  std::vector<double> y(x.size(), 0.0);
  for (std::size_t t = 0; t < x.size(); ++t)
    for (std::size_t k = 0; k < h.size(); ++k)
      if (k <= t) y[t] += double(h[k]) * x[t - k];
  return y;
}

// Metrics written out term by term, with no clamping.
inline double Dot(const std::vector<float>& a, const std::vector<float>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += double(a[i]) * b[i];
  return s;
}

inline double SiSnrDb(const std::vector<float>& s, const std::vector<float>& e) {
  const double alpha = Dot(s, e) / Dot(s, s);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double target = alpha * s[i];
    num += target * target;
    den += (e[i] - target) * (e[i] - target);
  }
  return 10.0 * std::log10(num / den);
}

inline double SnrDb(const std::vector<float>& s, const std::vector<float>& e) {
  double den = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) den += (double(s[i]) - e[i]) * (double(s[i]) - e[i]);
  return 10.0 * std::log10(Dot(s, s) / den);
}

// Best permutation by recursive enumeration; `perm[j]` is the estimate for
// reference j. Returns the best mean score and fills `best`.
inline double BestPermutation(const Matrix& score, std::vector<std::size_t>& best) {
  const std::size_t c = score.size();
  std::vector<std::size_t> cur;
  std::vector<bool> used(c, false);
  double best_mean = -INFINITY;
  std::function<void()> rec = [&]() {
    if (cur.size() == c) {
      double m = 0.0;
      for (std::size_t j = 0; j < c; ++j) m += score[j][cur[j]];
      m /= double(c);
      if (m > best_mean) {
        best_mean = m;
        best = cur;
      }
      return;
    }
    for (std::size_t k = 0; k < c; ++k) {
      if (used[k]) continue;
      used[k] = true;
      cur.push_back(k);
      rec();
      cur.pop_back();
      used[k] = false;
    }
  };
  rec();
  return best_mean;
}

}  // namespace oracle

#endif  // SAGRNN_TESTS_ORACLES_H_
