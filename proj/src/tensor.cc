// Copyright 2026 The sagrnn-stream Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "sagrnn/tensor.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sagrnn/error.h"

namespace sagrnn {

std::size_t ShapeProduct(const Shape& shape) {
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  return n;
}

std::string ShapeString(const Shape& shape) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) os << "x";
    os << shape[i];
  }
  os << "]";
  return os.str();
}

namespace {

void CheckDims(const Shape& shape) {
  for (std::size_t d : shape) {
    if (d == 0) {
      throw ConfigError("tensor dimension of size 0 in " + ShapeString(shape));
    }
  }
}

}  // namespace

Tensor::Tensor(Shape shape) : shape_(std::move(shape)) {
  CheckDims(shape_);
  data_.assign(ShapeProduct(shape_), 0.0f);
}

Tensor::Tensor(Shape shape, std::vector<float> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  CheckDims(shape_);
  if (data_.size() != ShapeProduct(shape_)) {
    throw ConfigError("tensor data length " + std::to_string(data_.size()) +
                      " does not match shape " + ShapeString(shape_));
  }
}

Tensor::Tensor(Shape shape, float fill) : shape_(std::move(shape)) {
  CheckDims(shape_);
  data_.assign(ShapeProduct(shape_), fill);
}

Tensor Tensor::Matrix(
    std::initializer_list<std::initializer_list<float>> rows) {
  std::size_t n_rows = rows.size();
  std::size_t n_cols = n_rows ? rows.begin()->size() : 0;
  std::vector<float> data;
  data.reserve(n_rows * n_cols);
  for (const auto& r : rows) {
    if (r.size() != n_cols) throw ConfigError("ragged matrix literal");
    data.insert(data.end(), r.begin(), r.end());
  }
  return Tensor({n_rows, n_cols}, std::move(data));
}

std::span<float> Tensor::row(std::size_t i) {
  return std::span<float>(data_).subspan(i * shape_[1], shape_[1]);
}

std::span<const float> Tensor::row(std::size_t i) const {
  return std::span<const float>(data_).subspan(i * shape_[1], shape_[1]);
}

Tensor Tensor::Transposed() const {
  if (rank() != 2) throw ConfigError("Transposed() needs a rank-2 tensor");
  const std::size_t rows = shape_[0], cols = shape_[1];
  Tensor out({cols, rows});
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) out.data_[j * rows + i] = data_[i * cols + j];
  return out;
}

Tensor Tensor::Reshaped(Shape shape) const {
  return Tensor(std::move(shape), data_);
}

float MaxAbsDiff(std::span<const float> a, std::span<const float> b) {
  if (a.size() != b.size()) return INFINITY;
  float m = 0.0f;
  for (std::size_t i = 0; i < a.size(); ++i) {
    float d = std::fabs(a[i] - b[i]);
    if (std::isnan(d)) return NAN;
    m = std::max(m, d);
  }
  return m;
}

}  // namespace sagrnn
