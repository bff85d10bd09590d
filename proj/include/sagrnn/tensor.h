// Copyright 2026 The sagrnn-stream Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef SAGRNN_TENSOR_H_
#define SAGRNN_TENSOR_H_

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace sagrnn {

using Shape = std::vector<std::size_t>;
using Waveform = std::vector<float>;

std::size_t ShapeProduct(const Shape& shape);
std::string ShapeString(const Shape& shape);

// Dense row-major float32 array. Every dimension is >= 1 and the element
// count always equals the product of the shape. A rank-0 tensor is a scalar.
class Tensor {
 public:
  Tensor() : shape_{}, data_(1, 0.0f) {}
  explicit Tensor(Shape shape);
  Tensor(Shape shape, std::vector<float> data);
  Tensor(Shape shape, float fill);

  static Tensor Zeros(Shape shape) { return Tensor(std::move(shape)); }
  // 2-D convenience for tests: Tensor::Matrix({{1, 2}, {3, 4}}).
  static Tensor Matrix(std::initializer_list<std::initializer_list<float>> rows);

  const Shape& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t dim(std::size_t axis) const { return shape_.at(axis); }
  std::size_t size() const { return data_.size(); }

  float* data() { return data_.data(); }
  const float* data() const { return data_.data(); }
  std::span<float> span() { return data_; }
  std::span<const float> span() const { return data_; }
  const std::vector<float>& values() const { return data_; }

  float& operator[](std::size_t i) { return data_[i]; }
  float operator[](std::size_t i) const { return data_[i]; }

  float& at(std::size_t i, std::size_t j) { return data_[i * shape_[1] + j]; }
  const float& at(std::size_t i, std::size_t j) const {
    return data_[i * shape_[1] + j];
  }
  float& at(std::size_t i, std::size_t j, std::size_t k) {
    return data_[(i * shape_[1] + j) * shape_[2] + k];
  }
  const float& at(std::size_t i, std::size_t j, std::size_t k) const {
    return data_[(i * shape_[1] + j) * shape_[2] + k];
  }

  // Row i of a rank-2 tensor.
  std::span<float> row(std::size_t i);
  std::span<const float> row(std::size_t i) const;

  Tensor Transposed() const;  // rank-2 only
  Tensor Reshaped(Shape shape) const;

  bool operator==(const Tensor& other) const = default;

 private:
  Shape shape_;
  std::vector<float> data_;
};

float MaxAbsDiff(std::span<const float> a, std::span<const float> b);

}  // namespace sagrnn

#endif  // SAGRNN_TENSOR_H_
