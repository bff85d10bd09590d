// Copyright 2026 The sagrnn-stream Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef SAGRNN_WEIGHTS_H_
#define SAGRNN_WEIGHTS_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "sagrnn/tensor.h"

namespace sagrnn {

// Immutable named-tensor store. Safe to share between threads.
class WeightContainer {
 public:
  WeightContainer() = default;
  explicit WeightContainer(std::map<std::string, Tensor> entries,
                           std::uint64_t seed = 0)
      : entries_(std::move(entries)), seed_(seed) {}

  // Throws ConfigError if `name` is missing or its shape differs.
  const Tensor& Get(const std::string& name, const Shape& expected) const;
  bool Contains(const std::string& name) const {
    return entries_.count(name) != 0;
  }

  const std::map<std::string, Tensor>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  std::uint64_t seed() const { return seed_; }

  bool operator==(const WeightContainer& other) const {
    return entries_ == other.entries_;
  }

 private:
  std::map<std::string, Tensor> entries_;
  std::uint64_t seed_ = 0;
};

// NTWC v1 layout, all integers little-endian:
//   "NTWC" | u32 version | u32 entry count |
//   per entry: u16 name length | UTF-8 name | u8 rank | u32 dims[rank] |
//              f32 values[product(dims)]
// Entries are written in lexicographic name order.
inline constexpr std::uint32_t kWeightFormatVersion = 1;

std::vector<std::uint8_t> SerializeWeights(const WeightContainer& weights);
// Throws LoadError on bad magic/version, truncation, trailing bytes, duplicate
// names or zero-sized dimensions. Nothing partial is ever returned.
WeightContainer ParseWeights(std::span<const std::uint8_t> bytes);

void SaveWeights(const WeightContainer& weights,
                 const std::filesystem::path& path);
WeightContainer LoadWeights(const std::filesystem::path& path);

}  // namespace sagrnn

#endif  // SAGRNN_WEIGHTS_H_
