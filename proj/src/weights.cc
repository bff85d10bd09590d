// Copyright 2026 The sagrnn-stream Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "sagrnn/weights.h"

#include <bit>
#include <fstream>
#include <iterator>
#include <limits>

#include "sagrnn/error.h"

namespace sagrnn {

const Tensor& WeightContainer::Get(const std::string& name,
                                   const Shape& expected) const {
  auto it = entries_.find(name);
  if (it == entries_.end()) {
    throw ConfigError("missing parameter '" + name + "'");
  }
  if (it->second.shape() != expected) {
    throw ConfigError("parameter '" + name + "' has shape " +
                      ShapeString(it->second.shape()) + ", expected " +
                      ShapeString(expected));
  }
  return it->second;
}

namespace {

constexpr char kMagic[4] = {'N', 'T', 'W', 'C'};

class ByteWriter {
 public:
  void U8(std::uint8_t v) { out_.push_back(v); }
  void U16(std::uint16_t v) {
    for (int i = 0; i < 2; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void U32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void F32(float v) { U32(std::bit_cast<std::uint32_t>(v)); }
  void Bytes(const void* p, std::size_t n) {
    auto b = static_cast<const std::uint8_t*>(p);
    out_.insert(out_.end(), b, b + n);
  }
  std::vector<std::uint8_t> Take() { return std::move(out_); }

 private:
  std::vector<std::uint8_t> out_;
};

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> in) : in_(in) {}

  std::uint8_t U8() { return Need(1)[0]; }
  std::uint16_t U16() {
    auto b = Need(2);
    return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
  }
  std::uint32_t U32() {
    auto b = Need(4);
    return static_cast<std::uint32_t>(b[0]) |
           (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) |
           (static_cast<std::uint32_t>(b[3]) << 24);
  }
  float F32() { return std::bit_cast<float>(U32()); }
  std::span<const std::uint8_t> Need(std::size_t n) {
    if (in_.size() - pos_ < n) {
      throw LoadError("weight file truncated at byte " + std::to_string(pos_));
    }
    auto s = in_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  std::size_t remaining() const { return in_.size() - pos_; }

 private:
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> SerializeWeights(const WeightContainer& weights) {
  ByteWriter w;
  w.Bytes(kMagic, 4);
  w.U32(kWeightFormatVersion);
  w.U32(static_cast<std::uint32_t>(weights.size()));
  for (const auto& [name, tensor] : weights.entries()) {
    if (name.size() > std::numeric_limits<std::uint16_t>::max()) {
      throw ConfigError("parameter name too long: " + name.substr(0, 32));
    }
    w.U16(static_cast<std::uint16_t>(name.size()));
    w.Bytes(name.data(), name.size());
    w.U8(static_cast<std::uint8_t>(tensor.rank()));
    for (std::size_t d : tensor.shape()) w.U32(static_cast<std::uint32_t>(d));
    for (float v : tensor.values()) w.F32(v);
  }
  return w.Take();
}

WeightContainer ParseWeights(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  auto magic = r.Need(4);
  if (!std::equal(magic.begin(), magic.end(), kMagic)) {
    throw LoadError("bad magic: not an NTWC weight file");
  }
  std::uint32_t version = r.U32();
  if (version != kWeightFormatVersion) {
    throw LoadError("unsupported weight format version " + std::to_string(version));
  }
  std::uint32_t count = r.U32();
  std::map<std::string, Tensor> entries;
  for (std::uint32_t e = 0; e < count; ++e) {
    std::uint16_t name_len = r.U16();
    auto name_bytes = r.Need(name_len);
    std::string name(name_bytes.begin(), name_bytes.end());
    std::uint8_t rank = r.U8();
    Shape shape(rank);
    std::uint64_t n = 1;
    for (auto& d : shape) {
      d = r.U32();
      if (d == 0) throw LoadError("zero-sized dimension in '" + name + "'");
      n *= d;
    }
    // Reject absurd element counts before allocating.
    if (n > r.remaining() / 4) {
      throw LoadError("weight file truncated in payload of '" + name + "'");
    }
    std::vector<float> data(n);
    for (auto& v : data) v = r.F32();
    if (!entries.emplace(name, Tensor(std::move(shape), std::move(data))).second) {
      throw LoadError("duplicate parameter name '" + name + "'");
    }
  }
  if (r.remaining() != 0) {
    throw LoadError(std::to_string(r.remaining()) +
                    " trailing bytes after the declared entries");
  }
  return WeightContainer(std::move(entries));
}

void SaveWeights(const WeightContainer& weights,
                 const std::filesystem::path& path) {
  auto bytes = SerializeWeights(weights);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw InputError("failed writing '" + path.string() + "'");
}

WeightContainer LoadWeights(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open weight file '" + path.string() + "'");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return ParseWeights(bytes);
}

}  // namespace sagrnn
