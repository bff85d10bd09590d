// Copyright 2026 The sagrnn-stream Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "sagrnn/wav.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "sagrnn/error.h"

namespace sagrnn {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint32_t ReadU32(const std::uint8_t* p) {
  return p[0] | (p[1] << 8) | (p[2] << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}
std::uint16_t ReadU16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}
void PutU32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}
void PutU16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}
void PutTag(std::vector<std::uint8_t>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

}  // namespace

WavData ParseWav(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw LoadError("not a RIFF/WAVE file");
  }
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  bool have_fmt = false;
  const std::uint8_t* data = nullptr;
  std::size_t data_size = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint8_t* chunk = bytes.data() + pos;
    const std::size_t size = ReadU32(chunk + 4);
    const std::size_t body = pos + 8;
    if (size > bytes.size() - body) throw LoadError("truncated WAVE chunk");
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16) throw LoadError("fmt chunk too short");
      const std::uint8_t* f = bytes.data() + body;
      format = ReadU16(f);
      channels = ReadU16(f + 2);
      rate = ReadU32(f + 4);
      bits = ReadU16(f + 14);
      if (format == kFormatExtensible) {
        if (size < 26) throw LoadError("extensible fmt chunk too short");
        format = ReadU16(f + 24);  // first two bytes of the subformat GUID
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = bytes.data() + body;
      data_size = size;
    }
    pos = body + size + (size & 1);
  }
  if (!have_fmt || !data) throw LoadError("WAVE file lacks fmt or data chunk");
  if (channels == 0) throw LoadError("WAVE file declares zero channels");

  WavData out;
  if (format == kFormatPcm && bits == 16) {
    out.format = SampleFormat::kPcm16;
  } else if (format == kFormatFloat && bits == 32) {
    out.format = SampleFormat::kFloat32;
  } else {
    throw LoadError("unsupported WAVE encoding (format " + std::to_string(format) +
                    ", " + std::to_string(bits) + " bits); only 16-bit PCM and "
                    "32-bit float are read");
  }
  const std::size_t width = bits / 8;
  const std::size_t frames = data_size / (width * channels);
  out.audio.sample_rate = static_cast<int>(rate);
  out.audio.channels.assign(channels, Waveform(frames));
  for (std::size_t t = 0; t < frames; ++t) {
    for (std::size_t c = 0; c < channels; ++c) {
      const std::uint8_t* p = data + (t * channels + c) * width;
      float v;
      if (out.format == SampleFormat::kPcm16) {
        v = static_cast<float>(static_cast<std::int16_t>(ReadU16(p))) / 32768.0f;
      } else {
        v = std::bit_cast<float>(ReadU32(p));
      }
      out.audio.channels[c][t] = v;
    }
  }
  return out;
}

WavData ReadWav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  try {
    return ParseWav(bytes);
  } catch (const LoadError& e) {
    throw LoadError(path + ": " + e.what());
  }
}

std::vector<std::uint8_t> SerializeWav(const SignalBundle& audio, SampleFormat format) {
  const std::size_t channels = audio.channels.size();
  if (channels == 0 || channels > 0xFFFF) throw InputError("WAV needs 1..65535 channels");
  const std::size_t frames = audio.length();
  for (const Waveform& ch : audio.channels) {
    if (ch.size() != frames) throw InputError("channels differ in length");
  }
  const std::uint16_t bits = format == SampleFormat::kPcm16 ? 16 : 32;
  const std::size_t width = bits / 8;
  const std::size_t data_size = frames * channels * width;
  if (data_size > 0xFFFFFFFFu - 36) throw InputError("audio too long for WAV");

  std::vector<std::uint8_t> out;
  out.reserve(44 + data_size);
  PutTag(out, "RIFF");
  PutU32(out, static_cast<std::uint32_t>(36 + data_size));
  PutTag(out, "WAVE");
  PutTag(out, "fmt ");
  PutU32(out, 16);
  PutU16(out, format == SampleFormat::kPcm16 ? kFormatPcm : kFormatFloat);
  PutU16(out, static_cast<std::uint16_t>(channels));
  PutU32(out, static_cast<std::uint32_t>(audio.sample_rate));
  PutU32(out, static_cast<std::uint32_t>(audio.sample_rate * channels * width));
  PutU16(out, static_cast<std::uint16_t>(channels * width));
  PutU16(out, bits);
  PutTag(out, "data");
  PutU32(out, static_cast<std::uint32_t>(data_size));
  for (std::size_t t = 0; t < frames; ++t) {
    for (std::size_t c = 0; c < channels; ++c) {
      const float v = audio.channels[c][t];
      if (format == SampleFormat::kPcm16) {
        const float clipped = std::clamp(v, -1.0f, 1.0f);
        const auto q = static_cast<std::int16_t>(
            std::clamp(std::lround(clipped * 32768.0f), -32768L, 32767L));
        PutU16(out, static_cast<std::uint16_t>(q));
      } else {
        PutU32(out, std::bit_cast<std::uint32_t>(v));
      }
    }
  }
  return out;
}

void WriteWav(const std::string& path, const SignalBundle& audio, SampleFormat format) {
  const std::vector<std::uint8_t> bytes = SerializeWav(audio, format);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw InputError("failed writing " + path);
}

}  // namespace sagrnn
