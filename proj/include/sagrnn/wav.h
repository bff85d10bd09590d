// Copyright 2026 The sagrnn-stream Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

// RIFF/WAVE I/O for 16-bit integer and 32-bit float PCM. No resampling.

#ifndef SAGRNN_WAV_H_
#define SAGRNN_WAV_H_

#include <cstdint>
#include <string>
#include <vector>

#include "sagrnn/model.h"

namespace sagrnn {

enum class SampleFormat { kPcm16, kFloat32 };

struct WavData {
  SignalBundle audio;
  SampleFormat format = SampleFormat::kFloat32;
};

// Reads a whole file. Unsupported encodings and malformed files throw
// LoadError; an unreadable path throws InputError.
WavData ReadWav(const std::string& path);
WavData ParseWav(const std::vector<std::uint8_t>& bytes);

// 16-bit output clips to [-1, 1] and rounds to nearest. Throws InputError if
// the path is unwritable.
void WriteWav(const std::string& path, const SignalBundle& audio,
              SampleFormat format = SampleFormat::kFloat32);
std::vector<std::uint8_t> SerializeWav(const SignalBundle& audio, SampleFormat format);

}  // namespace sagrnn

#endif  // SAGRNN_WAV_H_
