// Copyright 2026 The sagrnn-stream Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

// Flat `key = value` configuration text. Blank lines and lines starting with
// '#' are ignored; unknown keys are errors. Keys are the ModelConfig and
// StreamConfig field names; attention_history_chunks accepts "unbounded".

#ifndef SAGRNN_CONFIG_FILE_H_
#define SAGRNN_CONFIG_FILE_H_

#include <string>
#include <string_view>

#include "sagrnn/model_config.h"
#include "sagrnn/stream.h"

namespace sagrnn {

struct RunConfig {
  ModelConfig model;
  StreamConfig stream;
};

// Starts from `base` and overrides every key present. Throws ConfigError
// naming the offending line.
RunConfig ParseConfigText(std::string_view text, const RunConfig& base = {});
RunConfig LoadConfigFile(const std::string& path, const RunConfig& base = {});
// Applies one assignment; shared by the parser and CLI overrides.
void ApplyConfigValue(RunConfig& config, std::string_view key, std::string_view value);

// Every key, one per line, in a fixed order; parses back to the same config.
std::string FormatConfig(const RunConfig& config);

std::string_view ModeName(StreamMode mode);
StreamMode ParseMode(std::string_view name);  // throws ConfigError

}  // namespace sagrnn

#endif  // SAGRNN_CONFIG_FILE_H_
