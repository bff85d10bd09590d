// Copyright 2026 The sagrnn-stream Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "sagrnn/config_file.h"

#include <charconv>
#include <fstream>
#include <sstream>

#include "sagrnn/error.h"

namespace sagrnn {
namespace {

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T ParseNumber(std::string_view key, std::string_view value) {
  T out{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError("invalid value '" + std::string(value) + "' for " +
                      std::string(key));
  }
  return out;
}

bool ParseBool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError("invalid boolean '" + std::string(value) + "' for " +
                    std::string(key));
}

}  // namespace

std::string_view ModeName(StreamMode mode) {
  return mode == StreamMode::kStateful ? "stateful" : "stateless";
}

StreamMode ParseMode(std::string_view name) {
  if (name == "stateful") return StreamMode::kStateful;
  if (name == "stateless") return StreamMode::kStateless;
  throw ConfigError("unknown stream mode '" + std::string(name) + "'");
}

void ApplyConfigValue(RunConfig& config, std::string_view key, std::string_view value) {
  ModelConfig& m = config.model;
  StreamConfig& s = config.stream;
  auto size = [&] { return ParseNumber<std::size_t>(key, value); };
  if (key == "channels") m.channels = size();
  else if (key == "frame_size") m.frame_size = size();
  else if (key == "chunk_size") m.chunk_size = size();
  else if (key == "num_blocks") m.num_blocks = size();
  else if (key == "attention_dim") m.attention_dim = size();
  else if (key == "hidden_size") m.hidden_size = size();
  else if (key == "num_sources") m.num_sources = size();
  else if (key == "causal") m.causal = ParseBool(key, value);
  else if (key == "binaural") m.binaural = ParseBool(key, value);
  else if (key == "sample_rate") m.sample_rate = ParseNumber<int>(key, value);
  else if (key == "mode") s.mode = ParseMode(value);
  else if (key == "history_ms") s.history_ms = ParseNumber<double>(key, value);
  else if (key == "attention_history_chunks") {
    if (value == "unbounded") s.attention_history_chunks.reset();
    else s.attention_history_chunks = size();
  } else {
    throw ConfigError("unknown configuration key '" + std::string(key) + "'");
  }
}

RunConfig ParseConfigText(std::string_view text, const RunConfig& base) {
  RunConfig config = base;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = Trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    try {
      ApplyConfigValue(config, Trim(line.substr(0, eq)), Trim(line.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  config.model.Validate();
  config.stream.Validate();
  return config;
}

RunConfig LoadConfigFile(const std::string& path, const RunConfig& base) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return ParseConfigText(ss.str(), base);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::string FormatConfig(const RunConfig& config) {
  const ModelConfig& m = config.model;
  const StreamConfig& s = config.stream;
  std::ostringstream os;
  os.precision(17);
  os << "channels = " << m.channels << "\n"
     << "frame_size = " << m.frame_size << "\n"
     << "chunk_size = " << m.chunk_size << "\n"
     << "num_blocks = " << m.num_blocks << "\n"
     << "attention_dim = " << m.attention_dim << "\n"
     << "hidden_size = " << m.hidden_size << "\n"
     << "num_sources = " << m.num_sources << "\n"
     << "causal = " << (m.causal ? "true" : "false") << "\n"
     << "binaural = " << (m.binaural ? "true" : "false") << "\n"
     << "sample_rate = " << m.sample_rate << "\n"
     << "mode = " << ModeName(s.mode) << "\n"
     << "history_ms = " << s.history_ms << "\n"
     << "attention_history_chunks = ";
  if (s.attention_history_chunks) os << *s.attention_history_chunks;
  else os << "unbounded";
  os << "\n";
  return os.str();
}

}  // namespace sagrnn
