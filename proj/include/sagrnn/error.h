// Copyright 2026 The sagrnn-stream Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef SAGRNN_ERROR_H_
#define SAGRNN_ERROR_H_

#include <stdexcept>
#include <string>

namespace sagrnn {

// Bad shapes, missing parameters, invalid hyperparameters.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller violated an operation's precondition (e.g. state handed to a
// bidirectional layer, history on the intra axis).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Malformed or mismatched input data (audio lengths, channel counts).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Not enough samples/frames yet; streaming callers should keep buffering.
class InsufficientInputError : public InputError {
 public:
  using InputError::InputError;
};

// Mathematically undefined request (zero-energy reference or noise).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Corrupt or unreadable weight / audio files.
class LoadError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sagrnn

#endif  // SAGRNN_ERROR_H_
