// Copyright 2026 The patmine Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PATMINE_ERROR_H_
#define PATMINE_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace patmine {

// Base class for every error the library reports. `code()` is a stable
// machine-readable identifier used by the CLI and the HTTP service.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string &message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string &code() const { return code_; }

 private:
  std::string code_;
};

// Malformed corpus record. `line()` is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string &message)
      : Error("parse_error", Describe(line, message)), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  static std::string Describe(std::size_t line, const std::string &message) {
    if (line == 0) return message;
    return "line " + std::to_string(line) + ": " + message;
  }
  std::size_t line_;
};

// A structurally parsed record that violates a data-model invariant.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string &message)
      : Error("validation_error", message) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string &message)
      : Error("config_error", message) {}
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string &message)
      : Error("usage_error", message) {}
};

class NotFoundError : public Error {
 public:
  explicit NotFoundError(const std::string &message)
      : Error("not_found", message) {}
};

class DegeneratePathError : public Error {
 public:
  explicit DegeneratePathError(const std::string &message)
      : Error("degenerate_path", message) {}
};

class VocabularyError : public Error {
 public:
  explicit VocabularyError(const std::string &message)
      : Error("unknown_id", message) {}
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string &message)
      : Error("numeric_error", message) {}
};

}  // namespace patmine

#endif  // PATMINE_ERROR_H_
