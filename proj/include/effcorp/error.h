// Copyright 2026 The effcorp Authors.
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

#ifndef EFFCORP_ERROR_H_
#define EFFCORP_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace effcorp {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input violates a documented invariant or precondition. Maps to CLI exit
// code 1.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string &message)
      : Error(message), violations_{message} {}
  ValidationError(const std::string &message,
                  std::vector<std::string> violations)
      : Error(message), violations_(std::move(violations)) {}

  const std::vector<std::string> &violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

// Malformed input text. Carries the byte offset (XML) or 1-based line number
// (line-oriented formats) where parsing failed.
class ParseError : public ValidationError {
 public:
  ParseError(const std::string &message, std::size_t location)
      : ValidationError(message), location_(location) {}

  std::size_t location() const { return location_; }

 private:
  std::size_t location_;
};

// File could not be read or written. Maps to CLI exit code 2.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace effcorp

#endif  // EFFCORP_ERROR_H_
