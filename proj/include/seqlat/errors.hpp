// Copyright 2026 The seqlat authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace seqlat {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Bad arguments: unknown ids, schema mismatches, out-of-range values.
class InputError : public Error {
public:
  using Error::Error;
};

/// Invalid run configuration or projection specification.
class ConfigError : public Error {
public:
  using Error::Error;
};

/// Malformed input file; carries the location that failed.
class ParseError : public Error {
public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : Error(source + ":" + std::to_string(line) + ": " + what),
        source_(source),
        line_(line) {}

  const std::string& source() const { return source_; }
  std::size_t line() const { return line_; }

private:
  std::string source_;
  std::size_t line_ = 0;
};

/// A configured resource limit was exceeded; the run aborts cleanly.
class LimitError : public Error {
public:
  using Error::Error;
};

}  // namespace seqlat
