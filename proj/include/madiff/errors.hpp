// Copyright 2026 The madiff Authors.
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

namespace madiff {

/// Base class for every error raised by the library. `category()` is a short
/// machine-parsable tag the CLI prints on failure.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* category() const noexcept = 0;
};

/// Bad shapes, out-of-range indices, invalid parameters.
class ArgumentError : public Error {
 public:
  using Error::Error;
  const char* category() const noexcept override { return "argument"; }
};

/// Numerically degenerate input (zero spectrum, all-zero column, non-PD).
class DegenerateInputError : public Error {
 public:
  using Error::Error;
  const char* category() const noexcept override { return "degenerate_input"; }
};

/// Value outside a function's mathematical domain (e.g. log of nonpositive).
class DomainError : public Error {
 public:
  using Error::Error;
  const char* category() const noexcept override { return "domain"; }
};

/// Malformed input file.
class ParseError : public Error {
 public:
  using Error::Error;
  const char* category() const noexcept override { return "parse"; }
};

class IoError : public Error {
 public:
  using Error::Error;
  const char* category() const noexcept override { return "io"; }
};

}  // namespace madiff
