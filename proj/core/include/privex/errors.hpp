// Copyright 2026 The Privex Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PRIVEX_ERRORS_HPP_
#define PRIVEX_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace privex {

// Caller handed us something that violates a documented precondition.
class InvalidInputError : public std::invalid_argument {
 public:
  explicit InvalidInputError(const std::string& what)
      : std::invalid_argument(what) {}
};

// A numerical routine failed to converge or an internal invariant broke.
// The message carries diagnostics (iteration counts, residuals, ...).
class InternalError : public std::runtime_error {
 public:
  explicit InternalError(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem-level failure; message names the offending path.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input file; message carries "path:line:" context.
class ParseError : public InvalidInputError {
 public:
  explicit ParseError(const std::string& what) : InvalidInputError(what) {}
};

}  // namespace privex

#endif  // PRIVEX_ERRORS_HPP_
