// Copyright 2026 the ssf authors
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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ssf {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input text (expression syntax, file headers, ...).
/// `offset` is the 1-based byte position of the first offending byte.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}

  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// An expression evaluated to 0 where a positive value is required.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

/// An argument violates a documented precondition (out of domain).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A growth function fails the properties the synthesizer relies on.
class NormalizationError : public Error {
 public:
  using Error::Error;
};

/// An internal invariant of the synthesizer state machine failed.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

/// A derived quantity contradicts what the construction guarantees
/// (used by the minimal-system builder).
class ConstructionError : public Error {
 public:
  using Error::Error;
};

/// A configured resource limit (memory budget, evaluation horizon,
/// representable sizes) would be exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

}  // namespace ssf
