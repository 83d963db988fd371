// Copyright 2026 The pimas Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace pimas {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter or input record failed validation. The message names the field.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// lambda supplied explicitly but inconsistent with nu * R.
class CouplingError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Argument outside the domain of a function (e.g. t > T).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Every assignment has zero weight.
class DegeneratePosteriorError : public Error {
 public:
  using Error::Error;
};

/// Enumeration would exceed the configured state budget.
class SizeError : public Error {
 public:
  using Error::Error;
};

/// An elimination clique exceeds the configured table size.
class TreewidthError : public Error {
 public:
  using Error::Error;
};

/// Random graph sampling gave up after its retry budget.
class GenerationError : public Error {
 public:
  using Error::Error;
};

/// Monte-Carlo kill probability per step exceeded the guard.
class StepSizeError : public Error {
 public:
  using Error::Error;
};

/// No surviving Monte-Carlo mass to estimate from.
class EstimationError : public Error {
 public:
  using Error::Error;
};

/// Scenario or CSV text could not be parsed.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace pimas
