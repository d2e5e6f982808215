/*
   Copyright 2026 The lxray Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <stdexcept>
#include <string>

namespace lxray {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An operation's precondition does not hold (dimension mismatch, zero
/// vector, dependent plane vectors, beta < r, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A sinogram lacks a line the reconstruction needs. Never imputed as 0.
class MissingEntryError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// A weight evaluated to zero at a queried (point, direction).
class ZeroWeightError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// Reconstruction plan does not cover the lattice points its rays meet.
class PlanError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// Exhaustive enumeration would exceed the configured work budget.
class BudgetError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Exact integer arithmetic would overflow.
class OverflowError : public Error {
 public:
  using Error::Error;
};

}  // namespace lxray
