// Copyright 2026 The povmc Authors
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

namespace povmc {

/// Base class for all domain errors raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A matrix expected to have orthonormal columns does not.
class NonIsometry : public Error {
 public:
  using Error::Error;
};

/// An iterative numerical routine exhausted its iteration budget.
class NoConvergence : public Error {
 public:
  using Error::Error;
};

/// A matrix expected to have full column rank is (numerically) rank deficient.
class RankDeficient : public Error {
 public:
  using Error::Error;
};

/// A matrix expected to be unitary is not.
class NotUnitary : public Error {
 public:
  using Error::Error;
};

/// A POVM element collapsed to (numerically) zero weight.
class DegenerateElement : public Error {
 public:
  using Error::Error;
};

/// A candidate fiducial state does not generate a symmetric IC set.
class NotFiducial : public Error {
 public:
  using Error::Error;
};

/// The POVM extracted from a dilation is not symmetric informationally
/// complete, but the operation requires one.
class NotSic : public Error {
 public:
  using Error::Error;
};

/// The POVM is not informationally complete, so its measurement channel
/// cannot be inverted.
class NotIC : public Error {
 public:
  using Error::Error;
};

/// The four kets do not sum to the identity, so no dilation exists.
class IncompletePovm : public Error {
 public:
  using Error::Error;
};

/// A parameter search found no crossing on any scanned axis.
class SearchFailed : public Error {
 public:
  using Error::Error;
};

/// A synthesized circuit failed to reproduce its target unitary.
class SynthesisMismatch : public Error {
 public:
  using Error::Error;
};

/// Every measurement branch has (numerically) zero probability: the
/// simulated state has been corrupted.
class ZeroProbabilityBranch : public Error {
 public:
  using Error::Error;
};

/// Relaxation times or durations outside the physical domain.
class InvalidTimes : public Error {
 public:
  using Error::Error;
};

/// Requested register size exceeds the dense-simulation limit.
class TooLarge : public Error {
 public:
  using Error::Error;
};

}  // namespace povmc
