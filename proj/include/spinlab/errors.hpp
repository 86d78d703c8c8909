// Copyright 2026 The spinlab Authors
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

namespace spinlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (bad spec, non-hermitian input, ...).
class ContractError : public Error {
 public:
  using Error::Error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

/// Integrator step budget exhausted.
class BudgetError : public Error {
 public:
  using Error::Error;
};

/// Every residual in a sweep sits below double-precision resolution, so no slope can be fitted.
class PrecisionFloorError : public Error {
 public:
  using Error::Error;
};

class SingularityError : public Error {
 public:
  using Error::Error;
};

/// A gate protocol did not close (barrier failed to revive).
class ProtocolError : public Error {
 public:
  using Error::Error;
};

class NoRevivalWindowError : public Error {
 public:
  using Error::Error;
};

}  // namespace spinlab
