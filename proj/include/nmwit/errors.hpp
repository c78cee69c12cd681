// Copyright 2026 The nmwit Authors
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

namespace nmw {

// Error hierarchy. The CLI maps each category onto a distinct exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Raised when a channel is evaluated outside its completely positive domain.
class CpViolation : public Error {
 public:
  CpViolation(const std::string& what, double time, double min_choi_eig)
      : Error(what), time_(time), min_choi_eig_(min_choi_eig) {}
  double time() const { return time_; }
  double min_choi_eig() const { return min_choi_eig_; }

 private:
  double time_;
  double min_choi_eig_;
};

/// Raised when a time-dependent rate is singular inside an integration window
/// or when rates cannot be extracted (vanishing eigenvalues).
class SingularRateError : public Error {
 public:
  SingularRateError(const std::string& what, double time) : Error(what), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace nmw
