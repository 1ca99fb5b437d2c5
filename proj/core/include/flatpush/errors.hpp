// Copyright 2026 The flatpush Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace flatpush {

// Base class for every error raised by the library. The CLI maps the
// concrete type onto a process exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid argument outside an operation's domain (non-positive dimension,
// coordinate outside [0, 1], malformed input file, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A flat jet whose first derivative vanishes, so the inflation maps are
// undefined.
class SingularJetError : public Error {
 public:
  enum class Which { kSlider, kPusher, kPath };
  SingularJetError(Which which, const std::string& what)
      : Error(what), which_(which) {}
  Which which() const { return which_; }

 private:
  Which which_;
};

class GeometryError : public Error {
 public:
  using Error::Error;
};

// Non-finite values or a numerical routine that failed to converge.
class NumericError : public Error {
 public:
  NumericError(const std::string& what, long step = -1)
      : Error(what), step_(step) {}
  // Integration step index at which the failure was detected, -1 if n/a.
  long step() const { return step_; }

 private:
  long step_;
};

class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// A time law that drives the path coordinate past 1 before the horizon.
class OvershootError : public Error {
 public:
  OvershootError(const std::string& what, double time)
      : Error(what), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

// Solver failure; the message carries the status and residual report.
class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace flatpush
