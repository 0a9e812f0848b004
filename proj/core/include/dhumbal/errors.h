// Copyright 2026 The Dhumbal Bench Authors
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

#ifndef DHUMBAL_ERRORS_H_
#define DHUMBAL_ERRORS_H_

#include <stdexcept>
#include <string>

namespace dhumbal {

// Argument outside the mathematical domain of a function (rank 14, rounds 0).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Invalid table or tournament configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An action that the rules forbid in the current position.
class RuleViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// An action or query issued in the wrong phase or on a finished round.
class StateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Belief bookkeeping that contradicts what was observed.
class BeliefError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Tensor or vector dimensions do not chain.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed checkpoint, records or config file.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Engine self-check failure (card conservation, zero-sum settlement).
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace dhumbal

#endif  // DHUMBAL_ERRORS_H_
