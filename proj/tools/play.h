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

#ifndef DHUMBAL_TOOLS_PLAY_H_
#define DHUMBAL_TOOLS_PLAY_H_

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "dhumbal/agent.h"
#include "dhumbal/config.h"
#include "dhumbal/records.h"

namespace dhumbal::cli {

// Input ended or the player typed "quit".
class PlayAborted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A seat driven by lines of text. Input is checked against the legal move
// set before anything reaches the engine; bad lines are answered with the
// reason and the legal options, then read again.
class HumanAgent : public Agent {
 public:
  HumanAgent(std::istream& in, std::ostream& out) : in_(in), out_(out) {}

  std::string name() const override { return "Human"; }
  void begin_round(const Observation& obs) override;
  Action act(const Observation& obs, Rng& rng) override;
  void observe(const GameEvent& event) override;
  std::unique_ptr<Agent> clone() const override;

  // Every action applied this round, in order, from any seat.
  const std::vector<Action>& round_actions() const { return actions_; }
  int rejected_inputs() const { return rejected_; }
  void set_seat_names(std::vector<std::string> names) { seat_names_ = std::move(names); }

 private:
  void render(const Observation& obs) const;
  void list_options(const Observation& obs) const;
  std::string seat_name(int seat) const;

  std::istream& in_;
  std::ostream& out_;
  int seat_ = 0;
  int rejected_ = 0;
  std::vector<Action> actions_;
  std::vector<std::string> seat_names_;
};

struct PlayOptions {
  std::vector<std::string> opponents{"aggressive", "balanced", "conservative"};
  int rounds = 1;
  std::uint64_t seed = kDefaultSeed;
  ExperimentConfig config;
};

struct PlayedRound {
  Rng deal_rng;                      // generator state right before the deal
  std::vector<std::int64_t> coins;   // balances before the round, by seat
  std::vector<Action> actions;       // every applied action
  RoundRecord record;
};

struct PlayResult {
  std::vector<PlayedRound> rounds;
  std::vector<std::int64_t> coins;  // final balances, by seat
  int rejected_inputs = 0;
  bool aborted = false;
};

// The human sits in seat 0 and the opponents fill seats 1.. in order.
PlayResult play_session(const PlayOptions& options, std::istream& in, std::ostream& out);

}  // namespace dhumbal::cli

#endif  // DHUMBAL_TOOLS_PLAY_H_
