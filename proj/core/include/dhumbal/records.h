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

#ifndef DHUMBAL_RECORDS_H_
#define DHUMBAL_RECORDS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dhumbal/engine.h"

namespace dhumbal {

struct JhyapCall {
  int agent = 0;
  int hand_value = 0;
  bool success = false;
  friend bool operator==(const JhyapCall&, const JhyapCall&) = default;
};

// One participant's share of a round.
struct AgentRoundStats {
  std::int64_t coin_delta = 0;
  int cards_discarded = 0;
  double reward = 0.0;
  int final_hand_value = 0;
  int decisions = 0;
  double decision_ms = 0.0;  // wall clock, summed over decisions
  friend bool operator==(const AgentRoundStats&, const AgentRoundStats&) = default;
};

// Everything the metrics need about one round. Agent indices refer to the
// tournament's participant list, not to seats.
struct RoundRecord {
  int round_index = 0;
  std::vector<int> seating;  // seating[seat] = agent index
  std::optional<int> winner;
  EndReason end_reason = EndReason::kJhyapShowdown;
  int turns = 0;  // player turns started
  std::optional<JhyapCall> jhyap;
  std::vector<AgentRoundStats> agents;
  friend bool operator==(const RoundRecord&, const RoundRecord&) = default;
};

struct AgentMetrics {
  std::string name;
  int wins = 0;
  double win_rate = 0.0;  // percent
  double ci_low = 0.0;
  double ci_high = 0.0;
  double economic_performance = 0.0;  // mean coin delta per round
  int jhyap_calls = 0;
  int jhyap_successes = 0;
  std::optional<double> jhyap_success;  // percent; absent without calls
  double cards_per_round = 0.0;
  double avg_reward = 0.0;
  double avg_turns = 0.0;
  double avg_hand_value = 0.0;
  std::optional<double> avg_decision_ms;
  std::optional<double> risk_correlation;
  std::int64_t total_coin_delta = 0;
  friend bool operator==(const AgentMetrics&, const AgentMetrics&) = default;
};

struct MetricsSummary {
  int rounds = 0;
  int draws = 0;
  std::vector<AgentMetrics> agents;
  friend bool operator==(const MetricsSummary&, const MetricsSummary&) = default;
};

}  // namespace dhumbal

#endif  // DHUMBAL_RECORDS_H_
