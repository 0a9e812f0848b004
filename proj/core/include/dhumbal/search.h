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

#ifndef DHUMBAL_SEARCH_H_
#define DHUMBAL_SEARCH_H_

#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dhumbal/agent.h"
#include "dhumbal/belief.h"
#include "dhumbal/engine.h"

namespace dhumbal {

struct SearchConfig {
  int iterations = 1000;
  int determinizations = 3;
  double exploration = std::sqrt(2.0);
  int max_rollout_depth = 200;
  // Wall-clock cap per decision. Unset keeps decisions reproducible.
  std::optional<int> time_limit_ms;
};

// Throws ConfigError unless iterations >= 1, determinizations >= 1 and
// exploration > 0.
void validate(const SearchConfig& config);

// X + C * (l / d) * sqrt(ln N / n). Unvisited children (n = 0) score +inf.
double ucb_score(double mean, double parent_visits, double visits, double legal, double trials,
                 double exploration);

// Uniformly random legal play until the round ends or max_depth actions have
// been applied. Returns the coin deltas, all zero when the cap was hit.
std::vector<std::int64_t> rollout_deltas(RoundState& state, Rng& rng, int max_depth);
// The coin delta of `player` from rollout_deltas.
double rollout(RoundState state, int player, Rng& rng, int max_depth);

// Tree key of an action: kind in the top bits, discard cards or the choice
// in the low bits.
using ActionKey = std::uint64_t;
ActionKey action_key(const Action& action);

struct ChildStats {
  Action action;
  int visits = 0;
  double mean = 0.0;
  double legal = 0.0;
};

struct SearchResult {
  Action action;
  int iterations = 0;
  std::vector<ChildStats> root;  // one entry per root-legal action
};

// One determinization per iteration for plain MCTS, config.determinizations
// for ISMCTS. Both share one action-keyed tree whose children remember how
// often they were legal in the sampled worlds. The returned action is the
// most visited root action (ties: higher mean), always legal for `obs`.
SearchResult search(const Observation& obs, const BeliefState& belief, const SearchConfig& config,
                    int worlds_per_iteration, const RoundConfig& rules, Rng& rng);
Action mcts_decide(const Observation& obs, const BeliefState& belief, const SearchConfig& config,
                   const RoundConfig& rules, Rng& rng);
Action ismcts_decide(const Observation& obs, const BeliefState& belief, const SearchConfig& config,
                     const RoundConfig& rules, Rng& rng);

enum class SearchKind : std::uint8_t { kMcts, kIsmcts };

class SearchAgent : public Agent {
 public:
  SearchAgent(SearchKind kind, SearchConfig config, RoundConfig rules = {});

  std::string name() const override { return kind_ == SearchKind::kMcts ? "MCTS" : "ISMCTS"; }
  void begin_round(const Observation& obs) override;
  Action act(const Observation& obs, Rng& rng) override;
  void observe(const GameEvent& event) override;
  std::unique_ptr<Agent> clone() const override { return std::make_unique<SearchAgent>(*this); }

  const SearchConfig& config() const { return config_; }
  const BeliefState& belief() const { return belief_; }

 private:
  SearchKind kind_;
  SearchConfig config_;
  RoundConfig rules_;
  BeliefState belief_;
  bool tracking_ = false;
};

}  // namespace dhumbal

#endif  // DHUMBAL_SEARCH_H_
