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

#ifndef DHUMBAL_HEURISTICS_H_
#define DHUMBAL_HEURISTICS_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dhumbal/agent.h"
#include "dhumbal/cards.h"
#include "dhumbal/engine.h"

namespace dhumbal {

enum class ProfileKind : std::uint8_t { kAggressive, kConservative, kBalanced, kOpportunistic };

std::string_view to_string(ProfileKind kind);
std::optional<ProfileKind> parse_profile_kind(std::string_view name);

// Parameters of one rule-based agent. Discard scoring:
//   s = (v*p_h + n*b_m + b_s*[sequence] + 50*[V_r <= 10]
//        + max(0, (V - V_r)/V)*10) * r
struct HeuristicProfile {
  ProfileKind kind = ProfileKind::kAggressive;
  int jhyap_threshold = 10;
  double high_value_preference = 1.0;  // p_h
  double risk_factor = 1.2;            // r
  double multi_card_bonus = 2.0;       // b_m
  double sequence_bonus = 3.0;         // b_s
  int pick_threshold = 4;
  // Conservative takes cards up to this value once its hand is above 10.
  std::optional<int> secondary_pick_threshold;

  // Balanced declares always at <= certain_jhyap_max, with
  // mid_band_probability up to mid_band_max and high_band_probability
  // up to jhyap_threshold.
  int certain_jhyap_max = 5;
  int mid_band_max = 8;
  double mid_band_probability = 0.70;
  double high_band_probability = 0.40;

  // Conservative keeps its lowest card while V <= selective_hand_max unless
  // the discard leaves V_r <= selective_keep_max.
  int selective_hand_max = 12;
  int selective_keep_max = 7;

  static HeuristicProfile aggressive();
  static HeuristicProfile conservative();
  static HeuristicProfile balanced();
  static HeuristicProfile opportunistic();
  static HeuristicProfile of(ProfileKind kind);
};

struct HandAnalysis {
  int total_value = 0;
  std::vector<DiscardGroup> same_rank_groups;
  std::vector<DiscardGroup> sequences;
  CardSet high_cards;  // value >= 7
  CardSet low_cards;   // value <= 6
};

HandAnalysis analyze_hand(CardSet hand);

// Throws RuleViolation when `group` is not a legal discard from `hand`.
double discard_score(CardSet hand, const DiscardGroup& group, const HeuristicProfile& profile);

bool decide_jhyap(const HeuristicProfile& profile, const Observation& obs, Rng& rng);
DiscardGroup decide_discard(const HeuristicProfile& profile, const Observation& obs);
PickSource decide_pick(const HeuristicProfile& profile, const Observation& obs);

// True when `card` would make a same-rank pair/set or a run of three or more
// together with `hand`.
bool completes_combination(CardSet hand, Card card);

struct AdaptedParameters {
  double risk_factor = 0.0;
  double high_value_preference = 0.0;
  int jhyap_threshold = 0;
  friend bool operator==(const AdaptedParameters&, const AdaptedParameters&) = default;
};

// Ahead (own >= average, ties included): (1.2, 0.8, 8); behind: (0.8, 0.3, 9).
AdaptedParameters opportunistic_adapt(std::int64_t own_coins, double avg_opponent_coins);

// Profile with the Opportunistic adaptation applied for this observation.
HeuristicProfile effective_profile(const HeuristicProfile& profile, const Observation& obs);

class HeuristicAgent : public Agent {
 public:
  explicit HeuristicAgent(HeuristicProfile profile) : profile_(profile) {}

  std::string name() const override;
  Action act(const Observation& obs, Rng& rng) override;
  std::unique_ptr<Agent> clone() const override { return std::make_unique<HeuristicAgent>(*this); }

  const HeuristicProfile& profile() const { return profile_; }

 private:
  HeuristicProfile profile_;
};

}  // namespace dhumbal

#endif  // DHUMBAL_HEURISTICS_H_
