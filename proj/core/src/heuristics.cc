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

#include "dhumbal/heuristics.h"

#include <algorithm>
#include <string>

#include "dhumbal/errors.h"

namespace dhumbal {

std::string_view to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::kAggressive: return "Aggressive";
    case ProfileKind::kConservative: return "Conservative";
    case ProfileKind::kBalanced: return "Balanced";
    case ProfileKind::kOpportunistic: return "Opportunistic";
  }
  return "?";
}

std::optional<ProfileKind> parse_profile_kind(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "aggressive") return ProfileKind::kAggressive;
  if (lower == "conservative") return ProfileKind::kConservative;
  if (lower == "balanced") return ProfileKind::kBalanced;
  if (lower == "opportunistic") return ProfileKind::kOpportunistic;
  return std::nullopt;
}

HeuristicProfile HeuristicProfile::aggressive() { return {}; }

HeuristicProfile HeuristicProfile::conservative() {
  HeuristicProfile p;
  p.kind = ProfileKind::kConservative;
  p.jhyap_threshold = 7;
  p.high_value_preference = 0.6;
  p.risk_factor = 0.8;
  p.pick_threshold = 3;
  p.secondary_pick_threshold = 5;
  return p;
}

HeuristicProfile HeuristicProfile::balanced() {
  HeuristicProfile p;
  p.kind = ProfileKind::kBalanced;
  p.jhyap_threshold = 10;
  // Midpoints of the Aggressive and Conservative settings.
  p.high_value_preference = 0.8;
  p.risk_factor = 1.0;
  p.pick_threshold = 4;
  return p;
}

HeuristicProfile HeuristicProfile::opportunistic() {
  HeuristicProfile p;
  p.kind = ProfileKind::kOpportunistic;
  p.jhyap_threshold = 8;
  p.high_value_preference = 0.8;
  p.risk_factor = 1.2;
  p.pick_threshold = 4;
  return p;
}

HeuristicProfile HeuristicProfile::of(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::kAggressive: return aggressive();
    case ProfileKind::kConservative: return conservative();
    case ProfileKind::kBalanced: return balanced();
    case ProfileKind::kOpportunistic: return opportunistic();
  }
  return aggressive();
}

HandAnalysis analyze_hand(CardSet hand) {
  HandAnalysis a;
  a.total_value = hand_value(hand);
  if (hand.empty()) return a;
  for (const auto& g : enumerate_legal_discards(hand)) {
    if (g.kind == GroupKind::kSet) a.same_rank_groups.push_back(g);
    if (g.kind == GroupKind::kSequence) a.sequences.push_back(g);
  }
  for (Card c : hand) {
    if (c.value() >= 7) {
      a.high_cards.insert(c);
    } else {
      a.low_cards.insert(c);
    }
  }
  return a;
}

double discard_score(CardSet hand, const DiscardGroup& group, const HeuristicProfile& profile) {
  if (!is_legal_discard(hand, group)) {
    throw RuleViolation("cannot score illegal discard " + to_string(group));
  }
  const int total = hand_value(hand);
  const int v = group.value();
  const int remaining = total - v;
  const double improvement =
      total == 0 ? 0.0 : std::max(0.0, static_cast<double>(total - remaining) / total) * 10.0;
  const double raw = v * profile.high_value_preference + group.size() * profile.multi_card_bonus +
                     (group.kind == GroupKind::kSequence ? profile.sequence_bonus : 0.0) +
                     (remaining <= kJhyapThreshold ? 50.0 : 0.0) + improvement;
  return raw * profile.risk_factor;
}

AdaptedParameters opportunistic_adapt(std::int64_t own_coins, double avg_opponent_coins) {
  if (static_cast<double>(own_coins) >= avg_opponent_coins) return {1.2, 0.8, 8};
  return {0.8, 0.3, 9};
}

HeuristicProfile effective_profile(const HeuristicProfile& profile, const Observation& obs) {
  if (profile.kind != ProfileKind::kOpportunistic) return profile;
  HeuristicProfile p = profile;
  const auto adapted = opportunistic_adapt(obs.own_coins, obs.avg_opponent_coins);
  p.risk_factor = adapted.risk_factor;
  p.high_value_preference = adapted.high_value_preference;
  p.jhyap_threshold = adapted.jhyap_threshold;
  const bool ahead = adapted.jhyap_threshold == 8;
  if (ahead) {
    p.pick_threshold = 4;
    p.secondary_pick_threshold.reset();
  } else {
    p.pick_threshold = 3;
    p.secondary_pick_threshold = 5;
  }
  return p;
}

bool decide_jhyap(const HeuristicProfile& base, const Observation& obs, Rng& rng) {
  const int v = obs.hand_value();
  if (v > kJhyapThreshold) return false;
  const HeuristicProfile p = effective_profile(base, obs);
  if (p.kind != ProfileKind::kBalanced) return v <= p.jhyap_threshold;
  if (v <= p.certain_jhyap_max) return true;
  if (v <= p.mid_band_max) return rng.bernoulli(p.mid_band_probability);
  if (v <= p.jhyap_threshold) return rng.bernoulli(p.high_band_probability);
  return false;
}

DiscardGroup decide_discard(const HeuristicProfile& base, const Observation& obs) {
  const HeuristicProfile p = effective_profile(base, obs);
  const CardSet hand = obs.own_hand;
  auto candidates = enumerate_legal_discards(hand);
  const int total = hand_value(hand);

  if (p.kind == ProfileKind::kConservative && total <= p.selective_hand_max) {
    const Card lowest = *std::min_element(hand.begin(), hand.end(), [](Card a, Card b) {
      return a.value() < b.value();
    });
    std::vector<DiscardGroup> kept;
    for (const auto& g : candidates) {
      if (!g.cards.contains(lowest) || total - g.value() <= p.selective_keep_max) kept.push_back(g);
    }
    if (!kept.empty()) candidates = std::move(kept);
  }

  // Strictly better: Balanced ranks by length first; then score, then
  // larger n, larger v. Equal keys keep the earlier canonical group.
  const bool length_first = p.kind == ProfileKind::kBalanced;
  const DiscardGroup* best = nullptr;
  double best_score = 0.0;
  for (const auto& g : candidates) {
    const double score = discard_score(hand, g, p);
    if (best == nullptr) {
      best = &g;
      best_score = score;
      continue;
    }
    bool better = false;
    if (length_first && g.size() != best->size()) {
      better = g.size() > best->size();
    } else if (score != best_score) {
      better = score > best_score;
    } else if (g.size() != best->size()) {
      better = g.size() > best->size();
    } else if (g.value() != best->value()) {
      better = g.value() > best->value();
    }
    if (better) {
      best = &g;
      best_score = score;
    }
  }
  return *best;
}

bool completes_combination(CardSet hand, Card card) {
  if (hand.rank_mask(card.rank()) != 0) return true;
  const Suit suit = card.suit();
  auto has = [&](int rank) { return rank >= 1 && rank <= kNumRanks && hand.contains(Card(rank, suit)); };
  int below = 0;
  while (has(card.rank() - below - 1)) ++below;
  int above = 0;
  while (has(card.rank() + above + 1)) ++above;
  return below + above + 1 >= 3;
}

PickSource decide_pick(const HeuristicProfile& base, const Observation& obs) {
  if (!obs.discard_top) return PickSource::kStock;
  const HeuristicProfile p = effective_profile(base, obs);
  const Card top = *obs.discard_top;
  int threshold = p.pick_threshold;
  if (p.secondary_pick_threshold && obs.hand_value() > kJhyapThreshold) {
    threshold = *p.secondary_pick_threshold;
  }
  if (top.value() <= threshold || completes_combination(obs.own_hand, top)) {
    return PickSource::kDiscardTop;
  }
  return PickSource::kStock;
}

std::string HeuristicAgent::name() const { return std::string(to_string(profile_.kind)); }

Action HeuristicAgent::act(const Observation& obs, Rng& rng) {
  switch (obs.phase) {
    case Phase::kJhyapCheck: return JhyapChoice{decide_jhyap(profile_, obs, rng)};
    case Phase::kDiscard: return decide_discard(profile_, obs);
    case Phase::kPick: return decide_pick(profile_, obs);
  }
  throw StateError("unknown phase");
}

}  // namespace dhumbal
