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

#ifndef DHUMBAL_BELIEF_H_
#define DHUMBAL_BELIEF_H_

#include <vector>

#include "dhumbal/cards.h"
#include "dhumbal/engine.h"

namespace dhumbal {

// What one seat can infer about hidden cards from the public record: its own
// hand, the discard pile, every opponent's hand size and the cards opponents
// are known to hold because they took them from the pile.
class BeliefState {
 public:
  BeliefState() = default;
  // Belief at the start of a round (no known opponent cards).
  static BeliefState from_observation(const Observation& obs);

  int seat() const { return seat_; }
  int num_players() const { return static_cast<int>(hand_sizes_.size()); }
  CardSet own_hand() const { return own_hand_; }
  CardSet discard_pile() const { return pile_; }
  int hand_size(int seat) const { return hand_sizes_.at(seat); }
  CardSet known_cards(int seat) const { return known_.at(seat); }
  bool round_over() const { return round_over_; }

  // Cards that are in some opponent's unknown slots or in the stock.
  CardSet unseen_pool() const;
  // Stock size implied by the bookkeeping.
  int stock_estimate() const;

  // Applies one event as delivered to this seat. Throws BeliefError when the
  // event contradicts the belief. A round end resets the belief.
  void update(const GameEvent& event);

  // Throws BeliefError unless own hand, pile and hand sizes match `obs`.
  void check_against(const Observation& obs) const;
  // Throws BeliefError on overlapping sets or impossible counts.
  void check_invariants() const;

 private:
  int seat_ = 0;
  CardSet own_hand_;
  CardSet pile_;
  std::vector<int> hand_sizes_;
  std::vector<CardSet> known_;
  bool round_over_ = false;
};

// A full hidden state consistent with `belief` and `obs`: opponents get their
// known cards plus a uniform sample of the unseen pool, the rest becomes the
// stock in random order. Throws BeliefError when the pool is too small.
RoundState determinize(const BeliefState& belief, const Observation& obs, const RoundConfig& rules,
                       Rng& rng);

}  // namespace dhumbal

#endif  // DHUMBAL_BELIEF_H_
