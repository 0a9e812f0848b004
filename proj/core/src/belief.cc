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

#include "dhumbal/belief.h"

#include <string>

#include "dhumbal/errors.h"

namespace dhumbal {

BeliefState BeliefState::from_observation(const Observation& obs) {
  BeliefState b;
  b.seat_ = obs.player;
  b.own_hand_ = obs.own_hand;
  b.pile_ = obs.discard_pile();
  b.hand_sizes_ = obs.hand_sizes;
  b.known_.assign(obs.hand_sizes.size(), CardSet{});
  b.check_invariants();
  return b;
}

CardSet BeliefState::unseen_pool() const {
  CardSet seen = own_hand_ | pile_;
  for (CardSet k : known_) seen |= k;
  return CardSet::full_deck() - seen;
}

int BeliefState::stock_estimate() const {
  int hidden = 0;
  for (int s = 0; s < num_players(); ++s) {
    if (s != seat_) hidden += hand_sizes_[s] - known_[s].size();
  }
  return unseen_pool().size() - hidden;
}

void BeliefState::update(const GameEvent& event) {
  if (round_over_) throw BeliefError("belief updated after the round ended");
  if (const auto* d = std::get_if<DiscardEvent>(&event)) {
    const int p = d->player;
    const CardSet cards = d->group.cards;
    if (p < 0 || p >= num_players()) throw BeliefError("event names an unknown seat");
    if ((cards & pile_) != CardSet{}) throw BeliefError("discarded card already on the pile");
    if (p == seat_) {
      if ((cards - own_hand_) != CardSet{}) throw BeliefError("own discard not in own hand");
      own_hand_ -= cards;
    } else {
      if ((cards & own_hand_) != CardSet{}) throw BeliefError("opponent discarded a card we hold");
      for (int s = 0; s < num_players(); ++s) {
        if (s != p && (cards & known_[s]) != CardSet{}) {
          throw BeliefError("opponent discarded a card known to be elsewhere");
        }
      }
      known_[p] -= cards;
    }
    if (hand_sizes_[p] < cards.size()) throw BeliefError("discard larger than the hand");
    hand_sizes_[p] -= cards.size();
    pile_ |= cards;
  } else if (const auto* pk = std::get_if<PickEvent>(&event)) {
    const int p = pk->player;
    if (p < 0 || p >= num_players()) throw BeliefError("event names an unknown seat");
    if (pk->source == PickSource::kDiscardTop) {
      if (!pk->card || !pile_.contains(*pk->card)) {
        throw BeliefError("picked card is not on the pile");
      }
      pile_.erase(*pk->card);
      if (p == seat_) {
        own_hand_.insert(*pk->card);
      } else {
        known_[p].insert(*pk->card);
      }
    } else if (p == seat_) {
      if (!pk->card) throw BeliefError("own stock pick without the drawn card");
      if (!unseen_pool().contains(*pk->card)) throw BeliefError("drawn card was not unseen");
      own_hand_.insert(*pk->card);
    }
    ++hand_sizes_[p];
    if ((pk->reshuffled - pile_) != CardSet{}) throw BeliefError("reshuffled card was not on the pile");
    pile_ -= pk->reshuffled;
  } else if (std::holds_alternative<RoundEndEvent>(event)) {
    round_over_ = true;
    known_.assign(known_.size(), CardSet{});
    return;
  }
  check_invariants();
}

void BeliefState::check_against(const Observation& obs) const {
  if (obs.player != seat_) throw BeliefError("observation is for another seat");
  if (obs.own_hand != own_hand_) throw BeliefError("own hand diverged from the observation");
  if (obs.discard_pile() != pile_) throw BeliefError("discard pile diverged from the observation");
  if (obs.hand_sizes != hand_sizes_) throw BeliefError("hand sizes diverged from the observation");
  if (obs.stock_size != stock_estimate()) throw BeliefError("stock size diverged from the observation");
}

void BeliefState::check_invariants() const {
  if ((own_hand_ & pile_) != CardSet{}) throw BeliefError("own hand overlaps the pile");
  if (hand_sizes_.empty() || seat_ < 0 || seat_ >= num_players()) throw BeliefError("bad seat");
  if (own_hand_.size() != hand_sizes_[seat_]) throw BeliefError("own hand size mismatch");
  CardSet all_known;
  for (int s = 0; s < num_players(); ++s) {
    const CardSet k = known_[s];
    if (s == seat_ && k != CardSet{}) throw BeliefError("own seat has known cards");
    if (k.size() > hand_sizes_[s]) throw BeliefError("more known cards than hand size");
    if ((k & (own_hand_ | pile_ | all_known)) != CardSet{}) {
      throw BeliefError("known card placed twice");
    }
    all_known |= k;
  }
  if (stock_estimate() < 0) throw BeliefError("hand sizes exceed the unseen cards");
}

RoundState determinize(const BeliefState& belief, const Observation& obs, const RoundConfig& rules,
                       Rng& rng) {
  const int n = belief.num_players();
  std::vector<Card> pool = belief.unseen_pool().to_vector();
  int needed = 0;
  for (int s = 0; s < n; ++s) {
    if (s != belief.seat()) needed += belief.hand_size(s) - belief.known_cards(s).size();
  }
  if (needed > static_cast<int>(pool.size())) {
    throw BeliefError("unseen pool holds " + std::to_string(pool.size()) + " cards, need " +
                      std::to_string(needed));
  }
  rng.shuffle(std::span<Card>(pool));
  std::vector<PlayerState> players(n);
  std::size_t next = 0;
  for (int s = 0; s < n; ++s) {
    if (s == belief.seat()) {
      players[s].hand = belief.own_hand();
      players[s].coins = obs.own_coins;
      continue;
    }
    CardSet hand = belief.known_cards(s);
    const int missing = belief.hand_size(s) - hand.size();
    for (int i = 0; i < missing; ++i) hand.insert(pool[next++]);
    players[s].hand = hand;
    players[s].coins = static_cast<std::int64_t>(obs.avg_opponent_coins);
  }
  std::vector<Card> stock(pool.begin() + static_cast<std::ptrdiff_t>(next), pool.end());
  RoundConfig config = rules;
  config.num_players = n;
  config.check_invariants = false;
  return RoundState::from_parts(config, std::move(players), std::move(stock), obs.discard_stack,
                                obs.current_player, obs.phase, obs.turn_count, rng.fork(),
                                obs.round_index);
}

}  // namespace dhumbal
