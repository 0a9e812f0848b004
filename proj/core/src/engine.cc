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

#include "dhumbal/engine.h"

#include <algorithm>
#include <numeric>
#include <string>

#include "dhumbal/errors.h"

namespace dhumbal {

namespace {

std::int64_t capped(int value) { return std::min(value, kPaymentCap); }

void check_zero_sum(const RoundOutcome& outcome) {
  const auto total = std::accumulate(outcome.coin_delta.begin(), outcome.coin_delta.end(),
                                     std::int64_t{0});
  if (total != 0) throw InvariantViolation("settlement is not zero-sum");
}

}  // namespace

std::string_view to_string(Phase phase) {
  switch (phase) {
    case Phase::kJhyapCheck: return "jhyap_check";
    case Phase::kDiscard: return "discard";
    case Phase::kPick: return "pick";
  }
  return "?";
}

std::string_view to_string(PickSource source) {
  return source == PickSource::kStock ? "stock" : "discard_top";
}

std::string_view to_string(EndReason reason) {
  switch (reason) {
    case EndReason::kJhyapShowdown: return "jhyap_showdown";
    case EndReason::kDeckExhausted: return "deck_exhausted";
    case EndReason::kEmptyHand: return "empty_hand";
    case EndReason::kTurnLimit: return "turn_limit";
  }
  return "?";
}

CardSet Observation::discard_pile() const {
  CardSet pile;
  for (const auto& g : discard_stack) pile |= g.cards;
  return pile;
}

std::vector<int> Observation::opponent_hand_sizes() const {
  std::vector<int> out;
  for (int k = 1; k < num_players; ++k) out.push_back(hand_sizes[(player + k) % num_players]);
  return out;
}

double Observation::mean_opponent_hand_size() const {
  const auto sizes = opponent_hand_sizes();
  if (sizes.empty()) return 0.0;
  return static_cast<double>(std::accumulate(sizes.begin(), sizes.end(), 0)) /
         static_cast<double>(sizes.size());
}

std::string to_string(const Action& action) {
  struct Visitor {
    std::string operator()(JhyapChoice c) const { return c.declare ? "jhyap" : "pass"; }
    std::string operator()(const DiscardGroup& g) const {
      return "discard " + std::string(to_string(g.kind)) + " " + to_string(g);
    }
    std::string operator()(PickSource s) const { return "pick " + std::string(to_string(s)); }
    std::string operator()(InvalidAction a) const { return "invalid#" + std::to_string(a.index); }
  };
  return std::visit(Visitor{}, action);
}

bool is_legal(const Observation& obs, const Action& action) {
  if (obs.current_player != obs.player) return false;
  switch (obs.phase) {
    case Phase::kJhyapCheck:
      if (const auto* c = std::get_if<JhyapChoice>(&action)) {
        return !c->declare || can_declare_jhyap(obs.own_hand);
      }
      return false;
    case Phase::kDiscard:
      if (const auto* g = std::get_if<DiscardGroup>(&action)) return is_legal_discard(obs.own_hand, *g);
      return false;
    case Phase::kPick:
      if (const auto* s = std::get_if<PickSource>(&action)) {
        return *s == PickSource::kStock ? obs.stock_size > 0 : obs.discard_top.has_value();
      }
      return false;
  }
  return false;
}

std::vector<Action> legal_actions(const Observation& obs) {
  std::vector<Action> out;
  switch (obs.phase) {
    case Phase::kJhyapCheck:
      out.emplace_back(JhyapChoice{false});
      if (can_declare_jhyap(obs.own_hand)) out.emplace_back(JhyapChoice{true});
      break;
    case Phase::kDiscard:
      for (auto& g : enumerate_legal_discards(obs.own_hand)) out.emplace_back(g);
      break;
    case Phase::kPick:
      if (obs.stock_size > 0) out.emplace_back(PickSource::kStock);
      if (obs.discard_top) out.emplace_back(PickSource::kDiscardTop);
      break;
  }
  return out;
}

GameEvent redact_for(const GameEvent& event, int viewer) {
  if (const auto* pick = std::get_if<PickEvent>(&event)) {
    if (pick->source == PickSource::kStock && pick->player != viewer) {
      PickEvent hidden = *pick;
      hidden.card.reset();
      return hidden;
    }
  }
  return event;
}

bool can_declare_jhyap(CardSet hand) { return hand_value(hand) <= kJhyapThreshold; }

RoundOutcome settle_showdown(std::span<const int> hand_values, int declarer) {
  const int n = static_cast<int>(hand_values.size());
  if (declarer < 0 || declarer >= n) throw StateError("declarer seat out of range");
  if (hand_values[declarer] > kJhyapThreshold) {
    throw RuleViolation("Jhyap requires a hand value of 10 or less, declarer has " +
                        std::to_string(hand_values[declarer]));
  }
  RoundOutcome out;
  out.coin_delta.assign(n, 0);
  out.final_hand_values.assign(hand_values.begin(), hand_values.end());
  out.end_reason = EndReason::kJhyapShowdown;
  out.jhyap_declared_by = declarer;

  // Lowest non-declarer, first in clockwise order from the declarer's left.
  int best = -1;
  for (int k = 1; k < n; ++k) {
    const int seat = (declarer + k) % n;
    if (best < 0 || hand_values[seat] < hand_values[best]) best = seat;
  }
  if (hand_values[best] > hand_values[declarer]) {
    out.winner = declarer;
    out.jhyap_succeeded = true;
    for (int seat = 0; seat < n; ++seat) {
      if (seat == declarer) continue;
      out.coin_delta[seat] -= capped(hand_values[seat]);
      out.coin_delta[declarer] += capped(hand_values[seat]);
    }
  } else {
    out.winner = best;
    out.jhyap_succeeded = false;
    std::int64_t penalty = 0;
    for (int seat = 0; seat < n; ++seat) penalty += capped(hand_values[seat]);
    out.coin_delta[declarer] -= penalty;
    out.coin_delta[best] += penalty;
  }
  check_zero_sum(out);
  return out;
}

RoundOutcome settle_empty_hand(std::span<const int> hand_values, int winner) {
  const int n = static_cast<int>(hand_values.size());
  RoundOutcome out;
  out.coin_delta.assign(n, 0);
  out.final_hand_values.assign(hand_values.begin(), hand_values.end());
  out.end_reason = EndReason::kEmptyHand;
  out.winner = winner;
  for (int seat = 0; seat < n; ++seat) {
    if (seat == winner) continue;
    out.coin_delta[seat] -= capped(hand_values[seat]);
    out.coin_delta[winner] += capped(hand_values[seat]);
  }
  check_zero_sum(out);
  return out;
}

RoundOutcome resolve_jhyap(const RoundState& state, int declarer) {
  std::vector<int> values;
  for (const auto& p : state.players()) values.push_back(hand_value(p.hand));
  return settle_showdown(values, declarer);
}

std::optional<RoundOutcome> round_termination(const RoundState& state) { return state.outcome(); }

RoundState RoundState::deal(const RoundConfig& config, Rng& rng,
                            std::span<const std::int64_t> coins, int round_index) {
  if (config.num_players < kMinPlayers || config.num_players > kMaxPlayers) {
    throw ConfigError("number of players must be in 2..5, got " +
                      std::to_string(config.num_players));
  }
  if (!coins.empty() && static_cast<int>(coins.size()) != config.num_players) {
    throw ConfigError("coin balances do not match the number of players");
  }
  RoundState s;
  s.config_ = config;
  s.round_index_ = round_index;
  std::vector<Card> deck;
  deck.reserve(kNumCards);
  for (int bit = 0; bit < kNumCards; ++bit) deck.push_back(Card::from_bit(bit));
  rng.shuffle(std::span<Card>(deck));

  s.players_.resize(config.num_players);
  for (int seat = 0; seat < config.num_players; ++seat) {
    if (!coins.empty()) s.players_[seat].coins = coins[seat];
    for (int k = 0; k < kHandSize; ++k) {
      s.players_[seat].hand.insert(deck.back());
      deck.pop_back();
    }
  }
  s.discard_stack_.push_back(DiscardGroup::single(deck.back()));
  deck.pop_back();
  s.stock_ = std::move(deck);
  s.rng_ = rng.fork();
  s.audit();
  return s;
}

RoundState RoundState::from_parts(const RoundConfig& config, std::vector<PlayerState> players,
                                  std::vector<Card> stock, std::vector<DiscardGroup> discard_stack,
                                  int current_player, Phase phase, int turn_count, Rng rng,
                                  int round_index) {
  if (players.size() < static_cast<std::size_t>(kMinPlayers) ||
      players.size() > static_cast<std::size_t>(kMaxPlayers)) {
    throw ConfigError("number of players must be in 2..5");
  }
  if (discard_stack.empty()) throw StateError("discard stack must hold at least one group");
  if (current_player < 0 || current_player >= static_cast<int>(players.size())) {
    throw StateError("current player out of range");
  }
  RoundState s;
  s.config_ = config;
  s.config_.num_players = static_cast<int>(players.size());
  s.players_ = std::move(players);
  s.stock_ = std::move(stock);
  s.discard_stack_ = std::move(discard_stack);
  s.current_player_ = current_player;
  s.phase_ = phase;
  s.turn_count_ = turn_count;
  s.rng_ = rng;
  s.round_index_ = round_index;
  s.check_invariants();
  return s;
}

std::optional<Card> RoundState::pickable_top() const {
  if (phase_ == Phase::kPick) {
    if (discard_stack_.size() < 2) return std::nullopt;
    return discard_stack_[discard_stack_.size() - 2].top();
  }
  if (discard_stack_.empty()) return std::nullopt;
  return discard_stack_.back().top();
}

bool RoundState::can_declare_jhyap() const {
  return !is_terminal() && phase_ == Phase::kJhyapCheck &&
         dhumbal::can_declare_jhyap(players_[current_player_].hand);
}

void RoundState::require_phase(Phase phase, const char* what) const {
  if (is_terminal()) throw StateError(std::string(what) + ": round is over");
  if (phase_ != phase) {
    throw StateError(std::string(what) + " is not allowed in phase " +
                     std::string(to_string(phase_)));
  }
}

void RoundState::finish(RoundOutcome outcome) {
  check_zero_sum(outcome);
  for (int seat = 0; seat < num_players(); ++seat) players_[seat].coins += outcome.coin_delta[seat];
  outcome_ = std::move(outcome);
}

const RoundOutcome& RoundState::declare_jhyap() {
  require_phase(Phase::kJhyapCheck, "Jhyap");
  finish(resolve_jhyap(*this, current_player_));
  return *outcome_;
}

void RoundState::decline_jhyap() {
  require_phase(Phase::kJhyapCheck, "declining Jhyap");
  phase_ = Phase::kDiscard;
}

void RoundState::apply_discard(const DiscardGroup& group) {
  require_phase(Phase::kDiscard, "discard");
  auto& hand = players_[current_player_].hand;
  if (!is_legal_discard(hand, group)) {
    throw RuleViolation("illegal discard: " + to_string(group));
  }
  hand -= group.cards;
  discard_stack_.push_back(group);
  if (hand.empty()) {
    std::vector<int> values;
    for (const auto& p : players_) values.push_back(hand_value(p.hand));
    finish(settle_empty_hand(values, current_player_));
  } else {
    phase_ = Phase::kPick;
  }
  audit();
}

PickResult RoundState::apply_pick(PickSource source) {
  require_phase(Phase::kPick, "pick");
  PickResult result;
  auto& hand = players_[current_player_].hand;
  if (source == PickSource::kDiscardTop) {
    if (discard_stack_.size() < 2) throw StateError("no discard-top card to pick");
    auto& below = discard_stack_[discard_stack_.size() - 2];
    result.card = below.top();
    below.cards.erase(result.card);
    if (below.cards.empty()) discard_stack_.erase(discard_stack_.end() - 2);
  } else {
    if (stock_.empty()) throw StateError("stock is empty");
    result.card = stock_.back();
    stock_.pop_back();
  }
  hand.insert(result.card);

  if (stock_.empty()) {
    // Everything but the newest group goes back into the stock.
    for (std::size_t i = 0; i + 1 < discard_stack_.size(); ++i) {
      result.reshuffled |= discard_stack_[i].cards;
    }
    if (result.reshuffled.empty()) {
      RoundOutcome draw;
      draw.coin_delta.assign(num_players(), 0);
      draw.end_reason = EndReason::kDeckExhausted;
      for (const auto& p : players_) draw.final_hand_values.push_back(hand_value(p.hand));
      finish(std::move(draw));
      audit();
      return result;
    }
    stock_ = result.reshuffled.to_vector();
    rng_.shuffle(std::span<Card>(stock_));
    discard_stack_.erase(discard_stack_.begin(), discard_stack_.end() - 1);
  }
  advance_turn();
  audit();
  return result;
}

void RoundState::advance_turn() {
  const int next = (current_player_ + 1) % num_players();
  if (config_.turn_counting == TurnCounting::kPerPlayerTurn || next == 0) ++turn_count_;
  if (turn_count_ >= config_.turn_limit) {
    RoundOutcome draw;
    draw.coin_delta.assign(num_players(), 0);
    draw.end_reason = EndReason::kTurnLimit;
    for (const auto& p : players_) draw.final_hand_values.push_back(hand_value(p.hand));
    finish(std::move(draw));
    return;
  }
  current_player_ = next;
  phase_ = Phase::kJhyapCheck;
}

GameEvent RoundState::apply(const Action& action) {
  const int actor = current_player_;
  struct Visitor {
    RoundState& s;
    int actor;
    GameEvent operator()(JhyapChoice c) {
      if (c.declare) {
        s.declare_jhyap();
      } else {
        s.decline_jhyap();
      }
      return JhyapEvent{actor, c.declare};
    }
    GameEvent operator()(const DiscardGroup& g) {
      s.apply_discard(g);
      return DiscardEvent{actor, g};
    }
    GameEvent operator()(PickSource src) {
      const auto r = s.apply_pick(src);
      return PickEvent{actor, src, r.card, r.reshuffled};
    }
    GameEvent operator()(InvalidAction a) {
      throw RuleViolation("action index " + std::to_string(a.index) + " is not a legal move");
    }
  };
  return std::visit(Visitor{*this, actor}, action);
}

Observation RoundState::observation_for(int seat) const {
  if (seat < 0 || seat >= num_players()) throw StateError("observer seat out of range");
  Observation obs;
  obs.player = seat;
  obs.num_players = num_players();
  obs.current_player = current_player_;
  obs.own_hand = players_[seat].hand;
  obs.discard_top = pickable_top();
  obs.own_coins = players_[seat].coins;
  std::int64_t others = 0;
  for (int s = 0; s < num_players(); ++s) {
    obs.hand_sizes.push_back(players_[s].hand.size());
    if (s != seat) others += players_[s].coins;
  }
  obs.avg_opponent_coins = static_cast<double>(others) / static_cast<double>(num_players() - 1);
  obs.turn_count = turn_count_;
  obs.phase = phase_;
  obs.round_index = round_index_;
  obs.stock_size = static_cast<int>(stock_.size());
  obs.discard_stack = discard_stack_;
  return obs;
}

void RoundState::check_invariants() const {
  CardSet seen;
  int count = 0;
  auto add = [&](CardSet cards) {
    if (seen.intersects(cards)) throw InvariantViolation("card appears in two places");
    seen |= cards;
    count += cards.size();
  };
  for (const auto& p : players_) add(p.hand);
  for (Card c : stock_) add(CardSet{c});
  for (const auto& g : discard_stack_) {
    if (g.cards.empty()) throw InvariantViolation("empty group on the discard stack");
    add(g.cards);
  }
  if (count != kNumCards || seen != CardSet::full_deck()) {
    throw InvariantViolation("cards are not conserved: " + std::to_string(count) + " present");
  }
  if (turn_count_ > config_.turn_limit) throw InvariantViolation("turn limit exceeded");
}

}  // namespace dhumbal
