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

#ifndef DHUMBAL_ENGINE_H_
#define DHUMBAL_ENGINE_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "dhumbal/cards.h"
#include "dhumbal/rng.h"

namespace dhumbal {

inline constexpr int kMinPlayers = 2;
inline constexpr int kMaxPlayers = 5;
inline constexpr int kHandSize = 5;
inline constexpr int kJhyapThreshold = 10;
inline constexpr int kPaymentCap = 100;
inline constexpr std::int64_t kStartingCoins = 10'000;

enum class Phase : std::uint8_t { kJhyapCheck = 0, kDiscard = 1, kPick = 2 };
enum class PickSource : std::uint8_t { kStock = 0, kDiscardTop = 1 };
enum class EndReason : std::uint8_t { kJhyapShowdown, kDeckExhausted, kEmptyHand, kTurnLimit };

// What one unit of the turn limit counts.
enum class TurnCounting : std::uint8_t {
  kPerPlayerTurn,  // every completed player turn
  kPerOrbit,       // every time play returns to seat 0
};

std::string_view to_string(Phase phase);
std::string_view to_string(PickSource source);
std::string_view to_string(EndReason reason);

struct RoundConfig {
  int num_players = 4;
  int turn_limit = 100;
  TurnCounting turn_counting = TurnCounting::kPerPlayerTurn;
  // Re-verify card conservation after every mutation.
  bool check_invariants = true;
};

struct PlayerState {
  CardSet hand;
  std::int64_t coins = kStartingCoins;
};

struct RoundOutcome {
  std::optional<int> winner;
  std::vector<std::int64_t> coin_delta;
  std::optional<int> jhyap_declared_by;
  std::optional<bool> jhyap_succeeded;
  EndReason end_reason = EndReason::kJhyapShowdown;
  std::vector<int> final_hand_values;

  friend bool operator==(const RoundOutcome&, const RoundOutcome&) = default;
};

// Per-player slice of the round. Holds only public information plus the
// viewer's own hand.
struct Observation {
  int player = 0;
  int num_players = 0;
  int current_player = 0;
  CardSet own_hand;
  // Card the viewer may take from the pile this turn: during JhyapCheck and
  // Discard the top of the newest group, during Pick the top of the group
  // below the viewer's own discard.
  std::optional<Card> discard_top;
  std::vector<int> hand_sizes;  // indexed by seat
  std::int64_t own_coins = 0;
  double avg_opponent_coins = 0.0;
  int turn_count = 0;
  Phase phase = Phase::kJhyapCheck;
  int round_index = 0;
  int stock_size = 0;
  std::vector<DiscardGroup> discard_stack;  // oldest first

  int hand_value() const { return dhumbal::hand_value(own_hand); }
  CardSet discard_pile() const;
  // Opponent hand sizes clockwise from the viewer's left.
  std::vector<int> opponent_hand_sizes() const;
  double mean_opponent_hand_size() const;
};

struct JhyapChoice {
  bool declare = false;
  friend bool operator==(JhyapChoice, JhyapChoice) = default;
};

// An action index a learning agent produced that maps to no legal move.
struct InvalidAction {
  int index = -1;
  friend bool operator==(InvalidAction, InvalidAction) = default;
};

using Action = std::variant<JhyapChoice, DiscardGroup, PickSource, InvalidAction>;

std::string to_string(const Action& action);
bool is_legal(const Observation& obs, const Action& action);
// The phase's legal action set. JhyapCheck: decline, then declare when
// eligible. Discard: enumerate_legal_discards order. Pick: stock, then the
// discard top when one exists.
std::vector<Action> legal_actions(const Observation& obs);

// Public record of one applied action, as broadcast to all seats. Stock picks
// carry the drawn card only in the copy delivered to the picker.
struct JhyapEvent {
  int player = 0;
  bool declared = false;
};
struct DiscardEvent {
  int player = 0;
  DiscardGroup group;
};
struct PickEvent {
  int player = 0;
  PickSource source = PickSource::kStock;
  std::optional<Card> card;
  // Pile cards that were shuffled back into the stock after this pick.
  CardSet reshuffled;
};
struct RoundEndEvent {
  RoundOutcome outcome;
  std::vector<CardSet> revealed_hands;
};
using GameEvent = std::variant<JhyapEvent, DiscardEvent, PickEvent, RoundEndEvent>;

// Copy of `event` with information hidden from `viewer` removed.
GameEvent redact_for(const GameEvent& event, int viewer);

struct PickResult {
  Card card;
  CardSet reshuffled;
};

// Full hidden state of one round.
class RoundState {
 public:
  // Shuffles a fresh deck with `rng`, deals 5 cards per seat, flips one card
  // onto the pile. The round's own reshuffle stream is forked from `rng`.
  // Throws ConfigError for a seat count outside 2..5.
  static RoundState deal(const RoundConfig& config, Rng& rng,
                         std::span<const std::int64_t> coins = {}, int round_index = 0);

  // Assembles an arbitrary position (tests, determinization). The discard
  // stack must be non-empty. Throws InvariantViolation when cards are missing
  // or duplicated.
  static RoundState from_parts(const RoundConfig& config, std::vector<PlayerState> players,
                               std::vector<Card> stock, std::vector<DiscardGroup> discard_stack,
                               int current_player, Phase phase, int turn_count, Rng rng,
                               int round_index = 0);

  const RoundConfig& config() const { return config_; }
  int num_players() const { return static_cast<int>(players_.size()); }
  const PlayerState& player(int seat) const { return players_.at(seat); }
  std::span<const PlayerState> players() const { return players_; }
  std::span<const Card> stock() const { return stock_; }  // back is the top
  std::span<const DiscardGroup> discard_stack() const { return discard_stack_; }
  int current_player() const { return current_player_; }
  int turn_count() const { return turn_count_; }
  int round_index() const { return round_index_; }
  Phase phase() const { return phase_; }
  bool is_terminal() const { return outcome_.has_value(); }
  const std::optional<RoundOutcome>& outcome() const { return outcome_; }
  Rng& rng() { return rng_; }

  std::optional<Card> pickable_top() const;
  bool can_declare_jhyap() const;

  // Phase JhyapCheck. Declaring requires hand value <= 10 (RuleViolation
  // otherwise) and ends the round.
  const RoundOutcome& declare_jhyap();
  void decline_jhyap();
  // Phase Discard. Emptying the hand ends the round (EmptyHand).
  void apply_discard(const DiscardGroup& group);
  // Phase Pick. Hands the turn to the next seat, reshuffling or ending the
  // round when the stock runs dry.
  PickResult apply_pick(PickSource source);

  // Dispatches on the alternative. InvalidAction throws RuleViolation.
  // Returns the public event describing what happened (unredacted).
  GameEvent apply(const Action& action);

  Observation observation_for(int seat) const;

  // Throws InvariantViolation on lost/duplicated cards or a bad phase value.
  void check_invariants() const;

 private:
  RoundState() = default;
  void require_phase(Phase phase, const char* what) const;
  void finish(RoundOutcome outcome);
  void advance_turn();
  void audit() const {
    if (config_.check_invariants) check_invariants();
  }

  RoundConfig config_;
  std::vector<PlayerState> players_;
  std::vector<Card> stock_;
  std::vector<DiscardGroup> discard_stack_;
  int current_player_ = 0;
  int turn_count_ = 0;
  int round_index_ = 0;
  Phase phase_ = Phase::kJhyapCheck;
  Rng rng_;
  std::optional<RoundOutcome> outcome_;
};

// True iff the hand value is at most 10.
bool can_declare_jhyap(CardSet hand);

// Showdown settlement from raw hand values. The declarer wins when every
// other hand is strictly higher and collects min(V, 100) from each loser.
// Otherwise the first non-declarer clockwise holding the lowest other value
// wins and the declarer pays the capped values of all players, own included.
// Throws RuleViolation when the declarer's value exceeds 10.
RoundOutcome settle_showdown(std::span<const int> hand_values, int declarer);
// Empty-hand win: every other player pays min(V, 100) to `winner`.
RoundOutcome settle_empty_hand(std::span<const int> hand_values, int winner);
// Showdown on the current hands, without mutating the state.
RoundOutcome resolve_jhyap(const RoundState& state, int declarer);
// The round's outcome once finished; nullopt while play continues.
std::optional<RoundOutcome> round_termination(const RoundState& state);

}  // namespace dhumbal

#endif  // DHUMBAL_ENGINE_H_
