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

#ifndef DHUMBAL_TESTS_PLAY_SCRIPT_H_
#define DHUMBAL_TESTS_PLAY_SCRIPT_H_

#include <algorithm>
#include <functional>
#include <sstream>
#include <streambuf>
#include <string>
#include <vector>

#include "dhumbal/cards.h"
#include "dhumbal/engine.h"
#include "play.h"

namespace dhumbal::testing {

// An input stream whose next line is computed on demand.
class LineSource : public std::streambuf {
 public:
  explicit LineSource(std::function<std::string()> next) : next_(std::move(next)) {}

 protected:
  int_type underflow() override {
    if (gptr() < egptr()) return traits_type::to_int_type(*gptr());
    buf_ = next_() + "\n";
    setg(buf_.data(), buf_.data(), buf_.data() + buf_.size());
    return traits_type::to_int_type(*gptr());
  }

 private:
  std::function<std::string()> next_;
  std::string buf_;
};

// Reads the transcript written so far and answers the current prompt: first
// with a run of illegal lines, then with a legal move. Every line handed out
// is kept so the session can be replayed from a plain text script.
class ScriptedPlayer {
 public:
  explicit ScriptedPlayer(const std::ostringstream& transcript) : transcript_(transcript) {}

  std::string next() {
    const std::string text = transcript_.str();
    const auto hand_at = text.rfind("\nHand: ");
    const std::string tail = hand_at == std::string::npos ? text : text.substr(hand_at);
    const auto value_at = tail.find("  (value");
    const CardSet hand = *parse_cards(tail.substr(7, value_at - 7));
    std::size_t rejected = 0;
    for (auto p = tail.find("Rejected:"); p != std::string::npos; p = tail.find("Rejected:", p + 1)) {
      ++rejected;
    }

    std::vector<std::string> bad;
    std::string good;
    if (tail.find("Declare Jhyap?") != std::string::npos) {
      if (hand_value(hand) > kJhyapThreshold) bad.push_back("jhyap");
      bad.push_back("perhaps");
      good = can_declare_jhyap(hand) ? "jhyap" : "pass";
    } else if (tail.find("Discard which cards?") != std::string::npos) {
      bad.push_back("xyzzy");
      bad.push_back(to_string(first_missing(hand)));
      const Card lo = hand.lowest();
      const Card hi = hand.highest();
      if (lo.rank() != hi.rank()) bad.push_back(to_string(lo) + " " + to_string(hi));
      // Highest single card, or the largest group when one exists.
      const auto legal = enumerate_legal_discards(hand);
      const auto best = std::max_element(legal.begin(), legal.end(), [](const auto& a, const auto& b) {
        return hand_value(a.cards) < hand_value(b.cards);
      });
      good = to_string(best->cards);
    } else {
      bad.push_back("sideways");
      good = "stock";
    }
    std::string line = rejected < bad.size() ? bad[rejected] : good;
    if (rejected < bad.size()) ++illegal_lines;
    lines.push_back(line);
    return line;
  }

  static Card first_missing(CardSet hand) {
    for (Card c : CardSet::full_deck()) {
      if (!hand.contains(c)) return c;
    }
    return Card(1, Suit::kClubs);
  }

  std::vector<std::string> lines;
  int illegal_lines = 0;

 private:
  const std::ostringstream& transcript_;
};

// Applies a recorded action sequence to a fresh deal and returns the outcome.
inline RoundOutcome replay_round(const cli::PlayedRound& played, const RoundConfig& rules,
                                 int round_index) {
  RoundConfig config = rules;
  config.num_players = static_cast<int>(played.coins.size());
  Rng rng = played.deal_rng;
  RoundState state = RoundState::deal(config, rng, played.coins, round_index);
  for (const Action& a : played.actions) state.apply(a);
  return *state.outcome();
}

}  // namespace dhumbal::testing

#endif  // DHUMBAL_TESTS_PLAY_SCRIPT_H_
