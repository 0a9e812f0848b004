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

#include "play.h"

#include <algorithm>
#include <cctype>
#include <istream>
#include <ostream>

#include "dhumbal/arena.h"
#include "dhumbal/errors.h"

namespace dhumbal::cli {

namespace {

std::string trim_lower(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  const auto last = s.find_last_not_of(" \t\r");
  s = first == std::string::npos ? std::string() : s.substr(first, last - first + 1);
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::string describe(const DiscardGroup& g) {
  return to_string(g) + " (" + std::string(to_string(g.kind)) + ")";
}

}  // namespace

std::string HumanAgent::seat_name(int seat) const {
  std::string s = "seat " + std::to_string(seat);
  if (seat == seat_) return s + " (you)";
  if (seat < static_cast<int>(seat_names_.size())) s += " (" + seat_names_[seat] + ")";
  return s;
}

void HumanAgent::begin_round(const Observation& obs) {
  seat_ = obs.player;
  actions_.clear();
  out_ << "\n=== Round " << obs.round_index + 1 << " ===\n";
}

void HumanAgent::render(const Observation& obs) const {
  out_ << "\nHand: " << to_string(obs.own_hand) << "  (value " << obs.hand_value() << ")\n";
  out_ << "Discard top: " << (obs.discard_top ? to_string(*obs.discard_top) : "-")
       << "   Stock: " << obs.stock_size << " cards\n";
  out_ << "Opponents:";
  for (int s = 0; s < obs.num_players; ++s) {
    if (s != obs.player) out_ << "  " << seat_name(s) << " " << obs.hand_sizes[s];
  }
  out_ << "\nCoins: " << obs.own_coins << "   Turn: " << obs.turn_count << '\n';
}

void HumanAgent::list_options(const Observation& obs) const {
  out_ << "Legal: ";
  switch (obs.phase) {
    case Phase::kJhyapCheck:
      out_ << (can_declare_jhyap(obs.own_hand) ? "jhyap, pass" : "pass");
      break;
    case Phase::kDiscard: {
      bool first = true;
      for (const auto& g : enumerate_legal_discards(obs.own_hand)) {
        out_ << (first ? "" : " | ") << to_string(g);
        first = false;
      }
      break;
    }
    case Phase::kPick:
      out_ << "stock";
      if (obs.discard_top) out_ << ", top (" << to_string(*obs.discard_top) << ")";
      break;
  }
  out_ << '\n';
}

Action HumanAgent::act(const Observation& obs, Rng& /*rng*/) {
  render(obs);
  for (;;) {
    switch (obs.phase) {
      case Phase::kJhyapCheck: out_ << "Declare Jhyap? [jhyap/pass] > "; break;
      case Phase::kDiscard: out_ << "Discard which cards? > "; break;
      case Phase::kPick: out_ << "Pick from [stock/top] > "; break;
    }
    out_.flush();
    std::string line;
    if (!std::getline(in_, line)) throw PlayAborted("input ended");
    const std::string cmd = trim_lower(line);
    if (cmd == "quit" || cmd == "exit") throw PlayAborted("player quit");
    if (cmd == "help" || cmd == "?") {
      list_options(obs);
      continue;
    }

    std::string problem;
    std::optional<Action> action;
    switch (obs.phase) {
      case Phase::kJhyapCheck:
        if (cmd == "jhyap" || cmd == "j" || cmd == "declare" || cmd == "y" || cmd == "yes") {
          if (can_declare_jhyap(obs.own_hand)) {
            action = JhyapChoice{true};
          } else {
            problem = "Jhyap needs a hand value of " + std::to_string(kJhyapThreshold) +
                      " points or fewer; yours is " + std::to_string(obs.hand_value()) + ".";
          }
        } else if (cmd == "pass" || cmd == "p" || cmd == "no" || cmd == "n") {
          action = JhyapChoice{false};
        } else {
          problem = "answer jhyap or pass.";
        }
        break;
      case Phase::kDiscard: {
        const auto cards = parse_cards(cmd);
        if (!cards || cards->empty()) {
          problem = "could not read cards from '" + line + "' (write them like 5H 5S).";
          break;
        }
        if (!cards->is_subset_of(obs.own_hand)) {
          problem = "you do not hold " + to_string(*cards - obs.own_hand) + ".";
          break;
        }
        const auto legal = enumerate_legal_discards(obs.own_hand);
        const auto it = std::find_if(legal.begin(), legal.end(),
                                     [&](const DiscardGroup& g) { return g.cards == *cards; });
        if (it == legal.end()) {
          problem = to_string(*cards) +
                    " is not a single card, a set of one rank or a run of three or more in one "
                    "suit.";
          break;
        }
        action = *it;
        break;
      }
      case Phase::kPick:
        if (cmd == "stock" || cmd == "s") {
          action = PickSource::kStock;
        } else if (cmd == "top" || cmd == "t" || cmd == "discard" || cmd == "d") {
          if (obs.discard_top) {
            action = PickSource::kDiscardTop;
          } else {
            problem = "there is no discard to take.";
          }
        } else {
          problem = "answer stock or top.";
        }
        break;
    }
    if (action && is_legal(obs, *action)) {
      if (const auto* g = std::get_if<DiscardGroup>(&*action)) {
        out_ << "You discard " << describe(*g) << ".\n";
      }
      return *action;
    }
    if (problem.empty()) problem = "that move is not allowed now.";
    ++rejected_;
    out_ << "Rejected: " << problem << '\n';
    list_options(obs);
  }
}

void HumanAgent::observe(const GameEvent& event) {
  if (const auto* j = std::get_if<JhyapEvent>(&event)) {
    actions_.push_back(JhyapChoice{j->declared});
    if (j->declared) out_ << seat_name(j->player) << " declares Jhyap!\n";
  } else if (const auto* d = std::get_if<DiscardEvent>(&event)) {
    actions_.push_back(d->group);
    if (d->player != seat_) out_ << seat_name(d->player) << " discards " << describe(d->group) << '\n';
  } else if (const auto* p = std::get_if<PickEvent>(&event)) {
    actions_.push_back(p->source);
    out_ << seat_name(p->player) << " picks ";
    if (p->source == PickSource::kStock) {
      out_ << "from the stock";
      if (p->card) out_ << ": " << to_string(*p->card);
    } else {
      out_ << (p->card ? to_string(*p->card) : std::string("the top card")) << " from the discard pile";
    }
    out_ << '\n';
    if (!p->reshuffled.empty()) out_ << "The discard pile is shuffled into the stock.\n";
  } else if (const auto* e = std::get_if<RoundEndEvent>(&event)) {
    const auto& o = e->outcome;
    out_ << "\n--- Round over: " << to_string(o.end_reason) << " ---\n";
    if (o.jhyap_declared_by) {
      out_ << seat_name(*o.jhyap_declared_by) << " declared Jhyap and "
           << (o.jhyap_succeeded.value_or(false) ? "won" : "lost") << " the showdown.\n";
    }
    for (std::size_t s = 0; s < o.coin_delta.size(); ++s) {
      out_ << "  " << seat_name(static_cast<int>(s)) << ": " << to_string(e->revealed_hands[s])
           << "  value " << o.final_hand_values[s] << "  coins " << (o.coin_delta[s] > 0 ? "+" : "")
           << o.coin_delta[s] << '\n';
    }
    out_ << "Winner: " << (o.winner ? seat_name(*o.winner) : std::string("none")) << '\n';
  }
}

std::unique_ptr<Agent> HumanAgent::clone() const { return std::make_unique<HumanAgent>(in_, out_); }

PlayResult play_session(const PlayOptions& options, std::istream& in, std::ostream& out) {
  if (options.opponents.empty() || options.opponents.size() > 4) {
    throw ConfigError("play needs between 1 and 4 opponents");
  }
  if (options.rounds < 1) throw ConfigError("rounds must be at least 1");
  HumanAgent human(in, out);
  std::vector<std::unique_ptr<Agent>> opponents = make_agents(options.opponents, options.config);
  std::vector<Agent*> agents{&human};
  std::vector<std::string> names{"you"};
  for (auto& a : opponents) {
    agents.push_back(a.get());
    names.push_back(a->name());
  }
  human.set_seat_names(names);
  const int n = static_cast<int>(agents.size());
  std::vector<int> seating(n);
  for (int s = 0; s < n; ++s) seating[s] = s;

  PlayResult result;
  result.coins.assign(n, kStartingCoins);
  Rng rng(options.seed);
  out << "Dhumbal: you are seat 0 against";
  for (int s = 1; s < n; ++s) out << ' ' << names[s];
  out << ".\nType help for the legal moves, quit to stop.\n";
  for (int r = 0; r < options.rounds; ++r) {
    PlayedRound played{rng, result.coins, {}, {}};
    RoundContext ctx{options.config.round, r};
    try {
      played.record = run_round(agents, seating, result.coins, ctx, rng);
    } catch (const PlayAborted& e) {
      out << "\nSession ended: " << e.what() << ".\n";
      result.aborted = true;
      break;
    }
    played.actions = human.round_actions();
    result.rounds.push_back(std::move(played));
    out << "Balances:";
    for (int s = 0; s < n; ++s) out << "  " << names[s] << " " << result.coins[s];
    out << '\n';
  }
  result.rejected_inputs = human.rejected_inputs();
  return result;
}

}  // namespace dhumbal::cli
