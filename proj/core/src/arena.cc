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

#include "dhumbal/arena.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <istream>
#include <map>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>

#include "dhumbal/errors.h"
#include "json.hpp"

namespace dhumbal {

Action random_decide(const Observation& obs, Rng& rng) {
  const auto actions = legal_actions(obs);
  if (actions.empty()) throw StateError("no legal action to choose from");
  return actions[rng.below(actions.size())];
}

RoundRecord run_round(std::span<Agent* const> agents, std::span<const int> seating,
                      std::span<std::int64_t> coins, const RoundContext& ctx, Rng& rng) {
  const int n = static_cast<int>(seating.size());
  if (coins.size() != agents.size()) throw ConfigError("one balance per participant required");
  RoundConfig config = ctx.config;
  config.num_players = n;
  std::vector<std::int64_t> seat_coins(n);
  for (int s = 0; s < n; ++s) seat_coins[s] = coins[seating[s]];

  RoundState state = RoundState::deal(config, rng, seat_coins, ctx.round_index);
  RoundRecord rec;
  rec.round_index = ctx.round_index;
  rec.seating.assign(seating.begin(), seating.end());
  rec.agents.resize(agents.size());
  for (int s = 0; s < n; ++s) agents[seating[s]]->begin_round(state.observation_for(s));

  while (!state.is_terminal()) {
    const int seat = state.current_player();
    const int who = seating[seat];
    Agent& agent = *agents[who];
    auto& stats = rec.agents[who];
    const Observation obs = state.observation_for(seat);
    if (obs.phase == Phase::kJhyapCheck) ++rec.turns;

    const auto start = std::chrono::steady_clock::now();
    Action action = agent.act(obs, rng);
    const auto stop = std::chrono::steady_clock::now();
    stats.decision_ms += std::chrono::duration<double, std::milli>(stop - start).count();
    ++stats.decisions;

    double reward = 0.0;
    if (!is_legal(obs, action)) {
      if (agent.contracts_legality()) {
        throw InvariantViolation(agent.name() + " returned illegal action " + to_string(action));
      }
      reward = kInvalidActionReward;
      action = random_decide(obs, rng);
    } else if (obs.phase != Phase::kJhyapCheck) {
      reward = kValidMoveReward;
    }
    if (const auto* g = std::get_if<DiscardGroup>(&action)) stats.cards_discarded += g->size();

    const GameEvent event = state.apply(action);
    stats.reward += reward;
    agent.on_reward(reward, false);
    for (int s = 0; s < n; ++s) agents[seating[s]]->observe(redact_for(event, s));
  }

  const RoundOutcome& out = *state.outcome();
  std::vector<CardSet> hands;
  for (int s = 0; s < n; ++s) hands.push_back(state.player(s).hand);
  const GameEvent end = RoundEndEvent{out, hands};
  std::int64_t sum = 0;
  for (int s = 0; s < n; ++s) {
    const int who = seating[s];
    auto& stats = rec.agents[who];
    stats.coin_delta = out.coin_delta[s];
    stats.final_hand_value = out.final_hand_values[s];
    stats.reward += static_cast<double>(out.coin_delta[s]);
    coins[who] += out.coin_delta[s];
    sum += out.coin_delta[s];
    agents[who]->observe(end);
    agents[who]->on_reward(static_cast<double>(out.coin_delta[s]), true);
  }
  if (sum != 0) throw InvariantViolation("round deltas do not sum to zero");
  if (out.winner) rec.winner = seating[*out.winner];
  rec.end_reason = out.end_reason;
  if (out.jhyap_declared_by) {
    const int s = *out.jhyap_declared_by;
    rec.jhyap = JhyapCall{seating[s], out.final_hand_values[s], out.jhyap_succeeded.value_or(false)};
  }
  return rec;
}

std::vector<std::string> unique_labels(std::span<const std::string> names) {
  std::vector<std::string> out;
  std::map<std::string, int> seen;
  for (const auto& name : names) {
    const int k = ++seen[name];
    out.push_back(k == 1 ? name : name + "#" + std::to_string(k));
  }
  return out;
}

namespace {

std::vector<int> seating_for(const TournamentOptions& options, int n, Rng& rng) {
  std::vector<int> seating(n);
  std::iota(seating.begin(), seating.end(), 0);
  if (options.seating == SeatingMode::kRandomizedPerRound) rng.shuffle(std::span<int>(seating));
  return seating;
}

}  // namespace

TournamentResult run_tournament(std::vector<std::unique_ptr<Agent>> agents,
                                const TournamentOptions& options, const ProgressFn& progress) {
  const int n = static_cast<int>(agents.size());
  if (n < kMinPlayers || n > kMaxPlayers) throw ConfigError("a table seats 2 to 5 participants");
  if (options.rounds < 1) throw ConfigError("rounds must be at least 1");
  for (const auto& a : agents) {
    if (!a) throw ConfigError("missing agent");
  }

  TournamentResult result;
  std::vector<std::string> names;
  for (const auto& a : agents) names.push_back(a->name());
  result.labels = unique_labels(names);
  result.records.resize(options.rounds);
  result.final_coins.assign(n, kStartingCoins);

  if (!options.parallel) {
    Rng rng(options.seed);
    std::vector<Agent*> raw;
    for (auto& a : agents) raw.push_back(a.get());
    for (int r = 0; r < options.rounds; ++r) {
      const auto seating = seating_for(options, n, rng);
      result.records[r] = run_round(raw, seating, result.final_coins, {options.round, r}, rng);
      if (progress) progress(r + 1, options.rounds);
    }
  } else {
    int threads = options.threads > 0 ? options.threads
                                      : static_cast<int>(std::thread::hardware_concurrency());
    threads = std::clamp(threads, 1, options.rounds);
    std::atomic<int> next{0};
    std::atomic<int> done{0};
    std::mutex progress_mutex;
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        try {
          std::vector<std::unique_ptr<Agent>> own;
          std::vector<Agent*> raw;
          for (auto& a : agents) {
            own.push_back(a->clone());
            raw.push_back(own.back().get());
          }
          for (int r = next++; r < options.rounds; r = next++) {
            Rng rng(options.seed + static_cast<std::uint64_t>(r));
            const auto seating = seating_for(options, n, rng);
            std::vector<std::int64_t> coins(n, kStartingCoins);
            result.records[r] = run_round(raw, seating, coins, {options.round, r}, rng);
            const int d = ++done;
            if (progress) {
              std::lock_guard lock(progress_mutex);
              progress(d, options.rounds);
            }
          }
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
    for (const auto& rec : result.records) {
      for (int a = 0; a < n; ++a) result.final_coins[a] += rec.agents[a].coin_delta;
    }
  }
  result.summary = summarize(result.records, result.labels);
  return result;
}

// ---------------------------------------------------------------------------
// Records CSV

namespace {

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

constexpr const char* kFixedColumns[] = {"round",  "seating", "winner", "end_reason",
                                         "turns",  "jhyap_declarer", "jhyap_value",
                                         "jhyap_success"};
constexpr const char* kAgentColumns[] = {"delta", "cards", "reward", "hand", "decisions", "time_ms"};

std::string header(std::span<const std::string> labels, bool include_timing) {
  std::string h;
  for (const char* c : kFixedColumns) {
    if (!h.empty()) h += ',';
    h += c;
  }
  for (const auto& l : labels) {
    for (const char* c : kAgentColumns) {
      if (!include_timing && std::string_view(c) == "time_ms") continue;
      h += ',' + l + ':' + c;
    }
  }
  return h;
}

EndReason parse_end_reason(const std::string& s) {
  for (auto r : {EndReason::kJhyapShowdown, EndReason::kDeckExhausted, EndReason::kEmptyHand,
                 EndReason::kTurnLimit}) {
    if (to_string(r) == s) return r;
  }
  throw ParseError("unknown end reason '" + s + "'");
}

long parse_long(const std::string& s) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(s, &pos);
    if (pos != s.size()) throw ParseError("bad integer '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    throw ParseError("bad integer '" + s + "'");
  }
}

double parse_double(const std::string& s) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw ParseError("bad number '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    throw ParseError("bad number '" + s + "'");
  }
}

}  // namespace

std::string records_csv_header(std::span<const std::string> labels) { return header(labels, true); }

void write_records_csv(std::ostream& os, std::span<const std::string> labels,
                       std::span<const RoundRecord> records, bool include_timing) {
  os << header(labels, include_timing) << '\n';
  for (const auto& r : records) {
    os << r.round_index << ',';
    for (std::size_t s = 0; s < r.seating.size(); ++s) {
      if (s) os << ';';
      os << labels[r.seating[s]];
    }
    os << ',' << (r.winner ? labels[*r.winner] : "") << ',' << to_string(r.end_reason) << ','
       << r.turns << ',';
    if (r.jhyap) {
      os << labels[r.jhyap->agent] << ',' << r.jhyap->hand_value << ','
         << (r.jhyap->success ? 1 : 0);
    } else {
      os << ",,";
    }
    for (std::size_t a = 0; a < labels.size(); ++a) {
      const auto& st = r.agents[a];
      os << ',' << st.coin_delta << ',' << st.cards_discarded << ',' << fmt_double(st.reward) << ','
         << st.final_hand_value << ',' << st.decisions;
      if (include_timing) os << ',' << fmt_double(st.decision_ms);
    }
    os << '\n';
  }
}

ParsedRecords read_records_csv(std::istream& is) {
  ParsedRecords out;
  std::string line;
  if (!std::getline(is, line)) throw ParseError("records file is empty");
  const auto cols = split(line, ',');
  constexpr std::size_t kFixed = std::size(kFixedColumns);
  // Files written without timing drop the last per-agent column.
  const bool timed = cols.size() > kFixed + 5 && cols[kFixed + 5].ends_with(":time_ms");
  const std::size_t kPer = timed ? std::size(kAgentColumns) : std::size(kAgentColumns) - 1;
  if (cols.size() <= kFixed || (cols.size() - kFixed) % kPer != 0) {
    throw ParseError("unexpected records header");
  }
  for (std::size_t i = 0; i < kFixed; ++i) {
    if (cols[i] != kFixedColumns[i]) throw ParseError("unexpected column '" + cols[i] + "'");
  }
  for (std::size_t i = kFixed; i < cols.size(); i += kPer) {
    const auto colon = cols[i].rfind(':');
    if (colon == std::string::npos) throw ParseError("bad agent column '" + cols[i] + "'");
    out.labels.push_back(cols[i].substr(0, colon));
  }
  std::map<std::string, int> index;
  for (std::size_t i = 0; i < out.labels.size(); ++i) index[out.labels[i]] = static_cast<int>(i);
  auto lookup = [&](const std::string& label) {
    const auto it = index.find(label);
    if (it == index.end()) throw ParseError("unknown agent '" + label + "'");
    return it->second;
  };

  int line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != cols.size()) {
      throw ParseError("line " + std::to_string(line_no) + " has the wrong number of fields");
    }
    RoundRecord r;
    r.round_index = static_cast<int>(parse_long(f[0]));
    for (const auto& l : split(f[1], ';')) r.seating.push_back(lookup(l));
    if (!f[2].empty()) r.winner = lookup(f[2]);
    r.end_reason = parse_end_reason(f[3]);
    r.turns = static_cast<int>(parse_long(f[4]));
    if (!f[5].empty()) {
      r.jhyap = JhyapCall{lookup(f[5]), static_cast<int>(parse_long(f[6])), parse_long(f[7]) != 0};
    }
    r.agents.resize(out.labels.size());
    for (std::size_t a = 0; a < out.labels.size(); ++a) {
      const std::size_t b = kFixed + a * kPer;
      auto& st = r.agents[a];
      st.coin_delta = parse_long(f[b]);
      st.cards_discarded = static_cast<int>(parse_long(f[b + 1]));
      st.reward = parse_double(f[b + 2]);
      st.final_hand_value = static_cast<int>(parse_long(f[b + 3]));
      st.decisions = static_cast<int>(parse_long(f[b + 4]));
      if (timed) st.decision_ms = parse_double(f[b + 5]);
    }
    out.records.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Summary JSON

namespace {

template <typename T>
nlohmann::json opt(const std::optional<T>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

template <typename T>
std::optional<T> get_opt(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

}  // namespace

std::string summary_to_json(const MetricsSummary& summary, int indent) {
  nlohmann::json j;
  j["rounds"] = summary.rounds;
  j["draws"] = summary.draws;
  j["agents"] = nlohmann::json::array();
  for (const auto& m : summary.agents) {
    j["agents"].push_back({
        {"name", m.name},
        {"wins", m.wins},
        {"win_rate", m.win_rate},
        {"ci_low", m.ci_low},
        {"ci_high", m.ci_high},
        {"economic_performance", m.economic_performance},
        {"total_coin_delta", m.total_coin_delta},
        {"jhyap_calls", m.jhyap_calls},
        {"jhyap_successes", m.jhyap_successes},
        {"jhyap_success", opt(m.jhyap_success)},
        {"cards_per_round", m.cards_per_round},
        {"avg_reward", m.avg_reward},
        {"avg_turns", m.avg_turns},
        {"avg_hand_value", m.avg_hand_value},
        {"avg_decision_ms", opt(m.avg_decision_ms)},
        {"risk_correlation", opt(m.risk_correlation)},
    });
  }
  return j.dump(indent);
}

MetricsSummary summary_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    MetricsSummary s;
    s.rounds = j.at("rounds").get<int>();
    s.draws = j.at("draws").get<int>();
    for (const auto& a : j.at("agents")) {
      AgentMetrics m;
      m.name = a.at("name").get<std::string>();
      m.wins = a.at("wins").get<int>();
      m.win_rate = a.at("win_rate").get<double>();
      m.ci_low = a.at("ci_low").get<double>();
      m.ci_high = a.at("ci_high").get<double>();
      m.economic_performance = a.at("economic_performance").get<double>();
      m.total_coin_delta = a.at("total_coin_delta").get<std::int64_t>();
      m.jhyap_calls = a.at("jhyap_calls").get<int>();
      m.jhyap_successes = a.at("jhyap_successes").get<int>();
      m.jhyap_success = get_opt<double>(a, "jhyap_success");
      m.cards_per_round = a.at("cards_per_round").get<double>();
      m.avg_reward = a.at("avg_reward").get<double>();
      m.avg_turns = a.at("avg_turns").get<double>();
      m.avg_hand_value = a.at("avg_hand_value").get<double>();
      m.avg_decision_ms = get_opt<double>(a, "avg_decision_ms");
      m.risk_correlation = get_opt<double>(a, "risk_correlation");
      s.agents.push_back(std::move(m));
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad summary JSON: ") + e.what());
  }
}

std::string records_to_json(std::span<const std::string> labels,
                            std::span<const RoundRecord> records, int indent) {
  nlohmann::json j;
  j["labels"] = labels;
  j["records"] = nlohmann::json::array();
  for (const auto& r : records) {
    nlohmann::json agents = nlohmann::json::array();
    for (const auto& st : r.agents) {
      agents.push_back({{"delta", st.coin_delta},
                        {"cards", st.cards_discarded},
                        {"reward", st.reward},
                        {"hand", st.final_hand_value},
                        {"decisions", st.decisions},
                        {"time_ms", st.decision_ms}});
    }
    nlohmann::json jr{{"round", r.round_index},
                      {"seating", r.seating},
                      {"winner", opt(r.winner)},
                      {"end_reason", to_string(r.end_reason)},
                      {"turns", r.turns},
                      {"jhyap", nullptr},
                      {"agents", agents}};
    if (r.jhyap) {
      jr["jhyap"] = {{"agent", r.jhyap->agent},
                     {"value", r.jhyap->hand_value},
                     {"success", r.jhyap->success}};
    }
    j["records"].push_back(std::move(jr));
  }
  return j.dump(indent);
}

ParsedRecords records_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    ParsedRecords out;
    out.labels = j.at("labels").get<std::vector<std::string>>();
    const int n = static_cast<int>(out.labels.size());
    auto agent_index = [n](int a) {
      if (a < 0 || a >= n) throw ParseError("agent index out of range");
      return a;
    };
    for (const auto& jr : j.at("records")) {
      RoundRecord r;
      r.round_index = jr.at("round").get<int>();
      for (int a : jr.at("seating").get<std::vector<int>>()) r.seating.push_back(agent_index(a));
      if (const auto w = get_opt<int>(jr, "winner")) r.winner = agent_index(*w);
      r.end_reason = parse_end_reason(jr.at("end_reason").get<std::string>());
      r.turns = jr.at("turns").get<int>();
      if (!jr.at("jhyap").is_null()) {
        const auto& c = jr.at("jhyap");
        r.jhyap = JhyapCall{agent_index(c.at("agent").get<int>()), c.at("value").get<int>(),
                            c.at("success").get<bool>()};
      }
      for (const auto& ja : jr.at("agents")) {
        AgentRoundStats st;
        st.coin_delta = ja.at("delta").get<std::int64_t>();
        st.cards_discarded = ja.at("cards").get<int>();
        st.reward = ja.at("reward").get<double>();
        st.final_hand_value = ja.at("hand").get<int>();
        st.decisions = ja.at("decisions").get<int>();
        st.decision_ms = ja.at("time_ms").get<double>();
        r.agents.push_back(st);
      }
      if (static_cast<int>(r.agents.size()) != n) throw ParseError("one stats entry per agent required");
      out.records.push_back(std::move(r));
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad records JSON: ") + e.what());
  }
}

}  // namespace dhumbal
