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

#include "dhumbal/config.h"

#include <fstream>
#include <set>
#include <sstream>

#include "dhumbal/errors.h"
#include "json.hpp"

namespace dhumbal {

using nlohmann::json;

namespace {

// Reads the members of one JSON object and rejects the ones nobody asked for.
class Fields {
 public:
  Fields(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw ConfigError(label() + " must be an object");
  }

  template <typename T>
  void get(const char* key, T& out) {
    if (!j_.contains(key)) return;
    used_.insert(key);
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError(label(key) + " has the wrong type");
    }
  }

  template <typename T>
  void get(const char* key, std::optional<T>& out) {
    if (!j_.contains(key)) return;
    if (j_.at(key).is_null()) {
      used_.insert(key);
      out.reset();
      return;
    }
    T v{};
    get(key, v);
    out = v;
  }

  const json* sub(const char* key) {
    if (!j_.contains(key)) return nullptr;
    used_.insert(key);
    return &j_.at(key);
  }

  std::string label(std::string_view key = {}) const {
    std::string s = where_.empty() ? "config" : where_;
    if (!key.empty()) s += "." + std::string(key);
    return s;
  }

  void finish() const {
    for (const auto& [k, v] : j_.items()) {
      if (!used_.contains(k)) throw ConfigError("unknown key " + label(k));
    }
  }

 private:
  const json& j_;
  std::string where_;
  std::set<std::string> used_;
};

void read_profile(const json& j, const std::string& where, HeuristicProfile& p) {
  Fields f(j, where);
  f.get("jhyap_threshold", p.jhyap_threshold);
  f.get("high_value_preference", p.high_value_preference);
  f.get("risk_factor", p.risk_factor);
  f.get("multi_card_bonus", p.multi_card_bonus);
  f.get("sequence_bonus", p.sequence_bonus);
  f.get("pick_threshold", p.pick_threshold);
  f.get("secondary_pick_threshold", p.secondary_pick_threshold);
  f.get("certain_jhyap_max", p.certain_jhyap_max);
  f.get("mid_band_max", p.mid_band_max);
  f.get("mid_band_probability", p.mid_band_probability);
  f.get("high_band_probability", p.high_band_probability);
  f.get("selective_hand_max", p.selective_hand_max);
  f.get("selective_keep_max", p.selective_keep_max);
  f.finish();
}

json profile_json(const HeuristicProfile& p) {
  return {{"jhyap_threshold", p.jhyap_threshold},
          {"high_value_preference", p.high_value_preference},
          {"risk_factor", p.risk_factor},
          {"multi_card_bonus", p.multi_card_bonus},
          {"sequence_bonus", p.sequence_bonus},
          {"pick_threshold", p.pick_threshold},
          {"secondary_pick_threshold",
           p.secondary_pick_threshold ? json(*p.secondary_pick_threshold) : json(nullptr)},
          {"certain_jhyap_max", p.certain_jhyap_max},
          {"mid_band_max", p.mid_band_max},
          {"mid_band_probability", p.mid_band_probability},
          {"high_band_probability", p.high_band_probability},
          {"selective_hand_max", p.selective_hand_max},
          {"selective_keep_max", p.selective_keep_max}};
}

template <typename T>
json nullable(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

void check(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

void validate(const ExperimentConfig& c) {
  check(c.rounds >= 1, "rounds must be at least 1");
  check(c.threads >= 0, "threads must not be negative");
  check(c.round.num_players >= 2 && c.round.num_players <= 5, "players must be between 2 and 5");
  check(c.round.turn_limit >= 1, "turn_limit must be at least 1");
  validate(c.search);
  check(c.episodes >= 0, "train.episodes must not be negative");
  check(c.checkpoint_every >= 1, "train.checkpoint_every must be at least 1");
  check(c.convergence_window >= 1, "train.convergence_window must be at least 1");
  check(c.validation_rounds >= 1, "train.validation_rounds must be at least 1");
  check(c.dqn.gamma >= 0 && c.dqn.gamma <= 1, "dqn.gamma must lie in [0, 1]");
  check(c.dqn.batch_size >= 1 && c.dqn.buffer_capacity >= c.dqn.batch_size,
        "dqn.buffer_capacity must hold at least one batch");
  check(c.dqn.target_sync_every >= 1, "dqn.target_sync_every must be at least 1");
  check(c.dqn.learning_rate > 0 && c.ppo.learning_rate > 0, "learning rates must be positive");
  check(c.ppo.gamma >= 0 && c.ppo.gamma <= 1 && c.ppo.lambda >= 0 && c.ppo.lambda <= 1,
        "ppo.gamma and ppo.lambda must lie in [0, 1]");
  check(c.ppo.clip > 0, "ppo.clip must be positive");
  check(c.ppo.epochs >= 1 && c.ppo.minibatch_size >= 1 && c.ppo.episodes_per_update >= 1,
        "ppo epochs, minibatch_size and episodes_per_update must be at least 1");
  for (const auto& [kind, p] : c.profiles) {
    check(p.jhyap_threshold >= 0, "profile jhyap_threshold must not be negative");
    check(p.risk_factor > 0, "profile risk_factor must be positive");
  }
}

}  // namespace

HeuristicProfile ExperimentConfig::profile(ProfileKind kind) const {
  const auto it = profiles.find(kind);
  return it == profiles.end() ? HeuristicProfile::of(kind) : it->second;
}

TournamentOptions ExperimentConfig::tournament_options() const {
  TournamentOptions o;
  o.rounds = rounds;
  o.seed = seed;
  o.seating = seating;
  o.round = round;
  o.parallel = parallel;
  o.threads = threads;
  return o;
}

TrainConfig ExperimentConfig::train_config(LearnerKind kind) const {
  TrainConfig t;
  t.kind = kind;
  t.episodes = episodes;
  t.seed = seed;
  t.checkpoint_every = checkpoint_every;
  t.convergence_window = convergence_window;
  t.convergence_threshold = convergence_threshold;
  t.stop_on_convergence = stop_on_convergence;
  t.round = round;
  t.dqn = dqn;
  t.ppo = ppo;
  return t;
}

ExperimentConfig parse_config(const std::string& json_text, ExperimentConfig base) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  ExperimentConfig c = std::move(base);
  Fields f(j, "");
  f.get("seed", c.seed);
  f.get("rounds", c.rounds);
  f.get("players", c.round.num_players);
  f.get("turn_limit", c.round.turn_limit);
  std::string text;
  if (f.sub("turn_counting")) {
    f.get("turn_counting", text);
    if (text == "player_turn") {
      c.round.turn_counting = TurnCounting::kPerPlayerTurn;
    } else if (text == "orbit") {
      c.round.turn_counting = TurnCounting::kPerOrbit;
    } else {
      throw ConfigError("turn_counting must be \"player_turn\" or \"orbit\"");
    }
  }
  if (f.sub("seating")) {
    f.get("seating", text);
    if (text == "randomized") {
      c.seating = SeatingMode::kRandomizedPerRound;
    } else if (text == "fixed") {
      c.seating = SeatingMode::kFixed;
    } else {
      throw ConfigError("seating must be \"randomized\" or \"fixed\"");
    }
  }
  f.get("parallel", c.parallel);
  f.get("threads", c.threads);
  f.get("out_dir", c.out_dir);

  if (const json* p = f.sub("profiles")) {
    if (!p->is_object()) throw ConfigError("profiles must be an object");
    for (const auto& [name, body] : p->items()) {
      const auto kind = parse_profile_kind(name);
      if (!kind) throw ConfigError("unknown profile profiles." + name);
      HeuristicProfile prof = c.profile(*kind);
      read_profile(body, "profiles." + name, prof);
      c.profiles[*kind] = prof;
    }
  }
  if (const json* s = f.sub("search")) {
    Fields sf(*s, "search");
    sf.get("iterations", c.search.iterations);
    sf.get("determinizations", c.search.determinizations);
    sf.get("exploration", c.search.exploration);
    sf.get("max_rollout_depth", c.search.max_rollout_depth);
    sf.get("time_limit_ms", c.search.time_limit_ms);
    sf.finish();
  }
  if (const json* d = f.sub("dqn")) {
    Fields df(*d, "dqn");
    df.get("gamma", c.dqn.gamma);
    df.get("epsilon_start", c.dqn.epsilon_start);
    df.get("epsilon_end", c.dqn.epsilon_end);
    df.get("epsilon_decay", c.dqn.epsilon_decay);
    df.get("target_sync_every", c.dqn.target_sync_every);
    df.get("learning_rate", c.dqn.learning_rate);
    df.get("batch_size", c.dqn.batch_size);
    df.get("buffer_capacity", c.dqn.buffer_capacity);
    df.finish();
  }
  if (const json* p = f.sub("ppo")) {
    Fields pf(*p, "ppo");
    pf.get("gamma", c.ppo.gamma);
    pf.get("lambda", c.ppo.lambda);
    pf.get("clip", c.ppo.clip);
    pf.get("epochs", c.ppo.epochs);
    pf.get("minibatch_size", c.ppo.minibatch_size);
    pf.get("entropy_coef", c.ppo.entropy_coef);
    pf.get("value_coef", c.ppo.value_coef);
    pf.get("learning_rate", c.ppo.learning_rate);
    pf.get("episodes_per_update", c.ppo.episodes_per_update);
    pf.finish();
  }
  if (const json* t = f.sub("train")) {
    Fields tf(*t, "train");
    tf.get("episodes", c.episodes);
    tf.get("checkpoint_every", c.checkpoint_every);
    tf.get("convergence_window", c.convergence_window);
    tf.get("convergence_threshold", c.convergence_threshold);
    tf.get("stop_on_convergence", c.stop_on_convergence);
    tf.get("validation_rounds", c.validation_rounds);
    tf.finish();
  }
  if (const json* k = f.sub("checkpoints")) {
    Fields kf(*k, "checkpoints");
    kf.get("ppo", c.ppo_checkpoint);
    kf.get("dqn", c.dqn_checkpoint);
    kf.finish();
  }
  f.finish();
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::string& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

std::string dump_config(const ExperimentConfig& c) {
  json j;
  j["seed"] = c.seed;
  j["rounds"] = c.rounds;
  j["players"] = c.round.num_players;
  j["turn_limit"] = c.round.turn_limit;
  j["turn_counting"] =
      c.round.turn_counting == TurnCounting::kPerPlayerTurn ? "player_turn" : "orbit";
  j["seating"] = c.seating == SeatingMode::kFixed ? "fixed" : "randomized";
  j["parallel"] = c.parallel;
  j["threads"] = c.threads;
  j["out_dir"] = nullable(c.out_dir);
  j["profiles"] = json::object();
  for (const auto& [kind, p] : c.profiles) {
    std::string name(to_string(kind));
    for (char& ch : name) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    j["profiles"][name] = profile_json(p);
  }
  j["search"] = {{"iterations", c.search.iterations},
                 {"determinizations", c.search.determinizations},
                 {"exploration", c.search.exploration},
                 {"max_rollout_depth", c.search.max_rollout_depth},
                 {"time_limit_ms", nullable(c.search.time_limit_ms)}};
  j["dqn"] = {{"gamma", c.dqn.gamma},
              {"epsilon_start", c.dqn.epsilon_start},
              {"epsilon_end", c.dqn.epsilon_end},
              {"epsilon_decay", c.dqn.epsilon_decay},
              {"target_sync_every", c.dqn.target_sync_every},
              {"learning_rate", c.dqn.learning_rate},
              {"batch_size", c.dqn.batch_size},
              {"buffer_capacity", c.dqn.buffer_capacity}};
  j["ppo"] = {{"gamma", c.ppo.gamma},
              {"lambda", c.ppo.lambda},
              {"clip", c.ppo.clip},
              {"epochs", c.ppo.epochs},
              {"minibatch_size", c.ppo.minibatch_size},
              {"entropy_coef", c.ppo.entropy_coef},
              {"value_coef", c.ppo.value_coef},
              {"learning_rate", c.ppo.learning_rate},
              {"episodes_per_update", c.ppo.episodes_per_update}};
  j["train"] = {{"episodes", c.episodes},
                {"checkpoint_every", c.checkpoint_every},
                {"convergence_window", c.convergence_window},
                {"convergence_threshold", nullable(c.convergence_threshold)},
                {"stop_on_convergence", c.stop_on_convergence},
                {"validation_rounds", c.validation_rounds}};
  j["checkpoints"] = {{"ppo", nullable(c.ppo_checkpoint)}, {"dqn", nullable(c.dqn_checkpoint)}};
  return j.dump(2);
}

std::unique_ptr<Agent> make_agent(std::string_view spec, const ExperimentConfig& config) {
  std::string name(spec.substr(0, spec.find(':')));
  for (char& ch : name) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  const bool has_arg = spec.find(':') != std::string_view::npos;
  const std::string arg = has_arg ? std::string(spec.substr(spec.find(':') + 1)) : std::string();

  if (name == "dqn" || name == "ppo") {
    const LearnerKind kind = name == "dqn" ? LearnerKind::kDqn : LearnerKind::kPpo;
    std::string path = arg;
    if (path.empty()) {
      const auto& fallback = kind == LearnerKind::kDqn ? config.dqn_checkpoint : config.ppo_checkpoint;
      if (!fallback) {
        throw ConfigError(name + " needs a checkpoint: use " + name +
                          ":<path> or set checkpoints." + name + " in the config");
      }
      path = *fallback;
    }
    return load_learned_agent(kind, path);
  }
  if (has_arg) throw ConfigError("agent '" + std::string(spec) + "' takes no argument");
  if (name == "random") return std::make_unique<RandomAgent>();
  if (name == "mcts") return std::make_unique<SearchAgent>(SearchKind::kMcts, config.search, config.round);
  if (name == "ismcts") {
    return std::make_unique<SearchAgent>(SearchKind::kIsmcts, config.search, config.round);
  }
  if (const auto kind = parse_profile_kind(name)) {
    return std::make_unique<HeuristicAgent>(config.profile(*kind));
  }
  throw ConfigError("unknown agent '" + std::string(spec) + "'");
}

std::vector<std::unique_ptr<Agent>> make_agents(std::span<const std::string> specs,
                                                const ExperimentConfig& config) {
  std::vector<std::unique_ptr<Agent>> out;
  for (const auto& s : specs) out.push_back(make_agent(s, config));
  return out;
}

}  // namespace dhumbal
