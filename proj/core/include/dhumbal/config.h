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

#ifndef DHUMBAL_CONFIG_H_
#define DHUMBAL_CONFIG_H_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dhumbal/agent.h"
#include "dhumbal/arena.h"
#include "dhumbal/heuristics.h"
#include "dhumbal/learning.h"
#include "dhumbal/search.h"

namespace dhumbal {

// One experiment definition. Every field has a default; a config file only
// names what it changes.
struct ExperimentConfig {
  std::uint64_t seed = kDefaultSeed;
  int rounds = 1024;
  SeatingMode seating = SeatingMode::kRandomizedPerRound;
  bool parallel = false;
  int threads = 0;
  RoundConfig round;
  std::map<ProfileKind, HeuristicProfile> profiles;  // overrides of the presets
  SearchConfig search;
  DqnConfig dqn;
  PpoConfig ppo;
  int episodes = 1000;
  int checkpoint_every = 100;
  int convergence_window = 500;
  std::optional<double> convergence_threshold;
  bool stop_on_convergence = false;
  int validation_rounds = 64;
  std::optional<std::string> ppo_checkpoint;
  std::optional<std::string> dqn_checkpoint;
  std::optional<std::string> out_dir;

  HeuristicProfile profile(ProfileKind kind) const;
  TournamentOptions tournament_options() const;
  TrainConfig train_config(LearnerKind kind) const;
};

// Parses a JSON object such as
//   {"seed": 7, "search": {"iterations": 200},
//    "profiles": {"aggressive": {"risk_factor": 1.3}},
//    "checkpoints": {"ppo": "ppo.json"}}
// on top of `base`. Unknown keys and ill-typed values throw ConfigError.
ExperimentConfig parse_config(const std::string& json_text, ExperimentConfig base = {});
// Reads and parses a file; ConfigError when it cannot be read.
ExperimentConfig load_config(const std::string& path, ExperimentConfig base = {});
// Every field of `config` as JSON; parse_config(dump_config(c)) == c.
std::string dump_config(const ExperimentConfig& config);

// Builds a participant from a spec string:
//   aggressive | conservative | balanced | opportunistic | random
//   mcts | ismcts
//   dqn[:path] | ppo[:path]   (path defaults to the configured checkpoint)
// Throws ConfigError for unknown names or a missing checkpoint path.
std::unique_ptr<Agent> make_agent(std::string_view spec, const ExperimentConfig& config);
std::vector<std::unique_ptr<Agent>> make_agents(std::span<const std::string> specs,
                                                const ExperimentConfig& config);

}  // namespace dhumbal

#endif  // DHUMBAL_CONFIG_H_
