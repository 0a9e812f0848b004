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

#ifndef DHUMBAL_ARENA_H_
#define DHUMBAL_ARENA_H_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "dhumbal/agent.h"
#include "dhumbal/analytics.h"
#include "dhumbal/engine.h"
#include "dhumbal/records.h"

namespace dhumbal {

inline constexpr double kValidMoveReward = 1.0;
inline constexpr double kInvalidActionReward = -10.0;

// Uniform over legal_actions(obs).
Action random_decide(const Observation& obs, Rng& rng);

class RandomAgent : public Agent {
 public:
  std::string name() const override { return "Random"; }
  Action act(const Observation& obs, Rng& rng) override { return random_decide(obs, rng); }
  std::unique_ptr<Agent> clone() const override { return std::make_unique<RandomAgent>(); }
};

enum class SeatingMode : std::uint8_t { kFixed, kRandomizedPerRound };

struct RoundContext {
  RoundConfig config;
  int round_index = 0;
};

// Plays one round. agents[i] is participant i; seating[seat] names the
// participant in each seat. coins holds participant balances and is updated
// with the round's deltas. Throws InvariantViolation when an agent that
// contracts legality returns an illegal action.
RoundRecord run_round(std::span<Agent* const> agents, std::span<const int> seating,
                      std::span<std::int64_t> coins, const RoundContext& ctx, Rng& rng);

struct TournamentOptions {
  int rounds = 1024;
  std::uint64_t seed = kDefaultSeed;
  SeatingMode seating = SeatingMode::kRandomizedPerRound;
  RoundConfig round;
  // Rounds run on worker threads with per-round seeds seed + round_index.
  // Every round then starts from the initial balances.
  bool parallel = false;
  int threads = 0;  // 0: hardware concurrency
};

struct TournamentResult {
  std::vector<std::string> labels;  // unique per participant
  std::vector<RoundRecord> records;
  MetricsSummary summary;
  std::vector<std::int64_t> final_coins;
};

using ProgressFn = std::function<void(int done, int total)>;

// Participants play `rounds` rounds at one table. Throws ConfigError for a
// participant count outside 2..5 or rounds < 1.
TournamentResult run_tournament(std::vector<std::unique_ptr<Agent>> agents,
                                const TournamentOptions& options,
                                const ProgressFn& progress = {});

// Agent names made unique by appending "#2", "#3", ... to repeats.
std::vector<std::string> unique_labels(std::span<const std::string> names);

// One row per round; see records_csv_header for the columns.
std::string records_csv_header(std::span<const std::string> labels);
void write_records_csv(std::ostream& os, std::span<const std::string> labels,
                       std::span<const RoundRecord> records, bool include_timing = true);
struct ParsedRecords {
  std::vector<std::string> labels;
  std::vector<RoundRecord> records;
};
// Accepts files with or without timing columns. Throws ParseError on
// malformed input.
ParsedRecords read_records_csv(std::istream& is);

// Same content as the CSV, as {"labels": [...], "records": [...]}.
std::string records_to_json(std::span<const std::string> labels,
                            std::span<const RoundRecord> records, int indent = 2);
ParsedRecords records_from_json(const std::string& text);

std::string summary_to_json(const MetricsSummary& summary, int indent = 2);
MetricsSummary summary_from_json(const std::string& text);

}  // namespace dhumbal

#endif  // DHUMBAL_ARENA_H_
