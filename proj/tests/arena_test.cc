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

#include <gtest/gtest.h>

#include <chrono>
#include <map>
#include <sstream>

#include "dhumbal/errors.h"
#include "dhumbal/heuristics.h"
#include "test_util.h"

namespace dhumbal {
namespace {

using testing::cards;

std::vector<std::unique_ptr<Agent>> rule_lineup() {
  std::vector<std::unique_ptr<Agent>> v;
  for (auto k : {ProfileKind::kAggressive, ProfileKind::kConservative, ProfileKind::kBalanced,
                 ProfileKind::kOpportunistic}) {
    v.push_back(std::make_unique<HeuristicAgent>(HeuristicProfile::of(k)));
  }
  return v;
}

std::string csv_of(const TournamentResult& r, bool timing) {
  std::ostringstream os;
  write_records_csv(os, r.labels, r.records, timing);
  return os.str();
}

TEST(RandomDecide, DeclaresHalfTheTime) {
  Observation o;
  o.num_players = 2;
  o.own_hand = cards("3H 2C");
  o.phase = Phase::kJhyapCheck;
  Rng rng(kDefaultSeed);
  int yes = 0;
  constexpr int kTrials = 100000;
  for (int i = 0; i < kTrials; ++i) {
    yes += std::get<JhyapChoice>(random_decide(o, rng)).declare ? 1 : 0;
  }
  EXPECT_NEAR(static_cast<double>(yes) / kTrials, 0.5, 0.01);
}

TEST(RandomDecide, UniformOverDiscards) {
  Observation o;
  o.num_players = 2;
  o.own_hand = cards("5H 5S 5D 6D 7D");
  o.phase = Phase::kDiscard;
  const auto legal = enumerate_legal_discards(o.own_hand);
  std::map<std::string, int> counts;
  Rng rng(3);
  constexpr int kTrials = 60000;
  for (int i = 0; i < kTrials; ++i) {
    counts[to_string(std::get<DiscardGroup>(random_decide(o, rng)))]++;
  }
  ASSERT_EQ(counts.size(), legal.size());
  const double expected = static_cast<double>(kTrials) / legal.size();
  double chi2 = 0;
  for (const auto& [k, c] : counts) chi2 += (c - expected) * (c - expected) / expected;
  // 99.9th percentile of chi-square with 9 degrees of freedom is 27.88.
  EXPECT_EQ(legal.size(), 10u);
  EXPECT_LT(chi2, 27.88);
}

TEST(RandomDecide, SingleLegalAction) {
  Observation o;
  o.num_players = 2;
  o.own_hand = cards("KH");
  o.phase = Phase::kDiscard;
  Rng rng(1);
  EXPECT_EQ(random_decide(o, rng), Action(DiscardGroup::single(testing::card("KH"))));
}

TEST(RunRound, MatchesEngineOutcome) {
  std::vector<std::unique_ptr<Agent>> owned = rule_lineup();
  std::vector<Agent*> agents;
  for (auto& a : owned) agents.push_back(a.get());
  const std::vector<int> seating = {2, 0, 3, 1};
  for (int seed = 0; seed < 50; ++seed) {
    std::vector<std::int64_t> coins(4, kStartingCoins);
    Rng rng(seed);
    const auto rec = run_round(agents, seating, coins, {}, rng);
    std::int64_t sum = 0;
    for (int a = 0; a < 4; ++a) {
      sum += rec.agents[a].coin_delta;
      EXPECT_EQ(coins[a], kStartingCoins + rec.agents[a].coin_delta);
      EXPECT_GE(rec.agents[a].decision_ms, 0.0);
    }
    EXPECT_EQ(sum, 0);
    EXPECT_LE(rec.turns, 100);
    if (rec.jhyap) EXPECT_LE(rec.jhyap->hand_value, kJhyapThreshold);
  }
}

TEST(RunRound, SameSeedSameRecord) {
  auto play = [] {
    std::vector<std::unique_ptr<Agent>> owned;
    for (int i = 0; i < 4; ++i) {
      owned.push_back(std::make_unique<HeuristicAgent>(HeuristicProfile::aggressive()));
    }
    std::vector<Agent*> agents;
    for (auto& a : owned) agents.push_back(a.get());
    std::vector<std::int64_t> coins(4, kStartingCoins);
    Rng rng(99);
    auto rec = run_round(agents, std::vector<int>{0, 1, 2, 3}, coins, {}, rng);
    for (auto& st : rec.agents) st.decision_ms = 0;
    return rec;
  };
  EXPECT_EQ(play(), play());
}

class IllegalAgent : public Agent {
 public:
  explicit IllegalAgent(bool contracts) : contracts_(contracts) {}
  std::string name() const override { return "Illegal"; }
  Action act(const Observation&, Rng&) override { return InvalidAction{127}; }
  bool contracts_legality() const override { return contracts_; }
  void on_reward(double r, bool done) override {
    if (!done) rewards.push_back(r);
  }
  std::unique_ptr<Agent> clone() const override { return std::make_unique<IllegalAgent>(*this); }
  std::vector<double> rewards;

 private:
  bool contracts_;
};

TEST(RunRound, IllegalActionFromContractingAgentThrows) {
  IllegalAgent bad(true);
  RandomAgent other;
  std::vector<Agent*> agents = {&bad, &other};
  std::vector<std::int64_t> coins(2, kStartingCoins);
  Rng rng(1);
  EXPECT_THROW(run_round(agents, std::vector<int>{0, 1}, coins, {}, rng), InvariantViolation);
}

TEST(RunRound, IllegalActionFromLearnerIsPenalisedAndSubstituted) {
  IllegalAgent bad(false);
  RandomAgent other;
  std::vector<Agent*> agents = {&bad, &other};
  std::vector<std::int64_t> coins(2, kStartingCoins);
  Rng rng(1);
  const auto rec = run_round(agents, std::vector<int>{0, 1}, coins, {}, rng);
  ASSERT_FALSE(bad.rewards.empty());
  for (double r : bad.rewards) EXPECT_EQ(r, kInvalidActionReward);
  EXPECT_DOUBLE_EQ(rec.agents[0].reward,
                   kInvalidActionReward * bad.rewards.size() + rec.agents[0].coin_delta);
}

TEST(Tournament, OneRoundOneRecord) {
  std::vector<std::unique_ptr<Agent>> agents;
  agents.push_back(std::make_unique<RandomAgent>());
  agents.push_back(std::make_unique<RandomAgent>());
  TournamentOptions opt;
  opt.rounds = 1;
  const auto r = run_tournament(std::move(agents), opt);
  EXPECT_EQ(r.records.size(), 1u);
  EXPECT_EQ(r.labels, (std::vector<std::string>{"Random", "Random#2"}));
}

TEST(Tournament, RejectsBadConfig) {
  std::vector<std::unique_ptr<Agent>> one;
  one.push_back(std::make_unique<RandomAgent>());
  EXPECT_THROW(run_tournament(std::move(one), {}), ConfigError);
  TournamentOptions opt;
  opt.rounds = 0;
  EXPECT_THROW(run_tournament(rule_lineup(), opt), ConfigError);
}

TEST(Tournament, PartitionConservationAndSeating) {
  TournamentOptions opt;
  opt.rounds = 1024;
  const auto start = std::chrono::steady_clock::now();
  const auto r = run_tournament(rule_lineup(), opt);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_LT(secs, 60.0);

  int wins = 0;
  for (const auto& m : r.summary.agents) {
    wins += m.wins;
    EXPECT_LE(m.jhyap_successes, m.jhyap_calls);
    EXPECT_LE(m.ci_low, m.win_rate);
    EXPECT_GE(m.ci_high, m.win_rate);
  }
  EXPECT_EQ(wins + r.summary.draws, opt.rounds);
  std::int64_t total = 0;
  for (auto c : r.final_coins) total += c;
  EXPECT_EQ(total, 4 * kStartingCoins);

  int seat_counts[4][4] = {};
  for (const auto& rec : r.records) {
    for (int s = 0; s < 4; ++s) seat_counts[rec.seating[s]][s]++;
  }
  for (auto& agent : seat_counts) {
    for (int c : agent) EXPECT_NEAR(c / 1024.0, 0.25, 0.03);
  }
}

TEST(Tournament, DeterministicAcrossRuns) {
  TournamentOptions opt;
  opt.rounds = 64;
  EXPECT_EQ(csv_of(run_tournament(rule_lineup(), opt), false),
            csv_of(run_tournament(rule_lineup(), opt), false));
}

TEST(Tournament, ParallelModeUsesDerivedSeeds) {
  TournamentOptions opt;
  opt.rounds = 40;
  opt.parallel = true;
  opt.threads = 3;
  const auto a = run_tournament(rule_lineup(), opt);
  opt.threads = 1;
  const auto b = run_tournament(rule_lineup(), opt);
  EXPECT_EQ(csv_of(a, false), csv_of(b, false));
  EXPECT_EQ(a.final_coins, b.final_coins);
}

TEST(RecordsCsv, RoundTrip) {
  TournamentOptions opt;
  opt.rounds = 30;
  const auto r = run_tournament(rule_lineup(), opt);
  std::stringstream ss(csv_of(r, true));
  const auto parsed = read_records_csv(ss);
  EXPECT_EQ(parsed.labels, r.labels);
  EXPECT_EQ(parsed.records, r.records);
  EXPECT_EQ(summarize(parsed.records, parsed.labels), r.summary);
}

TEST(RecordsCsv, ReadsFilesWithoutTiming) {
  TournamentOptions opt;
  opt.rounds = 12;
  const auto r = run_tournament(rule_lineup(), opt);
  std::stringstream ss(csv_of(r, false));
  const auto parsed = read_records_csv(ss);
  ASSERT_EQ(parsed.records.size(), 12u);
  for (std::size_t i = 0; i < parsed.records.size(); ++i) {
    auto want = r.records[i];
    for (auto& a : want.agents) a.decision_ms = 0;
    EXPECT_EQ(parsed.records[i], want);
  }
}

TEST(RecordsJson, RoundTrip) {
  TournamentOptions opt;
  opt.rounds = 30;
  const auto r = run_tournament(rule_lineup(), opt);
  const auto parsed = records_from_json(records_to_json(r.labels, r.records));
  EXPECT_EQ(parsed.labels, r.labels);
  EXPECT_EQ(parsed.records, r.records);
  EXPECT_THROW(records_from_json("{\"labels\": [\"a\"]}"), ParseError);
  EXPECT_THROW(records_from_json(
                   R"({"labels":["a"],"records":[{"round":0,"seating":[3],"winner":null,)"
                   R"("end_reason":"turn_limit","turns":1,"jhyap":null,"agents":[]}]})"),
               ParseError);
}

TEST(RecordsCsv, RejectsGarbage) {
  std::stringstream empty;
  EXPECT_THROW(read_records_csv(empty), ParseError);
  std::stringstream bad("round,seating\n1,2\n");
  EXPECT_THROW(read_records_csv(bad), ParseError);
}

TEST(SummaryJson, RoundTrip) {
  TournamentOptions opt;
  opt.rounds = 30;
  const auto r = run_tournament(rule_lineup(), opt);
  EXPECT_EQ(summary_from_json(summary_to_json(r.summary)), r.summary);
  EXPECT_THROW(summary_from_json("{"), ParseError);
}

}  // namespace
}  // namespace dhumbal
