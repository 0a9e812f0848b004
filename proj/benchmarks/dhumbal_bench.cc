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

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "dhumbal/arena.h"
#include "dhumbal/belief.h"
#include "dhumbal/heuristics.h"
#include "dhumbal/learning.h"
#include "dhumbal/search.h"

namespace dhumbal {
namespace {

void BM_EnumerateLegalDiscards(benchmark::State& state) {
  Rng rng(1);
  std::vector<CardSet> hands;
  for (int i = 0; i < 256; ++i) {
    std::vector<Card> deck;
    for (Card c : CardSet::full_deck()) deck.push_back(c);
    rng.shuffle(std::span<Card>(deck));
    CardSet h;
    for (int k = 0; k < 7; ++k) h.insert(deck[k]);
    hands.push_back(h);
  }
  std::vector<DiscardGroup> out;
  std::size_t i = 0;
  for (auto _ : state) {
    enumerate_legal_discards(hands[i++ % hands.size()], out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_EnumerateLegalDiscards);

void BM_RandomPlayout(benchmark::State& state) {
  Rng rng(2);
  RoundConfig config;
  config.num_players = static_cast<int>(state.range(0));
  config.check_invariants = false;
  for (auto _ : state) {
    RoundState s = RoundState::deal(config, rng);
    benchmark::DoNotOptimize(rollout_deltas(s, rng, 1000));
  }
}
BENCHMARK(BM_RandomPlayout)->Arg(2)->Arg(4)->Arg(5);

void BM_RuleBasedRound(benchmark::State& state) {
  std::vector<std::unique_ptr<Agent>> owned;
  for (auto k : {ProfileKind::kAggressive, ProfileKind::kConservative, ProfileKind::kBalanced,
                 ProfileKind::kOpportunistic}) {
    owned.push_back(std::make_unique<HeuristicAgent>(HeuristicProfile::of(k)));
  }
  std::vector<Agent*> agents;
  for (auto& a : owned) agents.push_back(a.get());
  const std::vector<int> seating{0, 1, 2, 3};
  std::vector<std::int64_t> coins(4, kStartingCoins);
  Rng rng(3);
  int r = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_round(agents, seating, coins, RoundContext{{}, r++}, rng));
  }
}
BENCHMARK(BM_RuleBasedRound);

void BM_SearchDecision(benchmark::State& state) {
  const auto kind = state.range(0) == 0 ? SearchKind::kMcts : SearchKind::kIsmcts;
  SearchConfig cfg;
  cfg.iterations = static_cast<int>(state.range(1));
  Rng rng(4);
  RoundConfig rules;
  rules.num_players = 2;
  RoundState s = RoundState::deal(rules, rng);
  // Decline until seat 0 faces a discard with real choices.
  while (s.phase() != Phase::kDiscard || s.current_player() != 0) {
    s.apply(legal_actions(s.observation_for(s.current_player())).front());
  }
  const Observation obs = s.observation_for(0);
  const BeliefState belief = BeliefState::from_observation(obs);
  const int worlds = kind == SearchKind::kMcts ? 1 : cfg.determinizations;
  for (auto _ : state) {
    benchmark::DoNotOptimize(search(obs, belief, cfg, worlds, rules, rng));
  }
}
BENCHMARK(BM_SearchDecision)->Args({0, 200})->Args({1, 200})->Unit(benchmark::kMillisecond);

void BM_PolicyForward(benchmark::State& state) {
  Rng rng(5);
  const DenseNet net = make_policy_network(rng);
  std::vector<double> x(kStateSize, 0.0);
  for (int i = 0; i < kStateSize; i += 9) x[i] = 1.0;
  ActionMask mask{};
  for (int i = 0; i < kNumActions; i += 5) mask[i] = true;
  for (auto _ : state) benchmark::DoNotOptimize(net.forward(x, mask));
}
BENCHMARK(BM_PolicyForward);

void BM_PolicyForwardBackward(benchmark::State& state) {
  Rng rng(6);
  const DenseNet net = make_policy_network(rng);
  std::vector<double> x(kStateSize, 0.0);
  for (int i = 0; i < kStateSize; i += 9) x[i] = 1.0;
  std::vector<double> grad(net.num_params(), 0.0);
  std::vector<double> g(kNumActions, 0.01);
  for (auto _ : state) {
    ForwardCache cache;
    net.forward(x, cache);
    net.backward_from_pre(cache, g, grad);
    benchmark::DoNotOptimize(grad.data());
  }
}
BENCHMARK(BM_PolicyForwardBackward);

void BM_PpoUpdate(benchmark::State& state) {
  Rng rng(7);
  DenseNet actor = make_policy_network(rng);
  DenseNet critic = make_value_network(rng);
  Adam aopt(actor.num_params(), AdamConfig{1e-4});
  Adam copt(critic.num_params(), AdamConfig{1e-4});
  std::vector<PpoStep> batch(static_cast<std::size_t>(state.range(0)));
  for (auto& st : batch) {
    st.state.assign(kStateSize, 0.0);
    for (int i = 0; i < 12; ++i) st.state[rng.uniform_int(kStateSize)] = 1.0;
    st.mask[111] = st.mask[112] = true;
    st.action = 111;
    st.log_prob = std::log(0.5);
    st.reward = rng.uniform(-1, 1);
  }
  batch.back().done = true;
  const PpoConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ppo_update(actor, critic, aopt, copt, batch, cfg, rng));
  }
}
BENCHMARK(BM_PpoUpdate)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace dhumbal

BENCHMARK_MAIN();
