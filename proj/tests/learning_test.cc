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

#include "dhumbal/learning.h"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "dhumbal/arena.h"
#include "dhumbal/errors.h"
#include "test_util.h"

namespace dhumbal {
namespace {

using testing::card;
using testing::cards;
using testing::make_state;

std::vector<double> params_of(const DenseNet& net) {
  return {net.params().begin(), net.params().end()};
}

int count_true(const ActionMask& m) { return static_cast<int>(std::count(m.begin(), m.end(), true)); }

TEST(Encode, SingleCardHandEmptyPile) {
  Observation obs;
  obs.num_players = 2;
  obs.own_hand = cards("AC");
  obs.hand_sizes = {1, 2};
  obs.own_coins = kStartingCoins;
  obs.phase = Phase::kDiscard;
  const auto v = encode_state(obs);
  ASSERT_EQ(v.size(), 117u);
  EXPECT_EQ(std::accumulate(v.begin(), v.begin() + 52, 0.0), 1.0);
  EXPECT_EQ(v[card("AC").deck_index()], 1.0);
  EXPECT_EQ(std::accumulate(v.begin() + 52, v.begin() + 104, 0.0), 0.0);
  EXPECT_EQ(v[115], 0.0);
  EXPECT_EQ(v[116], 0.0);
}

TEST(Encode, HandValueAndPhase) {
  auto s = make_state({cards("10C 10D 5H 6S"), cards("2D 3D")},
                      {DiscardGroup::single(card("KH")), DiscardGroup::single(card("QH"))}, 0,
                      Phase::kPick);
  const auto v = encode_state(s.observation_for(0));
  EXPECT_NEAR(v[106], 31.0 / 65.0, 1e-15);
  EXPECT_NEAR(v[106], 0.47692, 1e-5);
  EXPECT_EQ(v[112], 0.0);
  EXPECT_EQ(v[113], 0.0);
  EXPECT_EQ(v[114], 1.0);
  EXPECT_EQ(v[52 + card("KH").deck_index()], 1.0);
  EXPECT_EQ(v[52 + card("QH").deck_index()], 1.0);
  EXPECT_NEAR(v[110], 2.0 / 52.0, 1e-15);
  EXPECT_EQ(v[104] + v[105], 1.0);
}

TEST(Encode, DealtPositionsAreBoundedAndFinite) {
  Rng rng(3);
  for (int k = 0; k < 50; ++k) {
    auto s = RoundState::deal({}, rng);
    for (int p = 0; p < s.config().num_players; ++p) {
      const auto v = encode_state(s.observation_for(p));
      ASSERT_EQ(v.size(), 117u);
      for (double x : v) {
        ASSERT_TRUE(std::isfinite(x));
        ASSERT_GE(x, 0.0);
        ASSERT_LE(x, 1.5);
      }
    }
  }
}

TEST(Mask, JhyapCheckAboveThresholdOnlyDeclines) {
  // 12 points: too many to declare.
  auto s = make_state({cards("5C 7D"), cards("2D 3D")}, {DiscardGroup::single(card("KH"))});
  const auto m = legal_action_mask(s.observation_for(0));
  EXPECT_EQ(count_true(m), 1);
  EXPECT_TRUE(m[action_index::kDecline]);
}

TEST(Mask, JhyapCheckAtThresholdAllowsBoth) {
  auto s = make_state({cards("4C 6D"), cards("2D 3D")}, {DiscardGroup::single(card("KH"))});
  const auto m = legal_action_mask(s.observation_for(0));
  EXPECT_EQ(count_true(m), 2);
  EXPECT_TRUE(m[action_index::kDeclare]);
}

TEST(Mask, PickWithTopHasExactlyTwoEntries) {
  auto s = make_state({cards("10C 10D 5H 6S"), cards("2D 3D")},
                      {DiscardGroup::single(card("KH")), DiscardGroup::single(card("QH"))}, 0,
                      Phase::kPick);
  const auto m = legal_action_mask(s.observation_for(0));
  EXPECT_EQ(count_true(m), 2);
  EXPECT_TRUE(m[action_index::kPickStock]);
  EXPECT_TRUE(m[action_index::kPickTop]);
}

TEST(Mask, DiscardClasses) {
  auto s = make_state({cards("5H 5S 5D 6D 7D"), cards("2C 3C")},
                      {DiscardGroup::single(card("KH"))}, 0, Phase::kDiscard);
  const auto obs = s.observation_for(0);
  const auto m = legal_action_mask(obs);
  // Five singles, the rank set of fives and the diamond run from 5.
  EXPECT_EQ(count_true(m), 7);
  EXPECT_TRUE(m[action_index::kFirstSet + 4]);
  EXPECT_TRUE(m[action_index::kFirstRun + 1 * 11 + 4]);
  const auto run = index_to_action(action_index::kFirstRun + 1 * 11 + 4, obs);
  ASSERT_TRUE(run);
  EXPECT_EQ(std::get<DiscardGroup>(*run).cards, cards("5D 6D 7D"));
}

TEST(Mask, AgreesWithLegalityAndRoundTrips) {
  Rng rng(11);
  int positions = 0;
  for (int k = 0; k < 40; ++k) {
    auto s = RoundState::deal({}, rng);
    Rng play(k);
    while (!s.outcome()) {
      const auto obs = s.observation_for(s.current_player());
      const auto m = legal_action_mask(obs);
      ASSERT_GE(count_true(m), 1);
      for (int i = 0; i < kNumActions; ++i) {
        const auto a = index_to_action(i, obs);
        ASSERT_EQ(m[i], a.has_value() && is_legal(obs, *a)) << i;
        if (i >= action_index::kFirstReserved) ASSERT_FALSE(m[i]);
        if (m[i]) {
          const auto back = action_to_index(*a, obs);
          ASSERT_TRUE(back);
          EXPECT_EQ(*back, i);
        }
      }
      const auto legal = legal_actions(obs);
      s.apply(legal[play.uniform_int(static_cast<int>(legal.size()))]);
      ++positions;
    }
  }
  EXPECT_GT(positions, 500);
}

Transition tagged(double reward) {
  Transition t;
  t.reward = reward;
  t.done = true;
  return t;
}

TEST(Replay, FifoAtCapacity) {
  ReplayBuffer buf(2000);
  for (int i = 0; i < 2500; ++i) {
    buf.push(tagged(i));
    ASSERT_LE(buf.size(), 2000u);
  }
  EXPECT_EQ(buf.size(), 2000u);
  EXPECT_EQ(buf.at(0).reward, 500.0);
  EXPECT_EQ(buf.at(1999).reward, 2499.0);
  Rng rng(1);
  const auto s = buf.sample(32, rng);
  std::set<const Transition*> distinct(s.begin(), s.end());
  EXPECT_EQ(distinct.size(), 32u);
}

TEST(DqnSelect, EpsilonOneIsUniformOverLegal) {
  Rng init(5);
  const auto net = make_q_network(init);
  ActionMask mask{};
  const std::vector<int> legal{1, 7, 30, 54, 90, 111};
  for (int i : legal) mask[i] = true;
  const std::vector<double> state(kStateSize, 0.5);
  std::map<int, int> counts;
  Rng rng(9);
  const int n = 100000;
  for (int k = 0; k < n; ++k) ++counts[dqn_select(net, state, 1.0, mask, rng)];
  ASSERT_EQ(counts.size(), legal.size());
  double chi = 0;
  const double e = static_cast<double>(n) / legal.size();
  for (int i : legal) chi += (counts[i] - e) * (counts[i] - e) / e;
  EXPECT_LT(chi, 20.52);  // 5 df, p = 0.001
}

TEST(DqnSelect, GreedyAndSingleLegal) {
  DenseNet net({kStateSize, kNumActions}, {Activation::kLinear});
  // Bias alone sets the Q-values.
  auto p = net.params();
  const auto b = net.bias_offset(0);
  for (int i = 0; i < kNumActions; ++i) p[b + i] = i % 7;
  p[b + 40] = 100;  // illegal, must be ignored
  p[b + 20] = 50;
  ActionMask mask{};
  mask[3] = mask[20] = mask[21] = true;
  const std::vector<double> state(kStateSize, 0.0);
  Rng rng(2);
  for (int k = 0; k < 50; ++k) EXPECT_EQ(dqn_select(net, state, 0.0, mask, rng), 20);
  ActionMask one{};
  one[111] = true;
  for (double eps : {0.0, 0.5, 1.0}) {
    for (int k = 0; k < 20; ++k) EXPECT_EQ(dqn_select(net, state, eps, one, rng), 111);
  }
}

Transition random_transition(Rng& rng, bool done) {
  Transition t;
  t.state.resize(kStateSize);
  t.next_state.resize(kStateSize);
  for (auto& x : t.state) x = rng.uniform01();
  for (auto& x : t.next_state) x = rng.uniform01();
  t.action = rng.uniform_int(kNumActions);
  t.reward = rng.uniform(-5, 5);
  t.done = done;
  for (int i = 0; i < 10; ++i) t.next_mask[rng.uniform_int(kNumActions)] = true;
  return t;
}

TEST(DqnTargets, TerminalOrUndiscountedEqualRewards) {
  Rng rng(4);
  const auto net = make_q_network(rng);
  std::vector<Transition> ts;
  for (int i = 0; i < 8; ++i) ts.push_back(random_transition(rng, true));
  std::vector<const Transition*> batch;
  for (auto& t : ts) batch.push_back(&t);
  auto y = dqn_targets(net, batch, 0.99);
  for (std::size_t i = 0; i < ts.size(); ++i) EXPECT_EQ(y[i], ts[i].reward);
  for (auto& t : ts) t.done = false;
  y = dqn_targets(net, batch, 0.0);
  for (std::size_t i = 0; i < ts.size(); ++i) EXPECT_EQ(y[i], ts[i].reward);
}

TEST(DqnTargets, BootstrapUsesLegalMaxOfTarget) {
  DenseNet net({kStateSize, kNumActions}, {Activation::kLinear});
  const auto b = net.bias_offset(0);
  net.params()[b + 5] = 2.0;
  net.params()[b + 6] = 9.0;
  Transition t;
  t.state.assign(kStateSize, 0.0);
  t.next_state.assign(kStateSize, 0.0);
  t.reward = 1.0;
  t.next_mask[5] = true;
  const Transition* p = &t;
  EXPECT_NEAR(dqn_targets(net, std::span(&p, 1), 0.5)[0], 2.0, 1e-15);
}

TEST(DqnLearner, TwoTransitionLossMatchesHandComputation) {
  Rng rng(8);
  DqnConfig cfg;
  cfg.batch_size = 2;
  DqnLearner learner(cfg, make_q_network(rng));
  ReplayBuffer buf(2000);
  buf.push(random_transition(rng, true));
  buf.push(random_transition(rng, false));
  const DenseNet before = learner.net();

  double expected = 0.0;
  for (int i = 0; i < 2; ++i) {
    const Transition& t = buf.at(i);
    double y = t.reward;
    if (!t.done) {
      const auto q = before.forward(t.next_state);
      double best = -1e300;
      for (int a = 0; a < kNumActions; ++a) {
        if (t.next_mask[a]) best = std::max(best, q[a]);
      }
      y += cfg.gamma * best;
    }
    const double err = before.forward(t.state)[t.action] - y;
    expected += err * err / 2.0;
  }
  Rng step_rng(1);
  const auto loss = learner.train_step(buf, step_rng);
  ASSERT_TRUE(loss);
  EXPECT_NEAR(*loss, expected, 1e-12 * std::max(1.0, expected));
  EXPECT_NE(params_of(learner.net()), params_of(before));
  EXPECT_EQ(params_of(learner.target()), params_of(before));
}

TEST(DqnLearner, TooSmallBufferIsNoOp) {
  Rng rng(8);
  DqnLearner learner(DqnConfig{}, rng);
  ReplayBuffer buf(2000);
  for (int i = 0; i < 31; ++i) buf.push(random_transition(rng, true));
  const auto before = params_of(learner.net());
  EXPECT_FALSE(learner.train_step(buf, rng));
  EXPECT_EQ(params_of(learner.net()), before);
  EXPECT_EQ(learner.steps(), 0);
}

TEST(DqnLearner, TargetSyncsEveryHundredSteps) {
  Rng rng(12);
  DqnConfig cfg;
  cfg.batch_size = 4;
  cfg.learning_rate = 1e-3;
  DqnLearner learner(cfg, rng);
  ReplayBuffer buf(2000);
  for (int i = 0; i < 40; ++i) buf.push(random_transition(rng, i % 3 == 0));
  const auto initial = params_of(learner.target());
  for (int step = 1; step <= 250; ++step) {
    learner.train_step(buf, rng);
    if (step % 100 == 0) {
      EXPECT_EQ(params_of(learner.target()), params_of(learner.net())) << step;
    } else if (step < 100) {
      ASSERT_EQ(params_of(learner.target()), initial) << step;
    } else {
      ASSERT_NE(params_of(learner.target()), params_of(learner.net())) << step;
    }
  }
}

TEST(Gae, Examples) {
  const std::vector<double> r{1.0}, v{0.5, 0.0};
  const bool done[] = {true};
  EXPECT_NEAR(gae_raw(r, v, done, 0.99, 0.95)[0], 0.5, 1e-15);

  const std::vector<double> rs{1, -2, 0.5, 3};
  const std::vector<double> vs{0.2, -0.1, 0.7, 0.4, 1.1};
  const bool ds[] = {false, false, true, false};
  const auto a0 = gae_raw(rs, vs, ds, 0.9, 0.0);
  for (int t = 0; t < 4; ++t) {
    const double delta = rs[t] + 0.9 * vs[t + 1] * (ds[t] ? 0 : 1) - vs[t];
    EXPECT_EQ(a0[t], delta);
  }
  // Hand-unrolled recursion with lambda 0.5.
  const auto a = gae_raw(rs, vs, ds, 0.9, 0.5);
  const double d3 = 3 + 0.9 * 1.1 - 0.4;
  const double d2 = 0.5 - 0.7;
  const double d1 = -2 + 0.9 * 0.7 + 0.1;
  const double d0 = 1 + 0.9 * -0.1 - 0.2;
  EXPECT_NEAR(a[3], d3, 1e-15);
  EXPECT_NEAR(a[2], d2, 1e-15);
  EXPECT_NEAR(a[1], d1 + 0.45 * d2, 1e-15);
  EXPECT_NEAR(a[0], d0 + 0.45 * (d1 + 0.45 * d2), 1e-15);
  EXPECT_TRUE(gae(std::vector<double>{}, std::vector<double>{}, std::span<const bool>{}, 0.99,
                  0.95)
                  .empty());
}

TEST(Gae, NormalizedMomentsForRandomBatches) {
  Rng rng(21);
  for (int n : {2, 3, 17, 200}) {
    std::vector<double> r(n), v(n);
    std::unique_ptr<bool[]> d(new bool[n]);
    for (int i = 0; i < n; ++i) {
      r[i] = rng.uniform(-10, 10);
      v[i] = rng.uniform(-3, 3);
      d[i] = rng.bernoulli(0.2);
    }
    const auto a = gae(r, v, std::span<const bool>(d.get(), n), 0.99, 0.95);
    const double m = std::accumulate(a.begin(), a.end(), 0.0) / n;
    double var = 0;
    for (double x : a) var += (x - m) * (x - m);
    EXPECT_NEAR(m, 0.0, 1e-9);
    EXPECT_NEAR(var / n, 1.0, 1e-9);
  }
}

TEST(Ppo, ClippedSurrogateAndEntropy) {
  EXPECT_DOUBLE_EQ(clipped_surrogate(2.0, 1.0, 0.2), 1.2);
  EXPECT_DOUBLE_EQ(clipped_surrogate(0.5, 1.0, 0.2), 0.5);
  EXPECT_DOUBLE_EQ(clipped_surrogate(0.5, -1.0, 0.2), -0.8);
  EXPECT_DOUBLE_EQ(clipped_surrogate(2.0, -1.0, 0.2), -2.0);
  for (int k : {1, 2, 5, 128}) {
    std::vector<double> p(k, 1.0 / k);
    EXPECT_NEAR(entropy(p), std::log(static_cast<double>(k)), 1e-12);
  }
}

std::vector<PpoStep> random_steps(const DenseNet& actor, Rng& rng, int n) {
  std::vector<PpoStep> steps(n);
  for (auto& st : steps) {
    st.state.resize(kStateSize);
    for (auto& x : st.state) x = rng.bernoulli(0.2) ? 1.0 : 0.0;
    for (int i = 0; i < 6; ++i) st.mask[rng.uniform_int(kNumActions)] = true;
    std::vector<int> legal;
    for (int i = 0; i < kNumActions; ++i) {
      if (st.mask[i]) legal.push_back(i);
    }
    st.action = legal[rng.uniform_int(static_cast<int>(legal.size()))];
    st.log_prob = std::log(actor.forward(st.state, st.mask)[st.action]);
  }
  return steps;
}

TEST(Ppo, UnclippedGradientEqualsVanillaPolicyGradient) {
  Rng rng(31);
  const auto actor = make_policy_network(rng);
  const auto steps = random_steps(actor, rng, 9);
  std::vector<const PpoStep*> ptrs;
  std::vector<double> adv;
  for (const auto& st : steps) {
    ptrs.push_back(&st);
    adv.push_back(rng.uniform(-2, 2));
  }
  PpoConfig cfg;
  cfg.clip = 1e12;
  cfg.entropy_coef = 0.0;
  std::vector<double> got(actor.num_params(), 0.0);
  ppo_actor_gradient(actor, ptrs, adv, cfg, got);

  // -mean(A * grad log pi(a|s)); d log softmax / d logits = onehot - p.
  std::vector<double> want(actor.num_params(), 0.0);
  for (std::size_t i = 0; i < steps.size(); ++i) {
    ForwardCache cache;
    const auto p = actor.forward(steps[i].state, cache, steps[i].mask);
    std::vector<double> g(kNumActions, 0.0);
    for (int j = 0; j < kNumActions; ++j) {
      if (!steps[i].mask[j]) continue;
      g[j] = -adv[i] * ((j == steps[i].action ? 1.0 : 0.0) - p[j]) / steps.size();
    }
    actor.backward_from_pre(cache, g, want);
  }
  double scale = 0;
  for (double w : want) scale = std::max(scale, std::abs(w));
  ASSERT_GT(scale, 0);
  for (std::size_t k = 0; k < want.size(); ++k) ASSERT_NEAR(got[k], want[k], 1e-9) << k;
}

// The full actor objective, for finite differences.
double actor_loss(const DenseNet& actor, const std::vector<PpoStep>& steps,
                  const std::vector<double>& adv, const PpoConfig& cfg) {
  double total = 0;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const auto p = actor.forward(steps[i].state, steps[i].mask);
    const double ratio = std::exp(std::log(p[steps[i].action]) - steps[i].log_prob);
    total += -clipped_surrogate(ratio, adv[i], cfg.clip) - cfg.entropy_coef * entropy(p);
  }
  return total / steps.size();
}

TEST(Ppo, ActorGradientMatchesFiniteDifferences) {
  Rng rng(41);
  auto actor = DenseNet::glorot({kStateSize, 8, kNumActions},
                                {Activation::kReLU, Activation::kSoftmax}, rng);
  const auto steps = random_steps(actor, rng, 5);
  // Move the policy away from the behaviour one so some ratios leave the
  // clip range.
  for (auto& w : actor.params()) w += rng.uniform(-0.3, 0.3);
  std::vector<const PpoStep*> ptrs;
  std::vector<double> adv;
  for (const auto& st : steps) {
    ptrs.push_back(&st);
    adv.push_back(rng.uniform(-2, 2));
  }
  PpoConfig cfg;
  std::vector<double> grad(actor.num_params(), 0.0);
  ppo_actor_gradient(actor, ptrs, adv, cfg, grad);
  const double h = 1e-6;
  for (std::size_t k = 0; k < actor.params().size(); k += 37) {
    DenseNet plus = actor, minus = actor;
    plus.params()[k] += h;
    minus.params()[k] -= h;
    const double fd = (actor_loss(plus, steps, adv, cfg) - actor_loss(minus, steps, adv, cfg)) / (2 * h);
    EXPECT_NEAR(grad[k], fd, 1e-6 + 1e-4 * std::abs(fd)) << k;
  }
}

TEST(Ppo, MaskedProbabilitiesVanish) {
  Rng rng(51);
  const auto actor = make_policy_network(rng);
  const auto steps = random_steps(actor, rng, 20);
  for (const auto& st : steps) {
    const auto p = actor.forward(st.state, st.mask);
    double total = 0;
    for (int i = 0; i < kNumActions; ++i) {
      if (!st.mask[i]) EXPECT_LE(p[i], 1e-12);
      total += p[i];
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
}

TEST(Ppo, UpdateRaisesProbabilityOfAdvantagedAction) {
  Rng rng(61);
  auto actor = make_policy_network(rng);
  auto critic = make_value_network(rng);
  PpoStep st;
  st.state.assign(kStateSize, 0.0);
  st.state[3] = st.state[60] = 1.0;
  st.mask[10] = st.mask[11] = true;
  st.action = 10;
  st.log_prob = std::log(actor.forward(st.state, st.mask)[10]);
  std::vector<PpoStep> batch;
  for (int i = 0; i < 8; ++i) {
    PpoStep s = st;
    s.action = i % 2 == 0 ? 10 : 11;
    s.log_prob = std::log(actor.forward(s.state, s.mask)[s.action]);
    s.reward = s.action == 10 ? 5.0 : -5.0;
    s.done = true;
    batch.push_back(s);
  }
  PpoConfig cfg;
  cfg.learning_rate = 1e-3;
  Adam ao(actor.num_params(), AdamConfig{cfg.learning_rate});
  Adam co(critic.num_params(), AdamConfig{cfg.learning_rate});
  const double before = actor.forward(st.state, st.mask)[10];
  const auto losses = ppo_update(actor, critic, ao, co, batch, cfg, rng);
  EXPECT_GT(actor.forward(st.state, st.mask)[10], before);
  EXPECT_TRUE(std::isfinite(losses.policy));
  EXPECT_GT(losses.value, 0.0);
  EXPECT_NEAR(losses.entropy, std::log(2.0), 0.05);
}

TEST(Convergence, Examples) {
  std::vector<double> constant(1000, 0.3);
  EXPECT_TRUE(convergence_check(constant, 500, 1e-9));
  std::vector<double> step(1000, 0.0);
  std::fill(step.begin() + 500, step.end(), 1.0);
  EXPECT_FALSE(convergence_check(step, 500, 0.05));
  std::vector<double> drift(1000, 0.2);
  std::fill(drift.begin() + 500, drift.end(), 0.249);
  EXPECT_TRUE(convergence_check(drift, 500, 0.05));
  EXPECT_FALSE(convergence_check(std::span(constant).first(999), 500, 0.05));
  // Only the last two windows count.
  std::vector<double> tail(1500, 1.0);
  std::fill(tail.begin(), tail.begin() + 500, 0.0);
  EXPECT_TRUE(convergence_check(tail, 500, 0.05));
}

std::vector<std::unique_ptr<Agent>> random_opponents(int n) {
  std::vector<std::unique_ptr<Agent>> out;
  for (int i = 0; i < n; ++i) out.push_back(std::make_unique<RandomAgent>());
  return out;
}

TEST(Train, ZeroEpisodesIsEmpty) {
  TrainConfig cfg;
  cfg.episodes = 0;
  const auto r = train(cfg, random_opponents(4));
  EXPECT_TRUE(r.curve.empty());
  EXPECT_TRUE(r.checkpoints.empty());
  EXPECT_FALSE(r.converged_at);
}

TEST(Train, DeterministicForFixedSeed) {
  for (LearnerKind kind : {LearnerKind::kDqn, LearnerKind::kPpo}) {
    TrainConfig cfg;
    cfg.kind = kind;
    cfg.episodes = 12;
    cfg.checkpoint_every = 5;
    cfg.seed = 77;
    cfg.dqn.batch_size = 8;
    const auto a = train(cfg, random_opponents(4));
    const auto b = train(cfg, random_opponents(4));
    ASSERT_EQ(a.curve.size(), 12u);
    ASSERT_EQ(a.checkpoints.size(), 2u);
    EXPECT_EQ(a.checkpoints[0].first, 5);
    for (std::size_t i = 0; i < a.curve.size(); ++i) {
      EXPECT_EQ(a.curve[i].reward, b.curve[i].reward);
      EXPECT_EQ(a.curve[i].win, b.curve[i].win);
      EXPECT_EQ(a.curve[i].length, b.curve[i].length);
      EXPECT_EQ(a.curve[i].loss, b.curve[i].loss);
    }
    EXPECT_EQ(params_of(a.final_net), params_of(b.final_net));
    cfg.seed = 78;
    const auto c = train(cfg, random_opponents(4));
    EXPECT_NE(params_of(a.final_net), params_of(c.final_net));
  }
}

TEST(Train, CurveCsv) {
  std::vector<EpisodeLog> curve{{1, 12.0, true, 9, std::nullopt}, {2, -3.5, false, 4, 0.25}};
  std::ostringstream os;
  write_curve_csv(os, curve);
  EXPECT_EQ(os.str(), "episode,reward,win,length,loss\n1,12,1,9,\n2,-3.5,0,4,0.25\n");
}

// Records every reward the arena hands out.
class RewardTap : public Agent {
 public:
  explicit RewardTap(std::unique_ptr<Agent> inner, bool sabotage)
      : inner_(std::move(inner)), sabotage_(sabotage) {}
  std::string name() const override { return inner_->name(); }
  Action act(const Observation& obs, Rng& rng) override {
    if (sabotage_ && rng.bernoulli(0.3)) return InvalidAction{120};
    return inner_->act(obs, rng);
  }
  void on_reward(double r, bool done) override { rewards.emplace_back(r, done); }
  bool contracts_legality() const override { return false; }
  std::unique_ptr<Agent> clone() const override { return nullptr; }
  std::vector<std::pair<double, bool>> rewards;

 private:
  std::unique_ptr<Agent> inner_;
  bool sabotage_;
};

TEST(Rewards, StayInsideTheStatedSet) {
  Rng init(71);
  std::vector<std::unique_ptr<RewardTap>> taps;
  taps.push_back(std::make_unique<RewardTap>(
      std::make_unique<GreedyNetAgent>(LearnerKind::kPpo, make_policy_network(init)), false));
  taps.push_back(std::make_unique<RewardTap>(
      std::make_unique<GreedyNetAgent>(LearnerKind::kDqn, make_q_network(init)), true));
  for (int i = 0; i < 3; ++i) {
    taps.push_back(std::make_unique<RewardTap>(std::make_unique<RandomAgent>(), i == 0));
  }
  std::vector<Agent*> agents;
  for (auto& t : taps) agents.push_back(t.get());
  const std::vector<int> seating{0, 1, 2, 3, 4};
  std::vector<std::int64_t> coins(5, kStartingCoins);
  Rng rng(5);
  int invalid = 0;
  for (int r = 0; r < 30; ++r) {
    run_round(agents, seating, coins, RoundContext{{}, r}, rng);
  }
  for (const auto& t : taps) {
    int finals = 0;
    for (auto [r, done] : t->rewards) {
      if (done) {
        ++finals;
        EXPECT_GE(r, -400);
        EXPECT_LE(r, 400);
      } else {
        EXPECT_TRUE(r == 1.0 || r == -10.0 || r == 0.0) << r;
        invalid += r == -10.0;
      }
    }
    EXPECT_EQ(finals, 30);
  }
  EXPECT_GT(invalid, 0);
}

TEST(CheckpointSelect, SingleAndTies) {
  Rng rng(81);
  const auto net = make_policy_network(rng);
  const std::vector<DenseNet> one{net};
  EXPECT_EQ(checkpoint_select(LearnerKind::kPpo, one, random_opponents(4), 8, 1), 0);
  const std::vector<DenseNet> same{net, net, net};
  std::vector<double> rates;
  EXPECT_EQ(checkpoint_select(LearnerKind::kPpo, same, random_opponents(4), 8, 1, &rates), 2);
  ASSERT_EQ(rates.size(), 3u);
  EXPECT_EQ(rates[0], rates[1]);
}

TEST(CheckpointSelect, PicksHighestValidationRate) {
  Rng rng(82);
  std::vector<DenseNet> nets;
  for (int i = 0; i < 4; ++i) nets.push_back(make_policy_network(rng));
  std::vector<double> rates;
  const int best = checkpoint_select(LearnerKind::kPpo, nets, random_opponents(4), 24, 3, &rates);
  ASSERT_EQ(rates.size(), 4u);
  const double top = *std::max_element(rates.begin(), rates.end());
  EXPECT_EQ(rates[best], top);
  for (std::size_t i = best + 1; i < rates.size(); ++i) EXPECT_LT(rates[i], top);
}

TEST(LearnedAgent, RoundTripsThroughCheckpoint) {
  Rng rng(91);
  const auto net = make_q_network(rng);
  const std::string path = ::testing::TempDir() + "/q.json";
  save_weights(net, path);
  const auto agent = load_learned_agent(LearnerKind::kDqn, path);
  EXPECT_EQ(params_of(agent->net()), params_of(net));
  EXPECT_EQ(agent->name(), "DQN");
  EXPECT_THROW(load_learned_agent(LearnerKind::kPpo, path), ConfigError);
}

}  // namespace
}  // namespace dhumbal
