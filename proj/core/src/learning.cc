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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>

#include "dhumbal/arena.h"
#include "dhumbal/errors.h"

namespace dhumbal {

namespace ai = action_index;

namespace {

double clamp_feature(double x) { return std::clamp(x, 0.0, 1.5); }

}  // namespace

std::vector<double> encode_state(const Observation& obs) {
  std::vector<double> s(kStateSize, 0.0);
  for (Card c : obs.own_hand) s[c.deck_index()] = 1.0;
  const CardSet pile = obs.discard_pile();
  for (Card c : pile) s[52 + c.deck_index()] = 1.0;
  s[104 + obs.player % 2] = 1.0;
  s[106] = clamp_feature(obs.hand_value() / 65.0);
  s[107] = clamp_feature(obs.turn_count / 100.0);
  s[108] = clamp_feature(obs.mean_opponent_hand_size() / 5.0);
  s[109] = clamp_feature(static_cast<double>(obs.own_coins) / 1e4);
  s[110] = clamp_feature(pile.size() / 52.0);
  s[111] = clamp_feature(obs.round_index / 1024.0);
  s[112 + static_cast<int>(obs.phase)] = 1.0;
  return s;
}

namespace {

CardSet run_from(CardSet hand, Suit suit, int start) {
  CardSet run;
  for (int r = start; r <= kNumRanks && hand.contains(Card(r, suit)); ++r) run.insert(Card(r, suit));
  return run;
}

CardSet rank_cards(CardSet hand, int rank) {
  CardSet out;
  for (int s = 0; s < kNumSuits; ++s) {
    const Card c(rank, static_cast<Suit>(s));
    if (hand.contains(c)) out.insert(c);
  }
  return out;
}

}  // namespace

std::optional<Action> index_to_action(int index, const Observation& obs) {
  if (index < 0 || index >= kNumActions) return std::nullopt;
  switch (obs.phase) {
    case Phase::kJhyapCheck:
      if (index == ai::kDecline) return JhyapChoice{false};
      if (index == ai::kDeclare && can_declare_jhyap(obs.own_hand)) return JhyapChoice{true};
      return std::nullopt;
    case Phase::kPick:
      if (index == ai::kPickStock) return PickSource::kStock;
      if (index == ai::kPickTop && obs.discard_top) return PickSource::kDiscardTop;
      return std::nullopt;
    case Phase::kDiscard:
      break;
  }
  const CardSet hand = obs.own_hand;
  if (index >= ai::kFirstSingle && index < ai::kFirstSet) {
    const Card c = Card::from_deck_index(index - ai::kFirstSingle);
    if (hand.contains(c)) return DiscardGroup::single(c);
  } else if (index >= ai::kFirstSet && index < ai::kFirstRun) {
    const CardSet same = rank_cards(hand, index - ai::kFirstSet + 1);
    if (same.size() >= 2) return DiscardGroup{GroupKind::kSet, same};
  } else if (index >= ai::kFirstRun && index < ai::kPickStock) {
    const int k = index - ai::kFirstRun;
    const CardSet run = run_from(hand, static_cast<Suit>(k / 11), k % 11 + 1);
    if (run.size() >= 3) return DiscardGroup{GroupKind::kSequence, run};
  }
  return std::nullopt;
}

std::optional<int> action_to_index(const Action& action, const Observation& obs) {
  if (const auto* j = std::get_if<JhyapChoice>(&action)) {
    return j->declare ? ai::kDeclare : ai::kDecline;
  }
  if (const auto* p = std::get_if<PickSource>(&action)) {
    return *p == PickSource::kStock ? ai::kPickStock : ai::kPickTop;
  }
  if (const auto* g = std::get_if<DiscardGroup>(&action)) {
    switch (g->kind) {
      case GroupKind::kSingle: return ai::kFirstSingle + g->cards.lowest().deck_index();
      case GroupKind::kSet: {
        const int rank = g->cards.lowest().rank();
        if (rank_cards(obs.own_hand, rank) != g->cards) return std::nullopt;
        return ai::kFirstSet + rank - 1;
      }
      case GroupKind::kSequence: {
        const Card low = g->cards.lowest();
        if (run_from(obs.own_hand, low.suit(), low.rank()) != g->cards) return std::nullopt;
        return ai::kFirstRun + static_cast<int>(low.suit()) * 11 + low.rank() - 1;
      }
    }
  }
  return std::nullopt;
}

ActionMask legal_action_mask(const Observation& obs) {
  ActionMask mask{};
  for (int i = 0; i < ai::kFirstReserved; ++i) {
    const auto a = index_to_action(i, obs);
    mask[i] = a.has_value() && is_legal(obs, *a);
  }
  return mask;
}

// ---------------------------------------------------------------------------
// Replay buffer and DQN

void ReplayBuffer::push(Transition t) {
  if (capacity_ == 0) return;
  if (items_.size() == capacity_) items_.pop_front();
  items_.push_back(std::move(t));
}

std::vector<const Transition*> ReplayBuffer::sample(std::size_t count, Rng& rng) const {
  if (count > items_.size()) throw DomainError("cannot sample more transitions than stored");
  std::vector<std::size_t> idx(items_.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<const Transition*> out;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + rng.below(idx.size() - i);
    std::swap(idx[i], idx[j]);
    out.push_back(&items_[idx[i]]);
  }
  return out;
}

DenseNet make_q_network(Rng& rng) {
  return DenseNet::glorot({kStateSize, 128, 64, kNumActions},
                          {Activation::kReLU, Activation::kReLU, Activation::kLinear}, rng);
}

DenseNet make_policy_network(Rng& rng) {
  return DenseNet::glorot({kStateSize, 128, 64, kNumActions},
                          {Activation::kReLU, Activation::kReLU, Activation::kSoftmax}, rng);
}

DenseNet make_value_network(Rng& rng) {
  return DenseNet::glorot({kStateSize, 128, 64, 1},
                          {Activation::kReLU, Activation::kReLU, Activation::kLinear}, rng);
}

int masked_argmax(std::span<const double> values, const ActionMask& mask) {
  int best = -1;
  for (int i = 0; i < static_cast<int>(values.size()) && i < kNumActions; ++i) {
    if (mask[i] && (best < 0 || values[i] > values[best])) best = i;
  }
  if (best < 0) throw StateError("no legal action in mask");
  return best;
}

int dqn_select(const DenseNet& net, std::span<const double> state, double epsilon,
               const ActionMask& mask, Rng& rng) {
  if (epsilon > 0 && rng.uniform01() < epsilon) {
    std::vector<int> legal;
    for (int i = 0; i < kNumActions; ++i) {
      if (mask[i]) legal.push_back(i);
    }
    if (legal.empty()) throw StateError("no legal action in mask");
    return legal[rng.below(legal.size())];
  }
  return masked_argmax(net.forward(state), mask);
}

DqnLearner::DqnLearner(DqnConfig config, Rng& rng) : DqnLearner(config, make_q_network(rng)) {}

DqnLearner::DqnLearner(DqnConfig config, DenseNet net)
    : config_(config), net_(std::move(net)), target_(net_),
      adam_(net_.num_params(), AdamConfig{config.learning_rate}) {}

std::vector<double> dqn_targets(const DenseNet& target, std::span<const Transition* const> batch,
                                double gamma) {
  std::vector<double> y;
  for (const Transition* t : batch) {
    double v = t->reward;
    if (!t->done && gamma != 0.0) {
      const auto q = target.forward(t->next_state);
      v += gamma * q[masked_argmax(q, t->next_mask)];
    }
    y.push_back(v);
  }
  return y;
}

std::optional<double> DqnLearner::train_step(const ReplayBuffer& buffer, Rng& rng) {
  const auto b = static_cast<std::size_t>(config_.batch_size);
  if (buffer.size() < b) return std::nullopt;
  const auto batch = buffer.sample(b, rng);
  const auto y = dqn_targets(target_, batch, config_.gamma);
  std::vector<double> grad(net_.num_params(), 0.0);
  std::vector<double> g(kNumActions, 0.0);
  double loss = 0.0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    ForwardCache cache;
    const auto q = net_.forward(batch[i]->state, cache);
    const double err = q[batch[i]->action] - y[i];
    loss += err * err / static_cast<double>(b);
    std::fill(g.begin(), g.end(), 0.0);
    g[batch[i]->action] = 2.0 * err / static_cast<double>(b);
    net_.backward(cache, g, grad);
  }
  adam_.step(net_.params(), grad);
  ++steps_;
  if (steps_ % config_.target_sync_every == 0) target_ = net_;
  return loss;
}

// ---------------------------------------------------------------------------
// GAE and PPO

std::vector<double> gae_raw(std::span<const double> rewards, std::span<const double> values,
                            std::span<const bool> dones, double gamma, double lambda) {
  const std::size_t n = rewards.size();
  if (dones.size() != n || (values.size() != n && values.size() != n + 1)) {
    throw ShapeError("rewards, values and dones must line up");
  }
  std::vector<double> adv(n, 0.0);
  double next_adv = 0.0;
  for (std::size_t k = n; k-- > 0;) {
    const double next_v = k + 1 < values.size() ? values[k + 1] : 0.0;
    const double live = dones[k] ? 0.0 : 1.0;
    const double delta = rewards[k] + gamma * next_v * live - values[k];
    adv[k] = delta + gamma * lambda * live * next_adv;
    next_adv = adv[k];
  }
  return adv;
}

std::vector<double> normalize(std::span<const double> xs) {
  std::vector<double> out(xs.begin(), xs.end());
  if (out.empty()) return out;
  const double m = std::accumulate(out.begin(), out.end(), 0.0) / static_cast<double>(out.size());
  double var = 0.0;
  for (double x : out) var += (x - m) * (x - m);
  var /= static_cast<double>(out.size());
  const double sd = std::max(std::sqrt(var), 1e-8);
  for (double& x : out) x = out.size() >= 2 ? (x - m) / sd : x - m;
  return out;
}

std::vector<double> gae(std::span<const double> rewards, std::span<const double> values,
                        std::span<const bool> dones, double gamma, double lambda) {
  return normalize(gae_raw(rewards, values, dones, gamma, lambda));
}

double clipped_surrogate(double ratio, double advantage, double clip) {
  return std::min(ratio * advantage, std::clamp(ratio, 1.0 - clip, 1.0 + clip) * advantage);
}

double entropy(std::span<const double> probs) {
  double h = 0.0;
  for (double p : probs) {
    if (p > 0) h -= p * std::log(p);
  }
  return h;
}

PpoLosses ppo_actor_gradient(const DenseNet& actor, std::span<const PpoStep* const> steps,
                             std::span<const double> advantages, const PpoConfig& config,
                             std::span<double> grad) {
  if (steps.size() != advantages.size()) throw ShapeError("one advantage per step required");
  PpoLosses out;
  const double inv = 1.0 / static_cast<double>(std::max<std::size_t>(steps.size(), 1));
  std::vector<double> g(kNumActions);
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const PpoStep& st = *steps[i];
    ForwardCache cache;
    const auto p = actor.forward(st.state, cache, st.mask);
    const double a = advantages[i];
    const double ratio = std::exp(std::log(p[st.action]) - st.log_prob);
    const double unclipped = ratio * a;
    const double surrogate = clipped_surrogate(ratio, a, config.clip);
    const double h = entropy(p);
    out.policy += surrogate * inv;
    out.entropy += h * inv;
    // d surrogate / d log p_a is ratio * A while the unclipped term is the
    // minimum, 0 once clipping takes over.
    const double coef = unclipped <= surrogate ? a * ratio : 0.0;
    for (int j = 0; j < kNumActions; ++j) {
      const double dlogp = (j == st.action ? 1.0 : 0.0) - p[j];
      const double dh = p[j] > 0 ? -p[j] * (std::log(p[j]) + h) : 0.0;
      g[j] = st.mask[j] ? (-coef * dlogp - config.entropy_coef * dh) * inv : 0.0;
    }
    actor.backward_from_pre(cache, g, grad);
  }
  return out;
}

PpoLosses ppo_update(DenseNet& actor, DenseNet& critic, Adam& actor_opt, Adam& critic_opt,
                     std::span<const PpoStep> batch, const PpoConfig& config, Rng& rng) {
  PpoLosses total;
  if (batch.empty()) return total;
  std::vector<double> rewards, values;
  std::unique_ptr<bool[]> dones(new bool[batch.size()]);
  for (std::size_t i = 0; i < batch.size(); ++i) {
    rewards.push_back(batch[i].reward);
    values.push_back(batch[i].value);
    dones[i] = batch[i].done;
  }
  const auto raw = gae_raw(rewards, values, std::span<const bool>(dones.get(), batch.size()),
                           config.gamma, config.lambda);
  std::vector<double> returns(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) returns[i] = raw[i] + values[i];
  const auto adv = normalize(raw);

  std::vector<std::size_t> order(batch.size());
  std::iota(order.begin(), order.end(), 0);
  int minibatches = 0;
  const auto mb = static_cast<std::size_t>(std::max(config.minibatch_size, 1));
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    for (std::size_t start = 0; start < order.size(); start += mb) {
      const std::size_t end = std::min(order.size(), start + mb);
      std::vector<const PpoStep*> steps;
      std::vector<double> mb_adv;
      for (std::size_t k = start; k < end; ++k) {
        steps.push_back(&batch[order[k]]);
        mb_adv.push_back(adv[order[k]]);
      }
      std::vector<double> actor_grad(actor.num_params(), 0.0);
      const auto losses = ppo_actor_gradient(actor, steps, mb_adv, config, actor_grad);

      std::vector<double> critic_grad(critic.num_params(), 0.0);
      double value_loss = 0.0;
      const double inv = 1.0 / static_cast<double>(steps.size());
      for (std::size_t k = start; k < end; ++k) {
        ForwardCache cache;
        const double v = critic.forward(batch[order[k]].state, cache)[0];
        const double err = v - returns[order[k]];
        value_loss += err * err * inv;
        const double gv = config.value_coef * 2.0 * err * inv;
        critic.backward(cache, std::span<const double>(&gv, 1), critic_grad);
      }
      actor_opt.step(actor.params(), actor_grad);
      critic_opt.step(critic.params(), critic_grad);
      total.policy += losses.policy;
      total.entropy += losses.entropy;
      total.value += value_loss;
      ++minibatches;
    }
  }
  if (minibatches > 0) {
    total.policy /= minibatches;
    total.entropy /= minibatches;
    total.value /= minibatches;
  }
  return total;
}

// ---------------------------------------------------------------------------
// Agents

std::string_view to_string(LearnerKind kind) { return kind == LearnerKind::kDqn ? "DQN" : "PPO"; }

GreedyNetAgent::GreedyNetAgent(LearnerKind kind, DenseNet net) : kind_(kind), net_(std::move(net)) {
  if (net_.input_size() != kStateSize || net_.output_size() != kNumActions) {
    throw ShapeError("network must map 117 inputs to 128 actions");
  }
}

Action GreedyNetAgent::act(const Observation& obs, Rng& /*rng*/) {
  const auto mask = legal_action_mask(obs);
  const auto state = encode_state(obs);
  const auto out = kind_ == LearnerKind::kPpo ? net_.forward(state, mask) : net_.forward(state);
  const int index = masked_argmax(out, mask);
  if (const auto a = index_to_action(index, obs)) return *a;
  return InvalidAction{index};
}

std::unique_ptr<GreedyNetAgent> load_learned_agent(LearnerKind kind, const std::string& path) {
  DenseNet net = load_weights(path);
  const bool softmax_out = net.activations().back() == Activation::kSoftmax;
  if (softmax_out != (kind == LearnerKind::kPpo)) {
    throw ConfigError("checkpoint " + path + " does not hold a " + std::string(to_string(kind)) +
                      " network");
  }
  try {
    return std::make_unique<GreedyNetAgent>(kind, std::move(net));
  } catch (const ShapeError& e) {
    throw ConfigError("checkpoint " + path + ": " + e.what());
  }
}

namespace {

class DqnTrainingAgent : public Agent {
 public:
  DqnTrainingAgent(DqnLearner& learner, ReplayBuffer& buffer, Rng& train_rng)
      : learner_(learner), buffer_(buffer), rng_(train_rng) {}

  std::string name() const override { return "DQN"; }
  bool contracts_legality() const override { return false; }
  std::unique_ptr<Agent> clone() const override {
    throw StateError("training agents cannot be cloned");
  }

  Action act(const Observation& obs, Rng& rng) override {
    auto state = encode_state(obs);
    const auto mask = legal_action_mask(obs);
    if (pending_) {
      pending_->next_state = state;
      pending_->next_mask = mask;
      commit();
    }
    const int index = dqn_select(learner_.net(), state, epsilon, mask, rng);
    pending_ = Transition{std::move(state), index, 0.0, {}, {}, false};
    if (const auto a = index_to_action(index, obs)) return *a;
    return InvalidAction{index};
  }

  void on_reward(double reward, bool done) override {
    if (!pending_) return;
    pending_->reward += reward;
    if (done) {
      pending_->done = true;
      pending_->next_state.assign(kStateSize, 0.0);
      commit();
    }
  }

  double epsilon = 1.0;
  std::vector<double> losses;

 private:
  void commit() {
    buffer_.push(std::move(*pending_));
    pending_.reset();
    if (const auto loss = learner_.train_step(buffer_, rng_)) losses.push_back(*loss);
  }

  DqnLearner& learner_;
  ReplayBuffer& buffer_;
  Rng& rng_;
  std::optional<Transition> pending_;
};

class PpoTrainingAgent : public Agent {
 public:
  PpoTrainingAgent(const DenseNet& actor, const DenseNet& critic, std::vector<PpoStep>& steps)
      : actor_(actor), critic_(critic), steps_(steps) {}

  std::string name() const override { return "PPO"; }
  bool contracts_legality() const override { return false; }
  std::unique_ptr<Agent> clone() const override {
    throw StateError("training agents cannot be cloned");
  }
  void begin_round(const Observation&) override { acted_ = false; }

  Action act(const Observation& obs, Rng& rng) override {
    PpoStep st;
    st.state = encode_state(obs);
    st.mask = legal_action_mask(obs);
    const auto p = actor_.forward(st.state, st.mask);
    double u = rng.uniform01();
    int index = masked_argmax(p, st.mask);
    for (int i = 0; i < kNumActions; ++i) {
      if (!st.mask[i]) continue;
      index = i;
      if (u < p[i]) break;
      u -= p[i];
    }
    st.action = index;
    st.log_prob = std::log(p[index]);
    st.value = critic_.forward(st.state)[0];
    steps_.push_back(std::move(st));
    acted_ = true;
    if (const auto a = index_to_action(index, obs)) return *a;
    return InvalidAction{index};
  }

  void on_reward(double reward, bool done) override {
    if (!acted_) return;
    steps_.back().reward += reward;
    if (done) steps_.back().done = true;
  }

 private:
  const DenseNet& actor_;
  const DenseNet& critic_;
  std::vector<PpoStep>& steps_;
  bool acted_ = false;
};

double mean_of(std::span<const double> xs) {
  return xs.empty() ? 0.0 : std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

}  // namespace

bool convergence_check(std::span<const double> series, int window, double threshold) {
  if (window < 1 || series.size() < 2 * static_cast<std::size_t>(window)) return false;
  const auto n = series.size();
  const auto w = static_cast<std::size_t>(window);
  const double last = mean_of(series.subspan(n - w, w));
  const double prev = mean_of(series.subspan(n - 2 * w, w));
  return std::fabs(last - prev) < threshold;
}

TrainResult train(const TrainConfig& config, const std::vector<std::unique_ptr<Agent>>& opponents,
                  const std::function<void(const EpisodeLog&)>& on_episode) {
  if (config.episodes < 0) throw ConfigError("episodes must not be negative");
  const int n = 1 + static_cast<int>(opponents.size());
  if (n < kMinPlayers || n > kMaxPlayers) throw ConfigError("training tables seat 2 to 5 players");

  Rng rng(config.seed);
  Rng train_rng = rng.fork();
  TrainResult result;

  std::vector<std::unique_ptr<Agent>> others;
  for (const auto& o : opponents) others.push_back(o->clone());

  std::optional<DqnLearner> dqn;
  ReplayBuffer buffer(static_cast<std::size_t>(config.dqn.buffer_capacity));
  std::unique_ptr<DqnTrainingAgent> dqn_agent;
  DenseNet actor, critic;
  Adam actor_opt, critic_opt;
  std::vector<PpoStep> steps;
  std::unique_ptr<PpoTrainingAgent> ppo_agent;
  Agent* learner = nullptr;
  if (config.kind == LearnerKind::kDqn) {
    DqnConfig dc = config.dqn;
    dqn.emplace(dc, train_rng);
    dqn_agent = std::make_unique<DqnTrainingAgent>(*dqn, buffer, train_rng);
    dqn_agent->epsilon = dc.epsilon_start;
    learner = dqn_agent.get();
  } else {
    actor = make_policy_network(train_rng);
    critic = make_value_network(train_rng);
    actor_opt = Adam(actor.num_params(), {config.ppo.learning_rate});
    critic_opt = Adam(critic.num_params(), {config.ppo.learning_rate});
    ppo_agent = std::make_unique<PpoTrainingAgent>(actor, critic, steps);
    learner = ppo_agent.get();
  }
  std::vector<Agent*> table = {learner};
  for (auto& o : others) table.push_back(o.get());

  const double threshold = config.convergence_threshold.value_or(
      config.kind == LearnerKind::kDqn ? 0.05 : 0.02);
  std::vector<double> wins;
  std::optional<double> last_ppo_loss;
  for (int ep = 0; ep < config.episodes; ++ep) {
    std::vector<int> seating(n);
    std::iota(seating.begin(), seating.end(), 0);
    rng.shuffle(std::span<int>(seating));
    std::vector<std::int64_t> coins(n, kStartingCoins);
    const std::size_t losses_before = dqn_agent ? dqn_agent->losses.size() : 0;
    const RoundRecord rec = run_round(table, seating, coins, {config.round, 0}, rng);

    EpisodeLog log;
    log.episode = ep + 1;
    log.reward = rec.agents[0].reward;
    log.win = rec.winner == 0;
    log.length = rec.agents[0].decisions;
    if (dqn_agent) {
      const auto& l = dqn_agent->losses;
      if (l.size() > losses_before) {
        log.loss = mean_of(std::span<const double>(l).subspan(losses_before));
      }
      dqn_agent->epsilon =
          std::max(config.dqn.epsilon_end, dqn_agent->epsilon * config.dqn.epsilon_decay);
    } else if ((ep + 1) % std::max(config.ppo.episodes_per_update, 1) == 0 ||
               ep + 1 == config.episodes) {
      const auto losses = ppo_update(actor, critic, actor_opt, critic_opt, steps, config.ppo, train_rng);
      steps.clear();
      last_ppo_loss = -losses.policy + config.ppo.value_coef * losses.value -
                      config.ppo.entropy_coef * losses.entropy;
      log.loss = last_ppo_loss;
    }
    for (double x : {log.reward, log.loss.value_or(0.0)}) {
      if (!std::isfinite(x)) throw InvariantViolation("training produced a non-finite value");
    }
    result.curve.push_back(log);
    if (on_episode) on_episode(log);

    const DenseNet& current = dqn ? dqn->net() : actor;
    if (config.checkpoint_every > 0 && (ep + 1) % config.checkpoint_every == 0) {
      result.checkpoints.emplace_back(ep + 1, current);
    }
    wins.push_back(log.win ? 1.0 : 0.0);
    if (!result.converged_at && convergence_check(wins, config.convergence_window, threshold)) {
      result.converged_at = ep + 1;
      if (config.stop_on_convergence) break;
    }
  }
  result.final_net = dqn ? dqn->net() : actor;
  return result;
}

int checkpoint_select(LearnerKind kind, std::span<const DenseNet> checkpoints,
                      const std::vector<std::unique_ptr<Agent>>& opponents, int rounds,
                      std::uint64_t seed, std::vector<double>* win_rates) {
  if (checkpoints.empty()) throw ConfigError("no checkpoints to select from");
  int best = 0;
  double best_rate = -1.0;
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    std::vector<std::unique_ptr<Agent>> agents;
    agents.push_back(std::make_unique<GreedyNetAgent>(kind, checkpoints[i]));
    for (const auto& o : opponents) agents.push_back(o->clone());
    TournamentOptions opt;
    opt.rounds = rounds;
    opt.seed = seed;
    const auto r = run_tournament(std::move(agents), opt);
    const double rate = r.summary.agents[0].win_rate;
    if (win_rates) win_rates->push_back(rate);
    if (rate >= best_rate) {
      best_rate = rate;
      best = static_cast<int>(i);
    }
  }
  return best;
}

void write_curve_csv(std::ostream& os, std::span<const EpisodeLog> curve) {
  os << "episode,reward,win,length,loss\n";
  char buf[64];
  for (const auto& e : curve) {
    std::snprintf(buf, sizeof buf, "%.17g", e.reward);
    os << e.episode << ',' << buf << ',' << (e.win ? 1 : 0) << ',' << e.length << ',';
    if (e.loss) {
      std::snprintf(buf, sizeof buf, "%.17g", *e.loss);
      os << buf;
    }
    os << '\n';
  }
}

}  // namespace dhumbal
