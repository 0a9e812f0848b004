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

#ifndef DHUMBAL_LEARNING_H_
#define DHUMBAL_LEARNING_H_

#include <array>
#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dhumbal/agent.h"
#include "dhumbal/engine.h"
#include "dhumbal/neuralnet.h"

namespace dhumbal {

inline constexpr int kStateSize = 117;
inline constexpr int kNumActions = 128;

// State layout:
//   [0, 52)    own hand, by deck index (suit * 13 + rank - 1)
//   [52, 104)  every card in the discard stack
//   [104, 106) seat parity one-hot
//   [106, 112) hand value / 65, turn / 100, mean opponent hand size / 5,
//              own coins / 10^4, discard pile size / 52, round index / 1024,
//              each clamped to [0, 1.5]
//   [112, 115) phase one-hot (JhyapCheck, Discard, Pick)
//   [115, 117) zero padding
std::vector<double> encode_state(const Observation& obs);

// Action table:
//   0 declare, 1 decline
//   2 + deck_index        discard that single card
//   54 + rank - 1         discard every card of that rank held (two or more)
//   67 + suit * 11 + s-1  discard the longest run in suit starting at rank s
//   111 pick stock, 112 pick discard top
//   113..127 reserved
namespace action_index {
inline constexpr int kDeclare = 0;
inline constexpr int kDecline = 1;
inline constexpr int kFirstSingle = 2;
inline constexpr int kFirstSet = 54;
inline constexpr int kFirstRun = 67;
inline constexpr int kPickStock = 111;
inline constexpr int kPickTop = 112;
inline constexpr int kFirstReserved = 113;
}  // namespace action_index

// The move an index stands for in this position; nullopt when it names
// nothing here (wrong phase, cards not held, reserved).
std::optional<Action> index_to_action(int index, const Observation& obs);
// Inverse on representable moves; nullopt for discards the table cannot name.
std::optional<int> action_to_index(const Action& action, const Observation& obs);

using ActionMask = std::array<bool, kNumActions>;
ActionMask legal_action_mask(const Observation& obs);

struct Transition {
  std::vector<double> state;
  int action = 0;
  double reward = 0.0;
  std::vector<double> next_state;
  ActionMask next_mask{};
  bool done = false;
};

// Fixed-capacity FIFO of transitions.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity = 2000) : capacity_(capacity) {}
  void push(Transition t);
  std::size_t size() const { return items_.size(); }
  std::size_t capacity() const { return capacity_; }
  const Transition& at(std::size_t i) const { return items_.at(i); }
  // `count` distinct transitions chosen uniformly.
  std::vector<const Transition*> sample(std::size_t count, Rng& rng) const;

 private:
  std::size_t capacity_;
  std::deque<Transition> items_;
};

struct DqnConfig {
  double gamma = 0.99;
  double epsilon_start = 1.0;
  double epsilon_end = 0.01;
  double epsilon_decay = 0.995;  // per episode
  int target_sync_every = 100;   // train steps
  double learning_rate = 1e-4;
  int batch_size = 32;
  int buffer_capacity = 2000;
};

struct PpoConfig {
  double gamma = 0.99;
  double lambda = 0.95;
  double clip = 0.2;
  int epochs = 5;
  int minibatch_size = 16;
  double entropy_coef = 0.01;
  double value_coef = 0.5;
  double learning_rate = 1e-4;
  int episodes_per_update = 4;
};

// 117-128-64-128 with ReLU hidden layers; linear (Q) or softmax (policy)
// output. The critic ends in a single linear unit.
DenseNet make_q_network(Rng& rng);
DenseNet make_policy_network(Rng& rng);
DenseNet make_value_network(Rng& rng);

// Index with the largest value among masked-in entries (first on ties).
int masked_argmax(std::span<const double> values, const ActionMask& mask);

// epsilon-greedy: with probability epsilon a uniform legal index, otherwise
// the masked argmax of the Q-values.
int dqn_select(const DenseNet& net, std::span<const double> state, double epsilon,
               const ActionMask& mask, Rng& rng);

// Owns the online and target networks and counts train steps.
class DqnLearner {
 public:
  DqnLearner(DqnConfig config, Rng& rng);
  DqnLearner(DqnConfig config, DenseNet net);

  // One Adam step on a uniform batch, syncing the target network after
  // every target_sync_every-th call. nullopt while the buffer is smaller
  // than the batch.
  std::optional<double> train_step(const ReplayBuffer& buffer, Rng& rng);

  const DqnConfig& config() const { return config_; }
  DenseNet& net() { return net_; }
  const DenseNet& net() const { return net_; }
  const DenseNet& target() const { return target_; }
  Adam& optimizer() { return adam_; }
  long steps() const { return steps_; }

 private:
  DqnConfig config_;
  DenseNet net_;
  DenseNet target_;
  Adam adam_;
  long steps_ = 0;
};

// Targets r for terminal transitions, else r + gamma * max over legal next
// actions of the target network.
std::vector<double> dqn_targets(const DenseNet& target, std::span<const Transition* const> batch,
                                double gamma);

// delta_t = r_t + gamma * v_{t+1} * (1 - done_t) - v_t,
// A_t = delta_t + gamma * lambda * (1 - done_t) * A_{t+1}. values carries
// one extra bootstrap entry or matches rewards in length (bootstrap 0).
std::vector<double> gae_raw(std::span<const double> rewards, std::span<const double> values,
                            std::span<const bool> dones, double gamma, double lambda);
// Zero mean, unit variance (sd floored at 1e-8). Sizes below two are left
// centred only.
std::vector<double> normalize(std::span<const double> xs);
std::vector<double> gae(std::span<const double> rewards, std::span<const double> values,
                        std::span<const bool> dones, double gamma, double lambda);

struct PpoStep {
  std::vector<double> state;
  ActionMask mask{};
  int action = 0;
  double log_prob = 0.0;
  double value = 0.0;
  double reward = 0.0;
  bool done = false;
};

struct PpoLosses {
  double policy = 0.0;  // clipped surrogate objective (to maximise)
  double value = 0.0;
  double entropy = 0.0;
};

// min(rho * A, clip(rho, 1 - eps, 1 + eps) * A).
double clipped_surrogate(double ratio, double advantage, double clip);
// Entropy of a probability vector (natural log), skipping zeros.
double entropy(std::span<const double> probs);

// Adds the gradient of -surrogate - entropy_coef * entropy (averaged over
// `steps`) to `grad`; returns the mean losses of the batch.
PpoLosses ppo_actor_gradient(const DenseNet& actor, std::span<const PpoStep* const> steps,
                             std::span<const double> advantages, const PpoConfig& config,
                             std::span<double> grad);

// Epochs of shuffled minibatches with Adam steps on both networks. Returns
// the losses averaged over all minibatches.
PpoLosses ppo_update(DenseNet& actor, DenseNet& critic, Adam& actor_opt, Adam& critic_opt,
                     std::span<const PpoStep> batch, const PpoConfig& config, Rng& rng);

enum class LearnerKind : std::uint8_t { kDqn, kPpo };
std::string_view to_string(LearnerKind kind);

// Plays from a trained network: masked argmax of Q-values or policy
// probabilities.
class GreedyNetAgent : public Agent {
 public:
  GreedyNetAgent(LearnerKind kind, DenseNet net);
  std::string name() const override { return std::string(to_string(kind_)); }
  Action act(const Observation& obs, Rng& rng) override;
  bool contracts_legality() const override { return false; }
  std::unique_ptr<Agent> clone() const override { return std::make_unique<GreedyNetAgent>(*this); }
  const DenseNet& net() const { return net_; }

 private:
  LearnerKind kind_;
  DenseNet net_;
};

// Loads a checkpoint and checks its shape for the given learner.
std::unique_ptr<GreedyNetAgent> load_learned_agent(LearnerKind kind, const std::string& path);

struct EpisodeLog {
  int episode = 0;
  double reward = 0.0;
  bool win = false;
  int length = 0;  // learner decisions
  std::optional<double> loss;
};

struct TrainConfig {
  LearnerKind kind = LearnerKind::kPpo;
  int episodes = 1000;
  std::uint64_t seed = kDefaultSeed;
  int checkpoint_every = 100;
  int convergence_window = 500;
  // Win-rate change below which training counts as converged; 0.05 for DQN
  // and 0.02 for PPO when unset.
  std::optional<double> convergence_threshold;
  bool stop_on_convergence = false;
  RoundConfig round;
  DqnConfig dqn;
  PpoConfig ppo;
};

struct TrainResult {
  std::vector<EpisodeLog> curve;
  std::vector<std::pair<int, DenseNet>> checkpoints;  // (episode, network)
  DenseNet final_net;
  std::optional<int> converged_at;
};

// One episode is one round with the learner and `opponents` at the table,
// seats shuffled each episode.
TrainResult train(const TrainConfig& config, const std::vector<std::unique_ptr<Agent>>& opponents,
                  const std::function<void(const EpisodeLog&)>& on_episode = {});

// |mean(last window) - mean(previous window)| < threshold; false when the
// series is shorter than two windows.
bool convergence_check(std::span<const double> series, int window, double threshold);

// Index of the checkpoint with the best validation win rate over `rounds`
// rounds (same seed for every candidate); ties go to the later one.
int checkpoint_select(LearnerKind kind, std::span<const DenseNet> checkpoints,
                      const std::vector<std::unique_ptr<Agent>>& opponents, int rounds,
                      std::uint64_t seed, std::vector<double>* win_rates = nullptr);

void write_curve_csv(std::ostream& os, std::span<const EpisodeLog> curve);

}  // namespace dhumbal

#endif  // DHUMBAL_LEARNING_H_
