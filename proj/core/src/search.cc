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

#include "dhumbal/search.h"

#include <algorithm>
#include <chrono>
#include <limits>

#include "dhumbal/errors.h"

namespace dhumbal {

void validate(const SearchConfig& config) {
  if (config.iterations < 1) throw ConfigError("search iterations must be at least 1");
  if (config.determinizations < 1) throw ConfigError("determinizations must be at least 1");
  if (!(config.exploration > 0)) throw ConfigError("exploration constant must be positive");
  if (config.max_rollout_depth < 0) throw ConfigError("rollout depth must not be negative");
  if (config.time_limit_ms && *config.time_limit_ms < 1) {
    throw ConfigError("time limit must be at least 1 ms");
  }
}

double ucb_score(double mean, double parent_visits, double visits, double legal, double trials,
                 double exploration) {
  if (visits <= 0) return std::numeric_limits<double>::infinity();
  const double p = trials > 0 ? legal / trials : 0.0;
  return mean + exploration * p * std::sqrt(std::log(std::max(parent_visits, 1.0)) / visits);
}

namespace {

// Legal moves straight from the hidden state, in legal_actions order.
void state_actions(const RoundState& s, std::vector<DiscardGroup>& groups,
                   std::vector<Action>& out) {
  out.clear();
  switch (s.phase()) {
    case Phase::kJhyapCheck:
      out.emplace_back(JhyapChoice{false});
      if (s.can_declare_jhyap()) out.emplace_back(JhyapChoice{true});
      break;
    case Phase::kDiscard:
      enumerate_legal_discards(s.player(s.current_player()).hand, groups);
      for (const auto& g : groups) out.emplace_back(g);
      break;
    case Phase::kPick:
      out.emplace_back(PickSource::kStock);
      if (s.pickable_top()) out.emplace_back(PickSource::kDiscardTop);
      break;
  }
}

}  // namespace

std::vector<std::int64_t> rollout_deltas(RoundState& state, Rng& rng, int max_depth) {
  std::vector<DiscardGroup> groups;
  for (int depth = 0; !state.is_terminal() && depth < max_depth; ++depth) {
    switch (state.phase()) {
      case Phase::kJhyapCheck:
        if (state.can_declare_jhyap() && rng.below(2) == 1) {
          state.declare_jhyap();
        } else {
          state.decline_jhyap();
        }
        break;
      case Phase::kDiscard:
        enumerate_legal_discards(state.player(state.current_player()).hand, groups);
        state.apply_discard(groups[rng.below(groups.size())]);
        break;
      case Phase::kPick: {
        const bool top = state.pickable_top() && rng.below(2) == 1;
        state.apply_pick(top ? PickSource::kDiscardTop : PickSource::kStock);
        break;
      }
    }
  }
  if (!state.is_terminal()) return std::vector<std::int64_t>(state.num_players(), 0);
  return state.outcome()->coin_delta;
}

double rollout(RoundState state, int player, Rng& rng, int max_depth) {
  return static_cast<double>(rollout_deltas(state, rng, max_depth).at(player));
}

ActionKey action_key(const Action& action) {
  struct Visitor {
    ActionKey operator()(JhyapChoice c) const { return (ActionKey{0} << 60) | (c.declare ? 1 : 0); }
    ActionKey operator()(const DiscardGroup& g) const { return (ActionKey{1} << 60) | g.cards.bits(); }
    ActionKey operator()(PickSource p) const {
      return (ActionKey{2} << 60) | static_cast<ActionKey>(p);
    }
    ActionKey operator()(InvalidAction a) const {
      return (ActionKey{3} << 60) | static_cast<std::uint32_t>(a.index);
    }
  };
  return std::visit(Visitor{}, action);
}

namespace {

struct Edge {
  ActionKey key = 0;
  Action action;
  int child = -1;
  int visits = 0;
  double sum = 0.0;
  double legal = 0.0;
  double mean() const { return visits ? sum / visits : 0.0; }
};

struct Node {
  std::vector<Edge> edges;
  int visits = 0;
  double trials = 0.0;
};

int find_or_add(Node& node, ActionKey key, const Action& action) {
  for (std::size_t i = 0; i < node.edges.size(); ++i) {
    if (node.edges[i].key == key) return static_cast<int>(i);
  }
  node.edges.push_back(Edge{key, action});
  return static_cast<int>(node.edges.size()) - 1;
}

struct Step {
  int node;
  int edge;
  int actor;
};

}  // namespace

SearchResult search(const Observation& obs, const BeliefState& belief, const SearchConfig& config,
                    int worlds_per_iteration, const RoundConfig& rules, Rng& rng) {
  validate(config);
  if (worlds_per_iteration < 1) throw ConfigError("need at least one world per iteration");
  const auto root_actions = legal_actions(obs);
  if (root_actions.empty()) throw StateError("no legal action at the search root");

  SearchResult result;
  std::vector<Node> tree(1);
  for (const auto& a : root_actions) find_or_add(tree[0], action_key(a), a);
  if (root_actions.size() == 1) {
    result.action = root_actions.front();
    result.root.push_back({root_actions.front()});
    return result;
  }

  using Clock = std::chrono::steady_clock;
  const auto deadline = config.time_limit_ms
                            ? std::optional(Clock::now() + std::chrono::milliseconds(*config.time_limit_ms))
                            : std::nullopt;

  std::vector<RoundState> worlds;
  std::vector<std::vector<ActionKey>> world_keys;
  std::vector<DiscardGroup> groups;
  std::vector<Action> actions;
  std::vector<int> candidates;
  std::vector<Step> path;

  for (int it = 0; it < config.iterations; ++it) {
    if (deadline && it > 0 && Clock::now() >= *deadline) break;
    worlds.clear();
    for (int w = 0; w < worlds_per_iteration; ++w) {
      worlds.push_back(determinize(belief, obs, rules, rng));
    }
    path.clear();
    int node = 0;
    while (!worlds.front().is_terminal()) {
      const int actor = worlds.front().current_player();
      world_keys.assign(worlds.size(), {});
      candidates.clear();
      tree[node].trials += static_cast<double>(worlds.size());
      for (std::size_t w = 0; w < worlds.size(); ++w) {
        state_actions(worlds[w], groups, actions);
        for (const auto& a : actions) {
          const ActionKey key = action_key(a);
          world_keys[w].push_back(key);
          const int e = find_or_add(tree[node], key, a);
          tree[node].edges[e].legal += 1.0;
          if (std::find(candidates.begin(), candidates.end(), e) == candidates.end()) {
            candidates.push_back(e);
          }
        }
      }

      int chosen = -1;
      std::vector<int> unvisited;
      for (int e : candidates) {
        if (tree[node].edges[e].visits == 0) unvisited.push_back(e);
      }
      if (!unvisited.empty()) {
        chosen = unvisited[rng.below(unvisited.size())];
      } else {
        double best = -std::numeric_limits<double>::infinity();
        for (int e : candidates) {
          const Edge& edge = tree[node].edges[e];
          const double s = ucb_score(edge.mean(), tree[node].visits, edge.visits, edge.legal,
                                     tree[node].trials, config.exploration);
          if (s > best) {
            best = s;
            chosen = e;
          }
        }
      }

      const ActionKey key = tree[node].edges[chosen].key;
      const Action action = tree[node].edges[chosen].action;
      std::size_t kept = 0;
      for (std::size_t w = 0; w < worlds.size(); ++w) {
        const auto& keys = world_keys[w];
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) continue;
        if (kept != w) worlds[kept] = std::move(worlds[w]);
        worlds[kept].apply(action);
        ++kept;
      }
      worlds.erase(worlds.begin() + static_cast<std::ptrdiff_t>(kept), worlds.end());
      path.push_back({node, chosen, actor});

      const bool expanding = tree[node].edges[chosen].visits == 0;
      if (tree[node].edges[chosen].child < 0) {
        tree[node].edges[chosen].child = static_cast<int>(tree.size());
        tree.emplace_back();
      }
      node = tree[node].edges[chosen].child;
      if (expanding) break;
    }

    std::vector<double> totals(obs.num_players, 0.0);
    for (auto& world : worlds) {
      const auto deltas = rollout_deltas(world, rng, config.max_rollout_depth);
      for (int p = 0; p < obs.num_players; ++p) totals[p] += static_cast<double>(deltas[p]);
    }
    for (const Step& step : path) {
      Edge& edge = tree[step.node].edges[step.edge];
      ++edge.visits;
      edge.sum += totals[step.actor] / static_cast<double>(worlds.size());
      ++tree[step.node].visits;
    }
    result.iterations = it + 1;
  }

  const Edge* best = nullptr;
  for (const auto& a : root_actions) {
    const Edge& e = tree[0].edges[find_or_add(tree[0], action_key(a), a)];
    result.root.push_back({e.action, e.visits, e.mean(), e.legal});
    if (!best || e.visits > best->visits || (e.visits == best->visits && e.mean() > best->mean())) {
      best = &e;
    }
  }
  result.action = best->action;
  return result;
}

Action mcts_decide(const Observation& obs, const BeliefState& belief, const SearchConfig& config,
                   const RoundConfig& rules, Rng& rng) {
  return search(obs, belief, config, 1, rules, rng).action;
}

Action ismcts_decide(const Observation& obs, const BeliefState& belief, const SearchConfig& config,
                     const RoundConfig& rules, Rng& rng) {
  return search(obs, belief, config, config.determinizations, rules, rng).action;
}

SearchAgent::SearchAgent(SearchKind kind, SearchConfig config, RoundConfig rules)
    : kind_(kind), config_(config), rules_(rules) {
  validate(config_);
}

void SearchAgent::begin_round(const Observation& obs) {
  belief_ = BeliefState::from_observation(obs);
  tracking_ = true;
}

void SearchAgent::observe(const GameEvent& event) {
  if (!tracking_) return;
  belief_.update(event);
  if (belief_.round_over()) tracking_ = false;
}

Action SearchAgent::act(const Observation& obs, Rng& rng) {
  if (!tracking_) {
    belief_ = BeliefState::from_observation(obs);
    tracking_ = true;
  }
  belief_.check_against(obs);
  return kind_ == SearchKind::kMcts ? mcts_decide(obs, belief_, config_, rules_, rng)
                                    : ismcts_decide(obs, belief_, config_, rules_, rng);
}

}  // namespace dhumbal
