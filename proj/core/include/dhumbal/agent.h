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

#ifndef DHUMBAL_AGENT_H_
#define DHUMBAL_AGENT_H_

#include <memory>
#include <string>

#include "dhumbal/engine.h"
#include "dhumbal/rng.h"

namespace dhumbal {

// A seat at the table. The arena calls begin_round once per deal, act for
// every decision of the agent's seat, and observe for every applied action
// (already redacted for this seat).
class Agent {
 public:
  virtual ~Agent() = default;

  virtual std::string name() const = 0;
  virtual void begin_round(const Observation& /*obs*/) {}
  virtual Action act(const Observation& obs, Rng& rng) = 0;
  virtual void observe(const GameEvent& /*event*/) {}
  // Reward for the agent's last action; done marks the settlement at round end.
  virtual void on_reward(double /*reward*/, bool /*done*/) {}
  // Rule, search and random agents promise legal actions. Agents that do not
  // get the invalid-action penalty and a random legal substitute instead.
  virtual bool contracts_legality() const { return true; }
  virtual std::unique_ptr<Agent> clone() const = 0;
};

}  // namespace dhumbal

#endif  // DHUMBAL_AGENT_H_
