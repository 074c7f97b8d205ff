#pragma once

// Scripted logs and a brute-force evaluator for regret and corruption.
// The evaluator works on raw script arrays, never on RoundLog or the metrics
// module, so it serves as an independent reference.

#include <cstdint>
#include <vector>

#include "cobra/env.hpp"
#include "cobra/instance.hpp"
#include "cobra/run_log.hpp"

namespace cobra::testing {

struct Script {
  std::size_t agents = 1;
  std::size_t arms = 2;
  std::vector<double> values;  // constant-arm values (stochastic rewards)
  // [t][v][i]
  std::vector<std::vector<std::vector<double>>> corrupted;
  // [t][v]
  std::vector<std::vector<ArmIndex>> chosen;
  std::size_t rounds() const { return chosen.size(); }
};

// Values are multiples of 1/16 so every sum in any order is exact.
Script random_script(std::uint64_t seed, std::size_t max_rounds = 10);

// Replays the script through execute_round with constant arms and an
// adversary that emits the scripted corrupted vectors.
RunLog replay(const Script& script);

struct OracleValues {
  double pseudo_regret = 0.0;
  double realized_regret = 0.0;
  double corruption = 0.0;
};

// Totals over the first `upto` rounds.
OracleValues brute_force(const Script& script, std::size_t upto);

// Adversary returning fixed matrices per round.
class ScriptedAdversary final : public Adversary {
 public:
  explicit ScriptedAdversary(std::vector<RewardMatrix> outputs) : outputs_(std::move(outputs)) {}
  std::string name() const override { return "scripted"; }
  RewardMatrix corrupt(Round t, const RoundLog&, const RewardMatrix&) override { return outputs_.at(t - 1); }

 private:
  std::vector<RewardMatrix> outputs_;
};

}  // namespace cobra::testing
