#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cobra/env.hpp"
#include "cobra/instance.hpp"

namespace cobra {

using ArmSet = std::vector<ArmIndex>;  // sorted ascending, no duplicates

struct CommLedger {
  std::uint64_t messages = 0;
  std::uint64_t values = 0;

  CommLedger& operator+=(const CommLedger& o) {
    messages += o.messages;
    values += o.values;
    return *this;
  }
  friend bool operator==(const CommLedger&, const CommLedger&) = default;
};

// Round range of one epoch (or phase) and what it cost to communicate at its end.
struct EpochSummary {
  std::size_t index = 1;
  Round first_round = 1;
  Round last_round = 0;
  bool truncated = false;
  CommLedger comm;

  friend bool operator==(const EpochSummary&, const EpochSummary&) = default;
};

struct AgentEpochView {
  AgentIndex agent = 0;
  ArmSet arms;
  ArmSet active;
  ArmSet bad;
  std::vector<double> probabilities;        // aligned with arms
  std::vector<double> expected_pulls;       // p * N(tau)
  std::vector<std::uint64_t> realized_pulls;
  std::vector<double> reward_sums;
  std::vector<double> estimates;            // empty for a truncated epoch

  friend bool operator==(const AgentEpochView&, const AgentEpochView&) = default;
};

// Leader state at the start of an epoch plus the outcome of its end-of-epoch update.
struct EpochSnapshot {
  std::size_t epoch = 1;
  Round first_round = 1;
  Round last_round = 0;
  std::uint64_t planned_length = 0;
  bool truncated = false;

  double epsilon = 0.0;
  std::vector<double> arm_epsilon;
  std::vector<std::size_t> last_good_epoch;
  ArmSet active;
  ArmSet bad;
  ArmIndex empirical_best = 0;  // injected into every agent's arm set
  std::size_t arms_per_agent = 0;
  std::vector<AgentEpochView> agents;

  // End-of-epoch update; left empty when the epoch was truncated.
  std::vector<double> estimates;
  ArmSet reactivated;
  ArmSet deactivated;
  std::optional<ArmIndex> selected_best;
  double best_score = 0.0;
  bool best_exempted = false;
  CommLedger comm;

  friend bool operator==(const EpochSnapshot&, const EpochSnapshot&) = default;
};

struct RunLog {
  std::string algorithm;
  std::string adversary;
  std::uint64_t seed = 0;
  Round horizon = 0;
  BanditInstance instance;
  RoundLog rounds;
  std::vector<EpochSummary> epochs;
  std::vector<EpochSnapshot> snapshots;  // algorithm-specific, cbarc only
  CommLedger comm_total;
  // Adversary-reported counters at the end of the run.
  double adversary_spent = 0.0;
  std::uint64_t adversary_agent_rounds = 0;

  RunLog(BanditInstance inst, bool lean)
      : instance(std::move(inst)), rounds(instance.num_agents(), instance.num_arms(), lean) {}
};

}  // namespace cobra
