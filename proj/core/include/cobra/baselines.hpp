#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cobra/instance.hpp"
#include "cobra/run_log.hpp"
#include "cobra/simulate.hpp"

namespace cobra {

struct UcbAgentState {
  std::vector<std::uint64_t> counts;
  std::vector<double> sums;
  Round rounds = 0;
};

// UCB1 index choice: unpulled arms first in index order, then
// argmax mean + sqrt(2 ln t / count) with ties to the lower index.
ArmIndex ucb1_choice(std::span<const std::uint64_t> counts, std::span<const double> sums, Round t);

// Every agent runs UCB1 on its own observations; nothing is shared.
class Ucb1Policy final : public Policy {
 public:
  std::string name() const override { return "ucb1"; }
  void start(const BanditInstance& instance, Round horizon) override;
  std::vector<ArmIndex> choose(Round t) override;
  void observe(Round t, std::span<const ArmIndex> chosen, std::span<const double> observed) override;
  void finish(RunLog& log) override;

  const std::vector<UcbAgentState>& agents() const { return agents_; }

 private:
  std::vector<UcbAgentState> agents_;
  Round horizon_ = 0;
};

struct CoopAaeState {
  ArmSet surviving;
  std::vector<std::uint64_t> counts;  // pooled across agents, never reset
  std::vector<double> sums;
  std::size_t phase = 1;
  Round phase_first_round = 1;
  Round phase_last_round = 0;
};

double aae_radius(std::uint64_t pooled_count, std::size_t num_arms, std::size_t phase, double delta);

// Arms whose upper confidence bound is below the best lower confidence bound.
// Throws InvariantViolation if nothing would survive.
ArmSet aae_eliminate(const CoopAaeState& state, std::size_t num_arms, double delta);

// Cooperative active arm elimination with pooled statistics and phase
// doubling. Phase p runs 2^(p-1) sweeps of ceil(|S|/V) rounds; within a sweep
// the agents cover the surviving set S round-robin. Eliminated arms never return.
class CoopAaePolicy final : public Policy {
 public:
  explicit CoopAaePolicy(double delta);

  std::string name() const override { return "coop_aae"; }
  void start(const BanditInstance& instance, Round horizon) override;
  std::vector<ArmIndex> choose(Round t) override;
  void observe(Round t, std::span<const ArmIndex> chosen, std::span<const double> observed) override;
  void finish(RunLog& log) override;

  const CoopAaeState& state() const { return state_; }
  // Surviving set at the start of every phase, in order.
  const std::vector<ArmSet>& history() const { return surviving_history_; }

 private:
  void begin_phase(Round first_round);

  double delta_;
  std::size_t num_arms_ = 0;
  std::size_t num_agents_ = 0;
  Round horizon_ = 0;
  CoopAaeState state_;
  std::vector<EpochSummary> phases_;
  std::vector<ArmSet> surviving_history_;
};

}  // namespace cobra
