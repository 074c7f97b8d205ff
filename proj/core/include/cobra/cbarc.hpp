#pragma once

// Cooperative epoch-based algorithm robust to adversarial corruptions: every
// arm keeps being sampled, bad arms with probability shrunk by their error
// level, and bad arms whose fresh estimates look good can be reactivated.
// A leader (agent 0) aggregates per-agent estimates at every epoch end.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "cobra/env.hpp"
#include "cobra/instance.hpp"
#include "cobra/rng.hpp"
#include "cobra/run_log.hpp"
#include "cobra/simulate.hpp"

namespace cobra::cbarc {

inline constexpr double kInitialEpsilon = 1.0 / 14.0;

// Global error level of an epoch (1-based): (1/14) * 2^-(epoch-1).
double epsilon_at(std::size_t epoch);

struct Allocation {
  std::size_t arms_per_agent = 0;  // nominal K~, used in pull-probability denominators
  std::vector<ArmSet> arm_sets;    // K_v per agent
};

// Splits [K] into contiguous blocks of ceil(K/V) arms, pads the last block and
// any leftover agents by sampling, then adds the empirical best arm to every
// set. With one agent the set is [K] and K~ = K. Throws ConfigError if V > K.
Allocation allocate_arms(std::size_t num_arms, std::size_t num_agents, ArmIndex empirical_best, Engine& rng);

ArmSet intersect(const ArmSet& a, const ArmSet& b);

// Sampling distribution over `arms` (aligned). Bad arms get
// eps^2 / (eps_i^2 * K~); active arms share the remainder equally.
// Throws InvariantViolation on a negative entry or a sum off by more than 1e-9.
std::vector<double> pull_probabilities(const ArmSet& arms, const ArmSet& active, double epsilon,
                                       std::span<const double> arm_epsilon, std::size_t arms_per_agent);

// 3 K~ ln(8 K log4(T) / delta) / eps^2 before rounding.
double epoch_length_real(double epsilon, std::size_t arms_per_agent, std::size_t num_arms, Round horizon,
                         double delta);
std::uint64_t epoch_length(double epsilon, std::size_t arms_per_agent, std::size_t num_arms, Round horizon,
                           double delta);

// Importance-style estimate: observed reward sum over the expected pull count.
// Deliberately unclamped.
double agent_estimate(double reward_sum, double expected_pulls);

// Unweighted mean over the agents holding the arm.
double leader_aggregate(std::span<const double> agent_estimates);

struct LeaderState {
  std::size_t epoch = 1;
  double epsilon = kInitialEpsilon;
  std::vector<double> arm_epsilon;
  std::vector<std::size_t> last_good_epoch;
  ArmSet active;
  ArmSet bad;
  ArmIndex empirical_best = 0;

  static LeaderState initial(std::size_t num_arms, ArmIndex empirical_best);
};

// Bad arms whose estimate is within 4 eps(d_i) of the best active estimate.
ArmSet reactivate(const ArmSet& active, const ArmSet& bad, std::span<const double> estimates,
                  std::span<const std::size_t> last_good_epoch);

struct EmpiricalBest {
  ArmIndex arm = 0;
  double score = 0.0;
};

// argmax of estimate + 2 eps_j over the candidates; lowest index wins ties.
EmpiricalBest select_empirical_best(const ArmSet& candidates, std::span<const double> estimates,
                                    std::span<const double> arm_epsilon);

struct Deactivation {
  ArmSet deactivated;
  ArmSet next_active;
  ArmSet next_bad;
  // The literal rule would have deactivated the empirical best arm (possible
  // only for a reactivated arm whose eps_i exceeds 7 eps); it was kept active.
  bool best_exempted = false;
};

// Candidates (active and reactivated) falling more than 14 eps below the best score.
Deactivation deactivate(const ArmSet& active, const ArmSet& bad, const ArmSet& reactivated,
                        const EmpiricalBest& best, std::span<const double> estimates, double epsilon);

// Halves eps; active arms get eps_i = eps(tau+1) and d_i = tau, bad arms fall
// back to eps(d_i). Advances the epoch counter.
void update_error_levels(LeaderState& state, const ArmSet& next_active, const ArmSet& next_bad);

struct EpochOutcome {
  ArmSet reactivated;
  ArmSet deactivated;
  EmpiricalBest best;
  bool best_exempted = false;
};

// Leader steps 2 and 3 on global estimates; mutates state into the next epoch.
EpochOutcome end_epoch(LeaderState& state, std::span<const double> estimates);

// Per-epoch message cost: each agent reports 3 K~ values, the leader sends
// the best arm (1 value) and error levels plus memberships (2 K~ values) to
// every agent. A lone agent talks to nobody.
CommLedger epoch_comm(std::size_t num_agents, std::size_t arms_per_agent);

class CbarcPolicy final : public Policy {
 public:
  CbarcPolicy(double delta, std::uint64_t seed);
  ~CbarcPolicy() override;

  std::string name() const override { return "cbarc"; }
  void start(const BanditInstance& instance, Round horizon) override;
  std::vector<ArmIndex> choose(Round t) override;
  void observe(Round t, std::span<const ArmIndex> chosen, std::span<const double> observed) override;
  void finish(RunLog& log) override;

  const LeaderState& leader() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

RunLog run_cbarc(const BanditInstance& instance, Adversary& adversary, Round horizon, double delta,
                 std::uint64_t seed, bool lean = false);

}  // namespace cobra::cbarc
