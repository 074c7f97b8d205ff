#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cobra/env.hpp"
#include "cobra/instance.hpp"
#include "cobra/rng.hpp"

namespace cobra {

// Identity corruption (the purely stochastic setting).
class NullAdversary final : public Adversary {
 public:
  std::string name() const override { return "null"; }
  RewardMatrix corrupt(Round t, const RoundLog& history, const RewardMatrix& stochastic) override;
};

struct FlipMeanConfig {
  double gap = 0.3;    // in (1/4, 1/2)
  double alpha = 0.5;  // in (0, 1)
  double b0 = 1.0;     // > 0
  // 1-based interval where corruption starts; nullopt selects it at runtime.
  std::optional<std::size_t> start_interval = 1;

  double y() const { return b0 / ((1.0 - alpha) * gap * gap); }
  double pull_threshold() const { return 4.0 * y(); }
  // Probability of lifting a 0 to 1 so the corrupted marginal is Bernoulli(1/2 + gap).
  double flip_probability() const { return 2.0 * gap / (0.5 + gap); }

  friend bool operator==(const FlipMeanConfig&, const FlipMeanConfig&) = default;
};

// Lower-bound construction on the two-armed instance: from the start interval
// on, arm 0 looks like Bernoulli(1/2 + gap) to every agent until the arm-0
// pulls inside the start interval exceed 4Y, after which it stops for good.
// Interval l has 3^l * floor(T^alpha) rounds; the last one is cut at T.
class FlipMeanAdversary final : public Adversary {
 public:
  FlipMeanAdversary(const FlipMeanConfig& config, const BanditInstance& instance, Round horizon,
                    std::uint64_t seed);

  std::string name() const override { return "flip_mean"; }
  RewardMatrix corrupt(Round t, const RoundLog& history, const RewardMatrix& stochastic) override;

  // 1-based interval containing round t.
  std::size_t interval_of(Round t) const;
  Round interval_start(std::size_t interval) const { return starts_.at(interval - 1); }
  std::size_t num_intervals() const { return starts_.size(); }
  std::optional<std::size_t> start_interval() const { return start_interval_; }
  double pulls_in_start_interval() const { return static_cast<double>(start_pulls_); }
  AdversaryBudgetState budget() const override { return budget_; }
  const FlipMeanConfig& config() const { return config_; }

 private:
  void absorb_history(const RoundLog& history, Round upto);

  FlipMeanConfig config_;
  Round horizon_;
  Engine rng_;
  std::vector<Round> starts_;
  std::optional<std::size_t> start_interval_;
  Round absorbed_ = 0;
  std::uint64_t start_pulls_ = 0;
  std::size_t counting_interval_ = 1;
  std::uint64_t counting_pulls_ = 0;
  AdversaryBudgetState budget_;
};

// Depresses one arm's reward by a fixed amount for every agent until the
// budget is spent. Agents are visited in ascending order and each one is
// corrupted only while spent < budget, so the overshoot is at most one entry.
class TargetedGapAdversary final : public Adversary {
 public:
  TargetedGapAdversary(double budget, ArmIndex target, double depress);

  std::string name() const override { return "targeted"; }
  RewardMatrix corrupt(Round t, const RoundLog& history, const RewardMatrix& stochastic) override;

  AdversaryBudgetState budget() const override { return state_; }

 private:
  double budget_;
  ArmIndex target_;
  double depress_;
  AdversaryBudgetState state_;
};

}  // namespace cobra
