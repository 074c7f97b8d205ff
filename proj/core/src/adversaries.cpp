#include "cobra/adversaries.hpp"

#include <algorithm>
#include <cmath>

#include "cobra/errors.hpp"

namespace cobra {

RewardMatrix NullAdversary::corrupt(Round, const RoundLog&, const RewardMatrix& stochastic) {
  return stochastic;
}

FlipMeanAdversary::FlipMeanAdversary(const FlipMeanConfig& config, const BanditInstance& instance,
                                     Round horizon, std::uint64_t seed)
    : config_(config),
      horizon_(horizon),
      rng_(make_stream(seed, StreamPurpose::kAdversary)),
      start_interval_(config.start_interval) {
  if (!(config.gap > 0.25 && config.gap < 0.5)) throw ConfigError("flip_mean: gap must lie in (1/4, 1/2)");
  if (!(config.alpha > 0.0 && config.alpha < 1.0)) throw ConfigError("flip_mean: alpha must lie in (0, 1)");
  if (!(config.b0 > 0.0)) throw ConfigError("flip_mean: b0 must be positive");
  if (config.start_interval && *config.start_interval == 0) {
    throw ConfigError("flip_mean: start_interval is 1-based");
  }
  if (instance.num_arms() != 2 || instance.arm(0).kind != ArmKind::kBernoulli ||
      std::fabs(instance.mean(0) - (0.5 - config.gap)) > 1e-12 || instance.arm(1).kind != ArmKind::kConstant ||
      instance.mean(1) != 0.5) {
    throw ConfigError("flip_mean: requires arms {bernoulli(1/2 - gap), constant(1/2)}");
  }
  const auto base = static_cast<Round>(std::floor(std::pow(static_cast<double>(horizon), config.alpha)));
  if (base == 0) throw ConfigError("flip_mean: floor(T^alpha) must be at least 1");
  Round start = 1;
  Round length = 3 * base;
  while (start <= horizon_) {
    starts_.push_back(start);
    start += length;
    length *= 3;
  }
}

std::size_t FlipMeanAdversary::interval_of(Round t) const {
  auto it = std::upper_bound(starts_.begin(), starts_.end(), t);
  return static_cast<std::size_t>(it - starts_.begin());
}

void FlipMeanAdversary::absorb_history(const RoundLog& history, Round upto) {
  for (Round s = absorbed_ + 1; s <= upto; ++s) {
    const std::size_t ell = interval_of(s);
    if (ell != counting_interval_) {
      if (!start_interval_ && counting_pulls_ <= config_.pull_threshold()) start_interval_ = ell;
      counting_interval_ = ell;
      counting_pulls_ = 0;
    }
    std::uint64_t pulls = 0;
    for (AgentIndex v = 0; v < history.agents(); ++v) pulls += history.chosen(s, v) == 0 ? 1 : 0;
    counting_pulls_ += pulls;
    if (start_interval_ && ell == *start_interval_) start_pulls_ += pulls;
  }
  absorbed_ = upto;
  // Auto mode decides at the first round of a new interval.
  if (!start_interval_ && upto + 1 <= horizon_) {
    const std::size_t next = interval_of(upto + 1);
    if (next != counting_interval_ && counting_pulls_ <= config_.pull_threshold()) start_interval_ = next;
  }
}

RewardMatrix FlipMeanAdversary::corrupt(Round t, const RoundLog& history, const RewardMatrix& stochastic) {
  absorb_history(history, t - 1);
  if (budget_.active && start_interval_ && start_pulls_ > config_.pull_threshold()) budget_.active = false;

  RewardMatrix out = stochastic;
  if (!budget_.active || !start_interval_ || interval_of(t) < *start_interval_) return out;

  const double q = config_.flip_probability();
  for (AgentIndex v = 0; v < out.agents(); ++v) {
    const double u = uniform01(rng_);
    if (stochastic(v, 0) == 0.0 && u < q) {
      out(v, 0) = 1.0;
      budget_.spent += 1.0;
    }
    ++budget_.corrupted_agent_rounds;
  }
  return out;
}

TargetedGapAdversary::TargetedGapAdversary(double budget, ArmIndex target, double depress)
    : budget_(budget), target_(target), depress_(depress) {
  if (!(budget >= 0.0)) throw ConfigError("targeted: budget must be nonnegative");
  if (!(depress > 0.0 && depress <= 1.0)) throw ConfigError("targeted: depress amount must lie in (0, 1]");
  state_.active = budget > 0.0;
}

RewardMatrix TargetedGapAdversary::corrupt(Round, const RoundLog&, const RewardMatrix& stochastic) {
  if (target_ >= stochastic.arms()) throw ConfigError("targeted: target arm out of range");
  RewardMatrix out = stochastic;
  for (AgentIndex v = 0; v < out.agents() && state_.spent < budget_; ++v) {
    const double before = stochastic(v, target_);
    const double after = std::max(0.0, before - depress_);
    out(v, target_) = after;
    state_.spent += before - after;
    ++state_.corrupted_agent_rounds;
  }
  if (state_.spent >= budget_) state_.active = false;
  return out;
}

}  // namespace cobra
