#include "cobra/env.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "cobra/errors.hpp"

namespace cobra {

RoundLog::RoundLog(std::size_t agents, std::size_t arms, bool lean)
    : agents_(agents), arms_(arms), lean_(lean) {}

void RoundLog::reserve(std::size_t rounds) {
  chosen_.reserve(rounds * agents_);
  observed_.reserve(rounds * agents_);
  observed_stochastic_.reserve(rounds * agents_);
  corruption_.reserve(rounds * agents_);
  if (!lean_) {
    stochastic_.reserve(rounds * agents_ * arms_);
    corrupted_.reserve(rounds * agents_ * arms_);
  }
}

void RoundLog::append(const RoundRecord& record) {
  if (record.t != rounds() + 1) throw std::logic_error("RoundLog: rounds must be appended in order");
  for (AgentIndex v = 0; v < agents_; ++v) {
    const ArmIndex arm = record.chosen[v];
    chosen_.push_back(arm);
    observed_.push_back(record.observed[v]);
    observed_stochastic_.push_back(record.stochastic(v, arm));
    corruption_.push_back(record.corruption[v]);
  }
  if (!lean_) {
    const auto s = record.stochastic.flat();
    const auto c = record.corrupted.flat();
    stochastic_.insert(stochastic_.end(), s.begin(), s.end());
    corrupted_.insert(corrupted_.end(), c.begin(), c.end());
  }
}

double RoundLog::stochastic(Round t, AgentIndex v, ArmIndex i) const {
  if (lean_) throw std::logic_error("RoundLog: full reward vectors not retained in lean mode");
  return stochastic_[idx(t, v) * arms_ + i];
}

double RoundLog::corrupted(Round t, AgentIndex v, ArmIndex i) const {
  if (lean_) throw std::logic_error("RoundLog: full reward vectors not retained in lean mode");
  return corrupted_[idx(t, v) * arms_ + i];
}

RewardSampler::RewardSampler(const BanditInstance& instance, std::uint64_t seed) : instance_(&instance) {
  streams_.reserve(instance.num_agents() * instance.num_arms());
  for (AgentIndex v = 0; v < instance.num_agents(); ++v) {
    for (ArmIndex i = 0; i < instance.num_arms(); ++i) {
      streams_.push_back(make_stream(seed, StreamPurpose::kReward, v, i));
    }
  }
}

RewardMatrix RewardSampler::sample() {
  const std::size_t k = instance_->num_arms();
  RewardMatrix out(instance_->num_agents(), k);
  for (AgentIndex v = 0; v < instance_->num_agents(); ++v) {
    for (ArmIndex i = 0; i < k; ++i) {
      const ArmSpec& arm = instance_->arm(i);
      if (arm.kind == ArmKind::kConstant) {
        out(v, i) = arm.mean;
      } else {
        out(v, i) = bernoulli(streams_[v * k + i], arm.mean) ? 1.0 : 0.0;
      }
    }
  }
  return out;
}

RewardMatrix sample_stochastic_rewards(const BanditInstance& /*instance*/, RewardSampler& sampler) {
  return sampler.sample();
}

RoundRecord execute_round(Round t, std::span<const ArmIndex> choices, const BanditInstance& instance,
                          Adversary& adversary, RewardSampler& sampler, const RoundLog& history) {
  const std::size_t agents = instance.num_agents();
  const std::size_t arms = instance.num_arms();
  if (choices.size() != agents) throw std::invalid_argument("execute_round: one choice per agent required");
  for (ArmIndex c : choices) {
    if (c >= arms) throw std::invalid_argument("execute_round: arm index out of range");
  }

  RoundRecord rec;
  rec.t = t;
  rec.stochastic = sampler.sample();
  rec.corrupted = adversary.corrupt(t, history, rec.stochastic);
  if (rec.corrupted.agents() != agents || rec.corrupted.arms() != arms) {
    throw AdversaryRangeViolation(adversary.name() + ": corrupted matrix has wrong shape");
  }
  rec.chosen.assign(choices.begin(), choices.end());
  rec.observed.resize(agents);
  rec.corruption.resize(agents);
  for (AgentIndex v = 0; v < agents; ++v) {
    double worst = 0.0;
    for (ArmIndex i = 0; i < arms; ++i) {
      const double r = rec.corrupted(v, i);
      if (!(r >= 0.0 && r <= 1.0)) {
        throw AdversaryRangeViolation(adversary.name() + ": corrupted reward " + std::to_string(r) +
                                      " outside [0,1] at t=" + std::to_string(t) + ", agent " +
                                      std::to_string(v) + ", arm " + std::to_string(i));
      }
      worst = std::max(worst, std::fabs(r - rec.stochastic(v, i)));
    }
    rec.corruption[v] = worst;
    rec.observed[v] = rec.corrupted(v, choices[v]);
  }
  return rec;
}

}  // namespace cobra
