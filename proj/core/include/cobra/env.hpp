#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cobra/instance.hpp"
#include "cobra/rng.hpp"

namespace cobra {

using Round = std::uint64_t;

// Dense agents x arms matrix of rewards, row-major by agent.
class RewardMatrix {
 public:
  RewardMatrix() = default;
  RewardMatrix(std::size_t agents, std::size_t arms, double fill = 0.0)
      : agents_(agents), arms_(arms), data_(agents * arms, fill) {}

  std::size_t agents() const { return agents_; }
  std::size_t arms() const { return arms_; }

  double& operator()(AgentIndex v, ArmIndex i) { return data_[v * arms_ + i]; }
  double operator()(AgentIndex v, ArmIndex i) const { return data_[v * arms_ + i]; }

  std::span<double> row(AgentIndex v) { return {data_.data() + v * arms_, arms_}; }
  std::span<const double> row(AgentIndex v) const { return {data_.data() + v * arms_, arms_}; }
  std::span<const double> flat() const { return data_; }

  friend bool operator==(const RewardMatrix&, const RewardMatrix&) = default;

 private:
  std::size_t agents_ = 0;
  std::size_t arms_ = 0;
  std::vector<double> data_;
};

// Everything that happened in one simultaneous round.
struct RoundRecord {
  Round t = 0;
  RewardMatrix stochastic;
  RewardMatrix corrupted;
  std::vector<ArmIndex> chosen;
  std::vector<double> observed;
  // max_i |r_{v,i}(t) - r^S_{v,i}(t)| per agent.
  std::vector<double> corruption;
};

// Append-only stream of rounds 1..t. In lean mode the full reward vectors
// are dropped; only choices, played-arm rewards and per-agent corruption remain.
class RoundLog {
 public:
  RoundLog(std::size_t agents, std::size_t arms, bool lean = false);

  void reserve(std::size_t rounds);
  void append(const RoundRecord& record);

  std::size_t rounds() const { return chosen_.size() / agents_; }
  std::size_t agents() const { return agents_; }
  std::size_t arms() const { return arms_; }
  bool lean() const { return lean_; }

  // t is 1-based.
  ArmIndex chosen(Round t, AgentIndex v) const { return chosen_[idx(t, v)]; }
  double observed(Round t, AgentIndex v) const { return observed_[idx(t, v)]; }
  double observed_stochastic(Round t, AgentIndex v) const { return observed_stochastic_[idx(t, v)]; }
  double corruption(Round t, AgentIndex v) const { return corruption_[idx(t, v)]; }
  // Full-retention only; throws std::logic_error in lean mode.
  double stochastic(Round t, AgentIndex v, ArmIndex i) const;
  double corrupted(Round t, AgentIndex v, ArmIndex i) const;

 private:
  std::size_t idx(Round t, AgentIndex v) const { return static_cast<std::size_t>(t - 1) * agents_ + v; }

  std::size_t agents_;
  std::size_t arms_;
  bool lean_;
  std::vector<ArmIndex> chosen_;
  std::vector<double> observed_;
  std::vector<double> observed_stochastic_;
  std::vector<double> corruption_;
  std::vector<double> stochastic_;
  std::vector<double> corrupted_;
};

struct AdversaryBudgetState {
  // Running total of the per-round, per-agent infinity-norm cost.
  double spent = 0.0;
  // Number of (round, agent) pairs the adversary chose to corrupt.
  std::uint64_t corrupted_agent_rounds = 0;
  bool active = true;
};

// Corruption strategy. Sees rounds 1..t-1 and the round-t stochastic draws,
// never the round-t choices.
class Adversary {
 public:
  virtual ~Adversary() = default;
  virtual std::string name() const = 0;
  virtual RewardMatrix corrupt(Round t, const RoundLog& history, const RewardMatrix& stochastic) = 0;
  virtual AdversaryBudgetState budget() const { return {0.0, 0, false}; }
};

// Independent draws per (agent, arm) stream; each stream advances exactly
// once per round regardless of which algorithm is running.
class RewardSampler {
 public:
  RewardSampler(const BanditInstance& instance, std::uint64_t seed);
  RewardMatrix sample();

 private:
  const BanditInstance* instance_;
  std::vector<Engine> streams_;
};

RewardMatrix sample_stochastic_rewards(const BanditInstance& instance, RewardSampler& sampler);

// Runs one round: samples, lets the adversary corrupt, validates the range,
// and assembles the record. Throws AdversaryRangeViolation on out-of-range output.
RoundRecord execute_round(Round t, std::span<const ArmIndex> choices, const BanditInstance& instance,
                          Adversary& adversary, RewardSampler& sampler, const RoundLog& history);

}  // namespace cobra
