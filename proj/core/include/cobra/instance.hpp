#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace cobra {

using ArmIndex = std::size_t;
using AgentIndex = std::size_t;

enum class ArmKind { kBernoulli, kConstant };

struct ArmSpec {
  ArmKind kind = ArmKind::kBernoulli;
  // Bernoulli success probability, or the constant reward.
  double mean = 0.0;

  static ArmSpec bernoulli(double p) { return {ArmKind::kBernoulli, p}; }
  static ArmSpec constant(double v) { return {ArmKind::kConstant, v}; }

  friend bool operator==(const ArmSpec&, const ArmSpec&) = default;
};

std::string to_string(ArmKind kind);
ArmKind parse_arm_kind(const std::string& text);

// A K-armed, V-agent instance with rewards supported on [0,1].
// Construction validates V <= K and means in [0,1]; throws ConfigError.
class BanditInstance {
 public:
  BanditInstance(std::vector<ArmSpec> arms, std::size_t num_agents);

  std::size_t num_arms() const { return arms_.size(); }
  std::size_t num_agents() const { return num_agents_; }
  const std::vector<ArmSpec>& arms() const { return arms_; }
  const ArmSpec& arm(ArmIndex i) const { return arms_[i]; }
  double mean(ArmIndex i) const { return arms_[i].mean; }

  // Lowest index among arms attaining the maximum mean.
  ArmIndex best_arm() const { return best_; }
  double best_mean() const { return arms_[best_].mean; }
  double gap(ArmIndex i) const { return gaps_[i]; }
  const std::vector<double>& gaps() const { return gaps_; }
  // Smallest positive gap; 0 when every arm is optimal.
  double min_gap() const { return min_gap_; }

  friend bool operator==(const BanditInstance& a, const BanditInstance& b) {
    return a.arms_ == b.arms_ && a.num_agents_ == b.num_agents_;
  }

 private:
  std::vector<ArmSpec> arms_;
  std::size_t num_agents_;
  ArmIndex best_ = 0;
  std::vector<double> gaps_;
  double min_gap_ = 0.0;
};

// Two-armed lower-bound instance: arm 0 Bernoulli(1/2 - gap), arm 1 constant 1/2.
BanditInstance make_two_armed_lower_bound(double gap, std::size_t num_agents);

}  // namespace cobra
