#include "cobra/instance.hpp"

#include <string>

#include "cobra/errors.hpp"

namespace cobra {

std::string to_string(ArmKind kind) {
  return kind == ArmKind::kBernoulli ? "bernoulli" : "constant";
}

ArmKind parse_arm_kind(const std::string& text) {
  if (text == "bernoulli") return ArmKind::kBernoulli;
  if (text == "constant") return ArmKind::kConstant;
  throw ConfigError("unknown arm kind '" + text + "' (expected bernoulli or constant)");
}

BanditInstance::BanditInstance(std::vector<ArmSpec> arms, std::size_t num_agents)
    : arms_(std::move(arms)), num_agents_(num_agents) {
  if (arms_.empty()) throw ConfigError("instance needs at least one arm");
  if (num_agents_ == 0) throw ConfigError("instance needs at least one agent");
  if (num_agents_ > arms_.size()) {
    throw ConfigError("number of agents (" + std::to_string(num_agents_) +
                      ") exceeds number of arms (" + std::to_string(arms_.size()) + ")");
  }
  for (std::size_t i = 0; i < arms_.size(); ++i) {
    const double m = arms_[i].mean;
    if (!(m >= 0.0 && m <= 1.0)) {
      throw ConfigError("arm " + std::to_string(i) + " mean " + std::to_string(m) +
                        " outside [0,1]");
    }
    if (m > arms_[best_].mean) best_ = i;
  }
  gaps_.resize(arms_.size());
  for (std::size_t i = 0; i < arms_.size(); ++i) {
    gaps_[i] = arms_[best_].mean - arms_[i].mean;
    if (gaps_[i] > 0.0 && (min_gap_ == 0.0 || gaps_[i] < min_gap_)) min_gap_ = gaps_[i];
  }
}

BanditInstance make_two_armed_lower_bound(double gap, std::size_t num_agents) {
  return BanditInstance({ArmSpec::bernoulli(0.5 - gap), ArmSpec::constant(0.5)}, num_agents);
}

}  // namespace cobra
