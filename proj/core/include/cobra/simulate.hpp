#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cobra/env.hpp"
#include "cobra/instance.hpp"
#include "cobra/run_log.hpp"

namespace cobra {

// A multi-agent learning algorithm driven round by round. Policies see only
// their own choices and the observed (possibly corrupted) rewards.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::string name() const = 0;
  virtual void start(const BanditInstance& instance, Round horizon) = 0;
  virtual std::vector<ArmIndex> choose(Round t) = 0;
  virtual void observe(Round t, std::span<const ArmIndex> chosen, std::span<const double> observed) = 0;
  // Writes epoch summaries, snapshots and communication totals.
  virtual void finish(RunLog& log) = 0;
};

struct SimulationOptions {
  std::uint64_t seed = 0;
  bool lean = false;
};

// Plays the policy against the adversary for rounds 1..horizon. Reward draws
// depend only on the seed, so different policies share them.
RunLog simulate(const BanditInstance& instance, Policy& policy, Adversary& adversary, Round horizon,
                const SimulationOptions& options);

}  // namespace cobra
