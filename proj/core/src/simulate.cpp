#include "cobra/simulate.hpp"

namespace cobra {

RunLog simulate(const BanditInstance& instance, Policy& policy, Adversary& adversary, Round horizon,
                const SimulationOptions& options) {
  RunLog log(instance, options.lean);
  log.algorithm = policy.name();
  log.adversary = adversary.name();
  log.seed = options.seed;
  log.horizon = horizon;
  log.rounds.reserve(static_cast<std::size_t>(horizon));

  RewardSampler sampler(instance, options.seed);
  policy.start(instance, horizon);
  for (Round t = 1; t <= horizon; ++t) {
    const std::vector<ArmIndex> choices = policy.choose(t);
    const RoundRecord rec = execute_round(t, choices, instance, adversary, sampler, log.rounds);
    log.rounds.append(rec);
    policy.observe(t, rec.chosen, rec.observed);
  }
  policy.finish(log);
  const AdversaryBudgetState b = adversary.budget();
  log.adversary_spent = b.spent;
  log.adversary_agent_rounds = b.corrupted_agent_rounds;
  return log;
}

}  // namespace cobra
