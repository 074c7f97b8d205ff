#include "scripted.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace cobra::testing {

Script random_script(std::uint64_t seed, std::size_t max_rounds) {
  std::mt19937 g(static_cast<std::uint32_t>(seed));
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(g); };
  auto sixteenth = [&] { return pick(0, 16) / 16.0; };

  Script s;
  s.arms = static_cast<std::size_t>(pick(2, 5));
  s.agents = static_cast<std::size_t>(pick(1, static_cast<int>(s.arms)));
  const auto rounds = static_cast<std::size_t>(pick(1, static_cast<int>(max_rounds)));
  for (std::size_t i = 0; i < s.arms; ++i) s.values.push_back(sixteenth());
  for (std::size_t t = 0; t < rounds; ++t) {
    std::vector<std::vector<double>> round(s.agents);
    std::vector<ArmIndex> picks;
    for (std::size_t v = 0; v < s.agents; ++v) {
      for (std::size_t i = 0; i < s.arms; ++i) {
        round[v].push_back(pick(0, 2) == 0 ? sixteenth() : s.values[i]);
      }
      picks.push_back(static_cast<ArmIndex>(pick(0, static_cast<int>(s.arms) - 1)));
    }
    s.corrupted.push_back(std::move(round));
    s.chosen.push_back(std::move(picks));
  }
  return s;
}

RunLog replay(const Script& s) {
  std::vector<ArmSpec> arms;
  for (double x : s.values) arms.push_back(ArmSpec::constant(x));
  BanditInstance instance(arms, s.agents);
  std::vector<RewardMatrix> outputs;
  for (const auto& round : s.corrupted) {
    RewardMatrix m(s.agents, s.arms);
    for (std::size_t v = 0; v < s.agents; ++v) {
      for (std::size_t i = 0; i < s.arms; ++i) m(v, i) = round[v][i];
    }
    outputs.push_back(std::move(m));
  }
  ScriptedAdversary adversary(std::move(outputs));
  RewardSampler sampler(instance, 0);
  RunLog log(instance, false);
  log.algorithm = "scripted";
  log.adversary = adversary.name();
  log.horizon = s.rounds();
  for (Round t = 1; t <= s.rounds(); ++t) {
    log.rounds.append(execute_round(t, s.chosen[t - 1], instance, adversary, sampler, log.rounds));
  }
  log.epochs.push_back(EpochSummary{1, 1, s.rounds(), false, {}});
  return log;
}

OracleValues brute_force(const Script& s, std::size_t upto) {
  OracleValues out;
  const double best = *std::max_element(s.values.begin(), s.values.end());
  std::vector<double> per_arm(s.arms, 0.0);
  double collected = 0.0;
  for (std::size_t t = 0; t < upto; ++t) {
    for (std::size_t v = 0; v < s.agents; ++v) {
      const ArmIndex a = s.chosen[t][v];
      out.pseudo_regret += best - s.values[a];
      collected += s.corrupted[t][v][a];
      double worst = 0.0;
      for (std::size_t i = 0; i < s.arms; ++i) {
        per_arm[i] += s.corrupted[t][v][i];
        worst = std::max(worst, std::abs(s.corrupted[t][v][i] - s.values[i]));
      }
      out.corruption += worst;
    }
  }
  out.realized_regret = *std::max_element(per_arm.begin(), per_arm.end()) - collected;
  return out;
}

}  // namespace cobra::testing
