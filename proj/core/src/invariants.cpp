#include "cobra/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cobra/cbarc.hpp"

namespace cobra {

void InvariantReport::expect(bool condition, const std::string& what) {
  ++checks;
  if (!condition) violations.push_back(what);
}

void InvariantReport::merge(const InvariantReport& other) {
  checks += other.checks;
  violations.insert(violations.end(), other.violations.begin(), other.violations.end());
}

InvariantReport check_cbarc_snapshots(const RunLog& log) {
  InvariantReport r;
  const std::size_t k = log.instance.num_arms();
  for (std::size_t e = 0; e < log.snapshots.size(); ++e) {
    const EpochSnapshot& s = log.snapshots[e];
    const std::string at = "epoch " + std::to_string(s.epoch) + ": ";

    ArmSet all;
    std::set_union(s.active.begin(), s.active.end(), s.bad.begin(), s.bad.end(), std::back_inserter(all));
    r.expect(all.size() == k && s.active.size() + s.bad.size() == k, at + "A and B do not partition [K]");
    r.expect(s.epsilon == cbarc::epsilon_at(s.epoch), at + "global error level off the halving ladder");
    r.expect(std::binary_search(s.active.begin(), s.active.end(), s.empirical_best),
             at + "empirical best arm is not active");

    for (ArmIndex i = 0; i < k; ++i) {
      const double eps_d = cbarc::epsilon_at(s.last_good_epoch[i]);
      r.expect(s.epsilon <= s.arm_epsilon[i], at + "eps(tau) > eps_i for arm " + std::to_string(i));
      r.expect(s.arm_epsilon[i] <= 7.0 * eps_d, at + "eps_i > 7 eps(d_i) for arm " + std::to_string(i));
    }
    for (ArmIndex i : s.bad) {
      r.expect(s.arm_epsilon[i] == cbarc::epsilon_at(s.last_good_epoch[i]),
               at + "bad arm " + std::to_string(i) + " has eps_i != eps(d_i)");
    }
    if (s.epoch >= 2) {
      for (ArmIndex i : s.active) {
        r.expect(s.last_good_epoch[i] + 1 == s.epoch && s.arm_epsilon[i] == s.epsilon &&
                     s.epsilon == cbarc::epsilon_at(s.last_good_epoch[i]) / 2.0,
                 at + "active arm " + std::to_string(i) + " off the ladder");
      }
    }

    ArmSet covered, active_cover, bad_cover;
    for (const AgentEpochView& view : s.agents) {
      ArmSet tmp;
      std::set_union(covered.begin(), covered.end(), view.arms.begin(), view.arms.end(), std::back_inserter(tmp));
      covered.swap(tmp);
      tmp.clear();
      std::set_union(active_cover.begin(), active_cover.end(), view.active.begin(), view.active.end(),
                     std::back_inserter(tmp));
      active_cover.swap(tmp);
      tmp.clear();
      std::set_union(bad_cover.begin(), bad_cover.end(), view.bad.begin(), view.bad.end(), std::back_inserter(tmp));
      bad_cover.swap(tmp);

      double total = 0.0;
      double bad_mass = 0.0;
      for (std::size_t j = 0; j < view.arms.size(); ++j) {
        total += view.probabilities[j];
        if (std::binary_search(view.bad.begin(), view.bad.end(), view.arms[j])) bad_mass += view.probabilities[j];
      }
      const std::string who = at + "agent " + std::to_string(view.agent) + ": ";
      r.expect(std::fabs(total - 1.0) <= 1e-9, who + "pull probabilities do not sum to 1");
      r.expect(bad_mass <= 0.25 + 1e-9, who + "bad-arm mass exceeds 1/4");
      r.expect(!view.active.empty(), who + "no active arm");
      r.expect(view.arms.size() <= s.arms_per_agent, who + "arm set larger than K~");
    }
    r.expect(covered.size() == k, at + "agent arm sets do not cover [K]");
    r.expect(active_cover == s.active, at + "union of agent active sets differs from A");
    r.expect(bad_cover == s.bad, at + "union of agent bad sets differs from B");

    if (s.selected_best && e + 1 < log.snapshots.size()) {
      const EpochSnapshot& next = log.snapshots[e + 1];
      r.expect(std::binary_search(next.active.begin(), next.active.end(), *s.selected_best),
               at + "selected empirical best arm not active next epoch");
      r.expect(next.empirical_best == *s.selected_best, at + "next epoch uses a different empirical best arm");
    }
  }
  return r;
}

InvariantReport check_run_metrics(const RunLog& log, const MetricsSeries& m) {
  InvariantReport r;
  for (std::size_t k = 1; k < m.checkpoints.size(); ++k) {
    r.expect(m.pseudo_regret[k] >= m.pseudo_regret[k - 1], "pseudo-regret decreased");
    r.expect(m.corruption[k] >= m.corruption[k - 1], "corruption decreased");
  }
  if (log.adversary == "null" && !m.corruption.empty()) {
    r.expect(m.corruption.back() == 0.0, "null adversary produced corruption");
  }
  if ((log.adversary == "flip_mean" || log.adversary == "targeted") && !m.corruption.empty() &&
      m.checkpoints.back() == log.rounds.rounds()) {
    // Both adversaries tally in the same (round, agent) order as the metric.
    r.expect(m.corruption.back() == log.adversary_spent, "corruption total differs from adversary tally");
  }
  return r;
}

}  // namespace cobra
