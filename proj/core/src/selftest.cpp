#include "cobra/selftest.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "cobra/adversaries.hpp"
#include "cobra/cbarc.hpp"
#include "cobra/errors.hpp"
#include "cobra/metrics.hpp"

namespace cobra {

namespace {

InvariantReport probability_structure(std::uint64_t seed) {
  InvariantReport r;
  Engine rng = make_stream(seed, StreamPurpose::kAlgorithm, 0xfeed);
  for (int config = 0; config < 20; ++config) {
    const std::size_t k = 2 + uniform_index(rng, 15);
    const std::size_t v = 1 + uniform_index(rng, k);
    cbarc::LeaderState leader = cbarc::LeaderState::initial(k, uniform_index(rng, k));
    std::vector<double> means(k);
    for (double& m : means) m = uniform01(rng);
    for (int epoch = 0; epoch < 5; ++epoch) {
      try {
        const cbarc::Allocation alloc = cbarc::allocate_arms(k, v, leader.empirical_best, rng);
        for (const ArmSet& arms : alloc.arm_sets) {
          const auto p = cbarc::pull_probabilities(arms, leader.active, leader.epsilon, leader.arm_epsilon,
                                                   alloc.arms_per_agent);
          double bad = 0.0;
          for (std::size_t j = 0; j < arms.size(); ++j) {
            if (!std::binary_search(leader.active.begin(), leader.active.end(), arms[j])) bad += p[j];
          }
          r.expect(bad <= 0.25 + 1e-9, "bad-arm mass above 1/4");
        }
        std::vector<double> estimates(k);
        for (std::size_t i = 0; i < k; ++i) estimates[i] = means[i] + 0.3 * (uniform01(rng) - 0.5);
        cbarc::end_epoch(leader, estimates);
      } catch (const InvariantViolation& e) {
        r.expect(false, e.what());
      }
    }
  }
  return r;
}

InvariantReport snapshot_runs(std::uint64_t seed) {
  InvariantReport r;
  const BanditInstance instance({ArmSpec::constant(1.0), ArmSpec::constant(0.0), ArmSpec::bernoulli(0.1),
                                 ArmSpec::constant(0.5)},
                                2);
  for (std::uint64_t s = seed; s < seed + 3; ++s) {
    NullAdversary null_adv;
    const RunLog log = cbarc::run_cbarc(instance, null_adv, 100000, 0.05, s, true);
    r.merge(check_cbarc_snapshots(log));
    r.expect(log.snapshots.size() >= 3 && !log.snapshots[2].bad.empty(), "expected deactivations by epoch 3");
    TargetedGapAdversary targeted(500.0, 0, 0.4);
    const RunLog attacked = cbarc::run_cbarc(instance, targeted, 100000, 0.05, s, true);
    r.merge(check_cbarc_snapshots(attacked));
  }
  return r;
}

InvariantReport accounting(std::uint64_t seed) {
  InvariantReport r;
  const BanditInstance instance({ArmSpec::bernoulli(0.8), ArmSpec::bernoulli(0.5), ArmSpec::bernoulli(0.4)}, 2);
  NullAdversary a1, a2;
  const RunLog x = cbarc::run_cbarc(instance, a1, 5000, 0.1, seed);
  const RunLog y = cbarc::run_cbarc(instance, a2, 5000, 0.1, seed);
  const auto cps = default_checkpoints(5000);
  const MetricsSeries mx = compute_metrics(x, cps);
  const MetricsSeries my = compute_metrics(y, cps);
  r.expect(mx.corruption.back() == 0.0, "null adversary corruption is not zero");
  r.expect(mx.pseudo_regret == my.pseudo_regret && mx.comm_values == my.comm_values, "same seed, different run");
  r.merge(check_run_metrics(x, mx));
  return r;
}

void report(std::ostream& out, const std::string& name, const InvariantReport& r) {
  out << (r.ok() ? "PASS " : "FAIL ") << name << " (" << r.checks << " checks";
  if (!r.ok()) out << ", " << r.violations.size() << " violations; first: " << r.violations.front();
  out << ")\n";
}

}  // namespace

InvariantReport run_selftest(std::ostream& out, std::uint64_t seed) {
  InvariantReport all;
  const InvariantReport p = probability_structure(seed);
  report(out, "probability structure", p);
  const InvariantReport s = snapshot_runs(seed);
  report(out, "epoch snapshots", s);
  const InvariantReport a = accounting(seed);
  report(out, "accounting and determinism", a);
  all.merge(p);
  all.merge(s);
  all.merge(a);
  return all;
}

}  // namespace cobra
