#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cobra/metrics.hpp"
#include "cobra/run_log.hpp"

namespace cobra {

struct InvariantReport {
  std::size_t checks = 0;
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
  void expect(bool condition, const std::string& what);
  void merge(const InvariantReport& other);
};

// Per-epoch structure of a cbarc run: A/B partition of [K], the error ladder
// eps(tau) = 2^(1-tau)/14 <= eps_i(tau) <= 7 eps(d_i), eps_i = eps(d_i) on bad
// arms, d_i = tau-1 on active arms after epoch 1, agent sets covering [K],
// pull distributions summing to 1 with at most 1/4 on bad arms, and the
// selected empirical best arm being active in the next epoch.
InvariantReport check_cbarc_snapshots(const RunLog& log);

// Run-level accounting: nondecreasing regret and corruption, and the Eq-style
// corruption total equal to the adversary's own tally when it reports one.
InvariantReport check_run_metrics(const RunLog& log, const MetricsSeries& metrics);

}  // namespace cobra
