#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "cobra/adversaries.hpp"
#include "cobra/baselines.hpp"
#include "cobra/cbarc.hpp"
#include "cobra/errors.hpp"
#include "cobra/metrics.hpp"
#include "cobra/simulate.hpp"

using namespace cobra;

TEST_CASE("ucb1 index") {
  const std::vector<std::uint64_t> fresh{0, 0, 0};
  const std::vector<double> none{0, 0, 0};
  CHECK(ucb1_choice(fresh, none, 1) == 0);
  const std::vector<std::uint64_t> partial{1, 0, 1};
  CHECK(ucb1_choice(partial, none, 3) == 1);
  const std::vector<std::uint64_t> counts{10, 10};
  const std::vector<double> sums{9, 5};
  CHECK(ucb1_choice(counts, sums, 20) == 0);
}

TEST_CASE("ucb1 plays each arm once, then concentrates on the best") {
  const BanditInstance inst({ArmSpec::constant(1.0), ArmSpec::constant(0.0)}, 2);
  Ucb1Policy policy;
  NullAdversary adv;
  const RunLog log = simulate(inst, policy, adv, 10000, {1, false});
  CHECK(log.rounds.chosen(1, 0) == 0);
  CHECK(log.rounds.chosen(2, 0) == 1);
  for (AgentIndex v = 0; v < 2; ++v) {
    std::size_t wrong = 0;
    for (Round t = 1; t <= 10000; ++t) wrong += log.rounds.chosen(t, v) == 1;
    CHECK(wrong <= 80);
  }
  CHECK(log.comm_total == CommLedger{});
}

TEST_CASE("coop_aae radius") {
  CHECK(aae_radius(8, 2, 3, 0.05) == doctest::Approx(std::sqrt(std::log(2.0 * 9.0 / 0.05) / 16.0)));
}

TEST_CASE("coop_aae eliminates a clearly worse arm early") {
  const BanditInstance inst({ArmSpec::bernoulli(0.9), ArmSpec::bernoulli(0.1)}, 1);
  int early = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    CoopAaePolicy policy(0.05);
    NullAdversary adv;
    simulate(inst, policy, adv, 2000, {seed, true});
    const auto& h = policy.history();
    for (std::size_t p = 0; p < h.size() && p < 8; ++p) {
      if (h[p] == ArmSet{0}) {
        ++early;
        break;
      }
    }
  }
  CHECK(early >= 95);
}

TEST_CASE("coop_aae keeps symmetric arms") {
  const BanditInstance inst({ArmSpec::bernoulli(0.5), ArmSpec::bernoulli(0.5)}, 2);
  int intact = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    CoopAaePolicy policy(0.05);
    NullAdversary adv;
    simulate(inst, policy, adv, 5000, {seed, true});
    intact += policy.state().surviving.size() == 2;
  }
  CHECK(intact >= 95);
}

TEST_CASE("coop_aae loses the optimal arm under a targeted attack") {
  const BanditInstance inst({ArmSpec::bernoulli(0.9), ArmSpec::bernoulli(0.7)}, 2);
  CoopAaePolicy policy(0.05);
  TargetedGapAdversary adv(1e9, 0, 0.4);
  const RunLog log = simulate(inst, policy, adv, 20000, {3, true});
  CHECK(policy.state().surviving == ArmSet{1});
  const std::vector<Round> cp{10000, 20000};
  const auto r = pseudo_regret(log.rounds, inst, cp);
  // Linear growth: the second half alone costs V * 10000 * 0.2.
  CHECK(r[1] - r[0] == doctest::Approx(4000.0).epsilon(1e-9));
}

TEST_CASE("coop_aae surviving sets only shrink and communication follows phases") {
  const BanditInstance inst({ArmSpec::bernoulli(0.9), ArmSpec::bernoulli(0.6), ArmSpec::bernoulli(0.5),
                             ArmSpec::bernoulli(0.3)},
                            2);
  CoopAaePolicy policy(0.05);
  NullAdversary adv;
  const RunLog log = simulate(inst, policy, adv, 5000, {4, true});
  const auto& h = policy.history();
  for (std::size_t p = 1; p < h.size(); ++p) {
    CHECK(std::includes(h[p - 1].begin(), h[p - 1].end(), h[p].begin(), h[p].end()));
  }
  CommLedger expected;
  for (std::size_t p = 0; p < log.epochs.size(); ++p) {
    if (log.epochs[p].truncated) continue;
    expected += CommLedger{4, 2 * 3 * h[p].size()};
  }
  CHECK(log.comm_total == expected);
}

TEST_CASE("all algorithms see identical stochastic rewards for a seed") {
  const BanditInstance inst({ArmSpec::bernoulli(0.6), ArmSpec::bernoulli(0.4), ArmSpec::bernoulli(0.5)}, 2);
  NullAdversary a1, a2, a3;
  Ucb1Policy ucb;
  CoopAaePolicy aae(0.05);
  cbarc::CbarcPolicy cb(0.05, 12);
  const RunLog x = simulate(inst, ucb, a1, 500, {12, false});
  const RunLog y = simulate(inst, aae, a2, 500, {12, false});
  const RunLog z = simulate(inst, cb, a3, 500, {12, false});
  bool same = true;
  for (Round t = 1; t <= 500; ++t) {
    for (AgentIndex v = 0; v < 2; ++v) {
      for (ArmIndex i = 0; i < 3; ++i) {
        same = same && x.rounds.stochastic(t, v, i) == y.rounds.stochastic(t, v, i) &&
               y.rounds.stochastic(t, v, i) == z.rounds.stochastic(t, v, i);
      }
    }
  }
  CHECK(same);
}
