// Acceptance suite: one PASS/FAIL line per criterion, tolerances pinned here.
// Exit status is nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cobra/adversaries.hpp"
#include "cobra/cbarc.hpp"
#include "cobra/config.hpp"
#include "cobra/errors.hpp"
#include "cobra/harness.hpp"
#include "cobra/metrics.hpp"
#include "scripted.hpp"

using namespace cobra;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

struct Verdict {
  bool pass = true;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double x, int digits = 4) {
  std::ostringstream os;
  os.precision(digits);
  os << x;
  return os.str();
}

std::size_t workers() { return std::max<std::size_t>(1, std::thread::hardware_concurrency()); }

// Adds a sub-check to a verdict, e.g. "(a) pass 1/20 <= 0.147".
void part(Verdict& v, const std::string& label, bool ok, const std::string& what) {
  v.pass = v.pass && ok;
  if (!v.detail.empty()) v.detail += "; ";
  v.detail += label + " " + (ok ? "pass" : "FAIL") + " " + what;
}

void runtime(Verdict& v, Clock::time_point start, double limit) {
  const double s = seconds_since(start);
  part(v, "time", s < limit, fmt(s, 3) + "s < " + fmt(limit) + "s");
}

// ---------------------------------------------------------------------------
// 1. Pull distributions over random leader trajectories.

Verdict probability_structure() {
  const auto start = Clock::now();
  constexpr int kConfigs = 50;
  constexpr int kEpochs = 5;
  constexpr double kSumTol = 1e-9;
  constexpr double kBadMass = 0.25 + 1e-9;

  std::mt19937_64 g(20240601);
  auto unit = [&] { return std::uniform_real_distribution<double>(0.0, 1.0)(g); };
  std::size_t views = 0, violations = 0, with_bad = 0;
  double worst_sum = 0.0, worst_bad = 0.0;

  for (int c = 0; c < kConfigs; ++c) {
    const std::size_t k = 2 + std::uniform_int_distribution<std::size_t>(0, 14)(g);
    const std::size_t v = 1 + std::uniform_int_distribution<std::size_t>(0, k - 1)(g);
    std::vector<double> mu(k);
    for (double& m : mu) m = unit();
    Engine alloc_rng = make_stream(static_cast<std::uint64_t>(c), StreamPurpose::kAlgorithm);
    cbarc::LeaderState state = cbarc::LeaderState::initial(k, uniform_index(alloc_rng, k));

    for (int e = 0; e <= kEpochs; ++e) {
      const cbarc::Allocation a = cbarc::allocate_arms(k, v, state.empirical_best, alloc_rng);
      for (const ArmSet& arms : a.arm_sets) {
        ++views;
        std::vector<double> p;
        try {
          p = cbarc::pull_probabilities(arms, state.active, state.epsilon, state.arm_epsilon, a.arms_per_agent);
        } catch (const InvariantViolation&) {
          ++violations;
          continue;
        }
        double total = 0.0, bad = 0.0;
        for (std::size_t j = 0; j < arms.size(); ++j) {
          total += p[j];
          if (std::binary_search(state.bad.begin(), state.bad.end(), arms[j])) bad += p[j];
        }
        if (bad > 0.0) ++with_bad;
        worst_sum = std::max(worst_sum, std::fabs(total - 1.0));
        worst_bad = std::max(worst_bad, bad);
        if (std::fabs(total - 1.0) > kSumTol || bad > kBadMass) ++violations;
      }
      if (e == kEpochs) break;
      // Estimates near the true means, with occasional large shocks so that
      // both deactivation and reactivation occur.
      std::vector<double> est(k);
      for (std::size_t i = 0; i < k; ++i) {
        est[i] = mu[i] + (2.0 * unit() - 1.0) * state.epsilon;
        if (unit() < 0.15) est[i] += (2.0 * unit() - 1.0) * 0.5;
      }
      cbarc::end_epoch(state, est);
    }
  }
  Verdict out;
  part(out, "sum", worst_sum <= kSumTol, "max |sum p - 1| = " + fmt(worst_sum) + " <= 1e-9");
  part(out, "bad mass", worst_bad <= kBadMass, "max = " + fmt(worst_bad) + " <= 0.25 + 1e-9");
  part(out, "violations", violations == 0,
       std::to_string(violations) + " over " + std::to_string(views) + " agent-epochs (" +
           std::to_string(with_bad) + " with bad arms)");
  runtime(out, start, 10.0);
  return out;
}

// ---------------------------------------------------------------------------
// 2. Error ladder and arm sets on every snapshot of full runs.

struct LadderCase {
  std::vector<ArmSpec> arms;
  std::size_t agents;
  Round horizon;
  double budget;  // targeted attack on the best arm; 0 means none
};

Verdict error_ladder() {
  const auto start = Clock::now();
  const std::vector<LadderCase> cases{
      {{ArmSpec::constant(1.0), ArmSpec::constant(0.0), ArmSpec::bernoulli(0.1), ArmSpec::bernoulli(0.5)},
       2, 400000, 0.0},
      {{ArmSpec::bernoulli(0.9), ArmSpec::bernoulli(0.8), ArmSpec::bernoulli(0.5), ArmSpec::constant(0.2),
        ArmSpec::constant(0.0), ArmSpec::bernoulli(0.6)},
       3, 400000, 4000.0},
      {{ArmSpec::constant(1.0), ArmSpec::constant(0.5), ArmSpec::constant(0.0)}, 1, 200000, 0.0},
      {{ArmSpec::bernoulli(0.95), ArmSpec::constant(0.1), ArmSpec::bernoulli(0.3), ArmSpec::constant(0.6),
        ArmSpec::bernoulli(0.05)},
       5, 400000, 20000.0},
  };
  constexpr int kRuns = 20;

  std::size_t snapshots = 0, checks = 0, failures = 0, bad_seen = 0, reactivations = 0;
  std::string first;
  auto expect = [&](bool ok, const std::string& what) {
    ++checks;
    if (!ok && failures++ == 0) first = what;
  };
  for (int r = 0; r < kRuns; ++r) {
    const LadderCase& c = cases[static_cast<std::size_t>(r) % cases.size()];
    const BanditInstance inst(c.arms, c.agents);
    const auto seed = static_cast<std::uint64_t>(100 + r);
    NullAdversary null_adv;
    TargetedGapAdversary attack(c.budget, inst.best_arm(), 0.4);
    Adversary& adv = c.budget > 0.0 ? static_cast<Adversary&>(attack) : null_adv;
    const RunLog log = cbarc::run_cbarc(inst, adv, c.horizon, 0.05, seed, true);
    const std::size_t k = inst.num_arms();

    for (std::size_t s = 0; s < log.snapshots.size(); ++s) {
      const EpochSnapshot& snap = log.snapshots[s];
      const std::string where = "run " + std::to_string(r) + " epoch " + std::to_string(snap.epoch);
      ++snapshots;
      if (!snap.bad.empty()) ++bad_seen;
      if (!snap.reactivated.empty()) ++reactivations;

      std::vector<int> owner(k, 0);
      for (ArmIndex i : snap.active) owner[i] += 1;
      for (ArmIndex i : snap.bad) owner[i] += 2;
      for (std::size_t i = 0; i < k; ++i) expect(owner[i] == 1 || owner[i] == 2, where + ": partition");

      const double eps = std::pow(2.0, 1.0 - static_cast<double>(snap.epoch)) / 14.0;
      expect(snap.epsilon == eps, where + ": epsilon");
      for (std::size_t i = 0; i < k; ++i) expect(eps <= snap.arm_epsilon[i], where + ": eps <= eps_i");
      for (ArmIndex i : snap.bad) {
        const double at_d = std::pow(2.0, 1.0 - static_cast<double>(snap.last_good_epoch[i])) / 14.0;
        expect(snap.arm_epsilon[i] == at_d, where + ": bad eps_i = eps(d_i)");
      }
      if (snap.selected_best && s + 1 < log.snapshots.size()) {
        const ArmSet& next = log.snapshots[s + 1].active;
        expect(std::binary_search(next.begin(), next.end(), *snap.selected_best), where + ": best stays active");
      }
    }
  }
  Verdict out;
  part(out, "checks", failures == 0,
       std::to_string(checks - failures) + "/" + std::to_string(checks) + " over " + std::to_string(snapshots) +
           " snapshots (" + std::to_string(bad_seen) + " with bad arms, " + std::to_string(reactivations) +
           " with reactivation)" + (first.empty() ? "" : ", first failure: " + first));
  runtime(out, start, 30.0);
  return out;
}

// ---------------------------------------------------------------------------
// 3-5. The eight-arm instance, with and without a targeted attack.

constexpr std::size_t kAgents = 4;
constexpr Round kHorizon = 200000;
constexpr double kDelta = 0.05;
constexpr std::size_t kSeeds = 20;

ExperimentConfig eight_arm(std::vector<Algorithm> algorithms) {
  ExperimentConfig c;
  c.name = "eight_arm";
  c.agents = kAgents;
  c.arms = {ArmSpec::bernoulli(0.9)};
  for (int k = 0; k < 7; ++k) c.arms.push_back(ArmSpec::bernoulli(0.7));
  c.algorithms = std::move(algorithms);
  c.horizon = kHorizon;
  c.delta = kDelta;
  c.seeds = seed_range(1, kSeeds);
  c.checkpoints = {kHorizon / 2, kHorizon};
  c.lean = true;
  c.workers = workers();
  return c;
}

Verdict stochastic_behavior(const ExperimentResult& null_runs, double elapsed) {
  const auto runs = null_runs.runs_at(0);
  const double n = static_cast<double>(runs.size());
  const double reactivation_limit = 0.05 + 2.0 * std::sqrt(0.05 * 0.95 / 20.0);
  const double min_gap = null_runs.config.instance().min_gap();
  const double regret_cap = 0.02 * double(kAgents) * double(kHorizon) * min_gap;

  std::size_t reactivated = 0, best_active = 0, concave = 0, under_cap = 0;
  double worst = 0.0;
  for (const RunResult* r : runs) {
    reactivated += r->any_reactivation;
    best_active += r->best_arm_active_at_end;
    const double half = r->metrics.pseudo_regret[0];
    const double full = r->metrics.pseudo_regret[1];
    concave += full - half <= half;
    under_cap += full <= regret_cap;
    worst = std::max(worst, full);
  }
  Verdict out;
  part(out, "(a)", double(reactivated) / n <= reactivation_limit,
       std::to_string(reactivated) + "/20 runs with reactivation, rate <= " + fmt(reactivation_limit));
  part(out, "(b)", best_active >= 17, "best arm active at end in " + std::to_string(best_active) + "/20 >= 17");
  part(out, "(c)", concave >= 17, "R(T) - R(T/2) <= R(T/2) in " + std::to_string(concave) + "/20 >= 17");
  part(out, "(d)", under_cap == runs.size(),
       "R(T) <= " + fmt(regret_cap) + " in " + std::to_string(under_cap) + "/20, max R(T) = " + fmt(worst));
  part(out, "time", elapsed < 120.0, fmt(elapsed, 3) + "s < 120s");
  return out;
}

Verdict communication_bound(const ExperimentResult& null_runs) {
  const double log4t = std::log(double(kHorizon)) / std::log(4.0);
  const std::size_t k_tilde = (8 + kAgents - 1) / kAgents + 1;
  const double value_cap = double(kAgents * (5 * k_tilde + 1)) * (log4t + 2.0);
  std::size_t ok_values = 0, ok_epochs = 0;
  std::uint64_t max_values = 0;
  std::size_t max_epochs = 0;
  for (const RunResult* r : null_runs.runs_at(0)) {
    const std::uint64_t values = r->metrics.comm_values.back();
    ok_values += double(values) <= value_cap;
    ok_epochs += double(r->epochs) <= log4t + 2.0;
    max_values = std::max(max_values, values);
    max_epochs = std::max(max_epochs, r->epochs);
  }
  Verdict out;
  part(out, "values", ok_values == kSeeds,
       "max " + std::to_string(max_values) + " <= " + fmt(value_cap, 6) + " in " + std::to_string(ok_values) + "/20");
  part(out, "epochs", ok_epochs == kSeeds,
       "max " + std::to_string(max_epochs) + " <= " + fmt(log4t + 2.0) + " in " + std::to_string(ok_epochs) + "/20");
  return out;
}

Verdict robustness(const ExperimentResult& null_runs) {
  const auto start = Clock::now();
  ExperimentConfig c = eight_arm({Algorithm::kCbarc, Algorithm::kCoopAae});
  c.name = "targeted";
  c.checkpoints = {kHorizon};
  c.adversary.kind = AdversaryKind::kTargeted;
  c.adversary.budget = 2000.0;
  c.adversary.depress = 0.4;
  const ExperimentResult attacked = execute(c);

  double null_mean = 0.0;
  for (const RunResult* r : null_runs.runs_at(0)) null_mean += r->metrics.pseudo_regret.back();
  null_mean /= double(kSeeds);

  const auto cb = attacked.runs_at(0);
  const auto aae = attacked.runs_at(1);
  std::size_t worse = 0, five_x = 0, bounded = 0;
  std::vector<double> ratios;
  double mean_c = 0.0;
  for (std::size_t s = 0; s < kSeeds; ++s) {
    const double rc = cb[s]->metrics.pseudo_regret.back();
    const double ra = aae[s]->metrics.pseudo_regret.back();
    const double corruption = cb[s]->metrics.corruption.back();
    mean_c += corruption / double(kSeeds);
    worse += ra > rc;
    five_x += ra >= 5.0 * rc;
    ratios.push_back(ra / rc);
    bounded += rc <= 4.0 * double(kAgents) * corruption + 5.0 * null_mean;
  }
  std::sort(ratios.begin(), ratios.end());
  Verdict out;
  part(out, "(a)", worse >= 16, "coop_aae worse in " + std::to_string(worse) + "/20 >= 16");
  part(out, "(b)", five_x >= 12,
       "coop_aae >= 5x cbarc in " + std::to_string(five_x) + "/20 >= 12 (ratio median " +
           fmt(quantile(ratios, 0.5)) + ", max " + fmt(ratios.back()) + ")");
  part(out, "(c)", bounded >= 17,
       "cbarc R <= 4VC + 5 x null mean (" + fmt(null_mean) + ") in " + std::to_string(bounded) +
           "/20 >= 17, mean C = " + fmt(mean_c));
  runtime(out, start, 240.0);
  return out;
}

// ---------------------------------------------------------------------------
// 6. Two-armed flip-mean construction.

Verdict lower_bound() {
  const auto start = Clock::now();
  constexpr double kGap = 0.3;
  constexpr Round kT = 100000;
  constexpr std::size_t kV = 2;
  ExperimentConfig c;
  c.name = "lower_bound";
  c.agents = kV;
  c.arms = {ArmSpec::bernoulli(0.5 - kGap), ArmSpec::constant(0.5)};
  c.horizon = kT;
  c.delta = kDelta;
  c.seeds = seed_range(1, 50);
  c.checkpoints = {kT};
  c.adversary.kind = AdversaryKind::kFlipMean;
  c.adversary.flip_mean = FlipMeanConfig{kGap, 0.5, 1.0, 1};
  c.workers = workers();
  const ExperimentResult res = execute(c);

  const double slack = 3.0 * std::sqrt(2.0 * double(kV) * double(kT) * std::log(double(kV) * double(kT)));
  std::size_t hits = 0;
  double total_c = 0.0, agent_rounds = 0.0, min_margin = INFINITY;
  for (const RunResult* r : res.runs_at(0)) {
    const double corruption = r->metrics.corruption.back();
    const double margin = r->metrics.realized_regret.back() - (kGap * corruption - slack);
    hits += margin >= 0.0;
    min_margin = std::min(min_margin, margin);
    total_c += corruption;
    agent_rounds += double(r->adversary_agent_rounds);
  }
  const double expected = 2.0 * kGap * agent_rounds;
  const double rel = std::fabs(total_c - expected) / expected;
  Verdict out;
  part(out, "regret", hits >= 5,
       "R'_T >= gap*C - 3 sqrt(2VT ln VT) in " + std::to_string(hits) + "/50 >= 5 (min margin " + fmt(min_margin) +
           ")");
  part(out, "C", rel <= 0.20,
       "total C " + fmt(total_c, 6) + " vs 2*gap*agent-rounds " + fmt(expected, 6) + ", rel. error " + fmt(rel) +
           " <= 0.2");
  runtime(out, start, 180.0);
  return out;
}

// ---------------------------------------------------------------------------
// 7. Metrics against the brute-force evaluator; leader rules on hand tables.

Verdict oracle_equivalence() {
  const auto start = Clock::now();
  std::size_t compared = 0, mismatched = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const testing::Script s = testing::random_script(seed, 10);
    const RunLog log = testing::replay(s);
    std::vector<Round> cp;
    for (Round t = 1; t <= s.rounds(); ++t) cp.push_back(t);
    const MetricsSeries m = compute_metrics(log, cp);
    for (std::size_t k = 0; k < cp.size(); ++k) {
      const testing::OracleValues o = testing::brute_force(s, cp[k]);
      compared += 3;
      mismatched += m.pseudo_regret[k] != o.pseudo_regret;
      mismatched += m.realized_regret[k] != o.realized_regret;
      mismatched += m.corruption[k] != o.corruption;
    }
  }

  std::size_t rules = 0, rule_failures = 0;
  auto rule = [&](bool ok) {
    ++rules;
    rule_failures += !ok;
  };
  const std::vector<std::size_t> d{2, 2, 2, 2};
  rule(cbarc::reactivate({0, 1, 2}, {3}, std::vector<double>{0.8, 0.5, 0.1, 0.75}, d) == ArmSet{3});
  rule(cbarc::reactivate({0, 1, 2}, {3}, std::vector<double>{0.8, 0.5, 0.1, 0.6}, d).empty());
  rule(cbarc::reactivate({0, 1, 2, 3}, {}, std::vector<double>{0.8, 0.5, 0.1, 0.6}, d).empty());

  const std::vector<double> eps{1.0 / 14.0, 1.0 / 56.0};
  rule(cbarc::select_empirical_best({0, 1}, std::vector<double>{0.8, 0.9}, eps).arm == 0);
  rule(cbarc::select_empirical_best({1}, std::vector<double>{0.8, 0.9}, eps).arm == 1);
  const std::vector<double> flat{0.25, 0.25};
  rule(cbarc::select_empirical_best({0, 1}, std::vector<double>{0.5, 0.5}, flat).arm == 0);

  const double e28 = 1.0 / 28.0;
  const std::vector<double> est{0.9 - 2.0 * e28, 0.35, 0.45};
  const cbarc::Deactivation dz = cbarc::deactivate({0, 1, 2}, {}, {}, {0, 0.9}, est, e28);
  rule(dz.deactivated == ArmSet{1});
  rule(dz.next_active == ArmSet{0, 2});
  rule(dz.next_bad == ArmSet{1});
  rule(!dz.best_exempted);

  Verdict out;
  part(out, "metrics", mismatched == 0,
       std::to_string(compared - mismatched) + "/" + std::to_string(compared) + " exact matches on 10 logs");
  part(out, "leader rules", rule_failures == 0,
       std::to_string(rules - rule_failures) + "/" + std::to_string(rules) + " hand-traced tables");
  runtime(out, start, 5.0);
  return out;
}

// ---------------------------------------------------------------------------
// 8. Byte-identical outputs across repeated runs and worker counts.

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Verdict determinism() {
  const auto start = Clock::now();
  const fs::path root = fs::temp_directory_path() / "cobra_acceptance_determinism";
  fs::remove_all(root);

  ExperimentConfig targeted = eight_arm({Algorithm::kCbarc, Algorithm::kUcb1, Algorithm::kCoopAae});
  targeted.horizon = 30000;
  targeted.checkpoints.clear();
  targeted.seeds = seed_range(7, 4);
  targeted.lean = false;
  targeted.adversary.kind = AdversaryKind::kTargeted;
  targeted.adversary.budget = 300.0;

  ExperimentConfig flip;
  flip.agents = 2;
  flip.arms = {ArmSpec::bernoulli(0.2), ArmSpec::constant(0.5)};
  flip.algorithms = {Algorithm::kCbarc, Algorithm::kUcb1};
  flip.horizon = 20000;
  flip.seeds = {3, 5, 8};
  flip.adversary.kind = AdversaryKind::kFlipMean;

  std::size_t compared = 0, differing = 0;
  for (ExperimentConfig* c : {&targeted, &flip}) {
    std::vector<std::string> csvs;
    for (std::size_t w : {std::size_t{1}, std::size_t{4}, std::size_t{4}}) {
      c->workers = w;
      const fs::path dir = root / (c->name + "_" + std::to_string(csvs.size()));
      write_run_outputs(execute(*c), dir);
      csvs.push_back(slurp(dir / "series.csv"));
      csvs.push_back(slurp(dir / "summary.json"));
    }
    for (std::size_t k = 2; k < csvs.size(); ++k) {
      ++compared;
      differing += csvs[k] != csvs[k % 2];
    }
  }
  fs::remove_all(root);
  Verdict out;
  part(out, "bytes", differing == 0,
       std::to_string(compared - differing) + "/" + std::to_string(compared) +
           " repeated outputs identical (workers 1 vs 4 vs 4)");
  runtime(out, start, 60.0);
  return out;
}

}  // namespace

int main() {
  int failed = 0;
  auto report = [&](const std::string& id, const std::string& name, const Verdict& v) {
    std::cout << (v.pass ? "PASS " : "FAIL ") << id << " " << name << ": " << v.detail << std::endl;
    failed += v.pass ? 0 : 1;
  };
  auto guarded = [&](const std::string& id, const std::string& name, const std::function<Verdict()>& f) {
    try {
      report(id, name, f());
    } catch (const std::exception& e) {
      report(id, name, Verdict{false, std::string("exception: ") + e.what()});
    }
  };

  guarded("1", "probability structure", probability_structure);
  guarded("2", "error ladder and arm sets", error_ladder);

  const auto start = Clock::now();
  ExperimentResult null_runs;
  bool have_null = false;
  try {
    null_runs = execute(eight_arm({Algorithm::kCbarc}));
    have_null = true;
  } catch (const std::exception& e) {
    std::cout << "eight-arm null runs failed: " << e.what() << std::endl;
  }
  const double elapsed = seconds_since(start);
  if (have_null) {
    guarded("3", "stochastic behavior", [&] { return stochastic_behavior(null_runs, elapsed); });
    guarded("4", "communication bound", [&] { return communication_bound(null_runs); });
    guarded("5", "robustness vs fragility", [&] { return robustness(null_runs); });
  } else {
    for (const char* id : {"3", "4", "5"}) report(id, "eight-arm instance", Verdict{false, "no null runs"});
  }
  guarded("6", "lower-bound adversary", lower_bound);
  guarded("7", "oracle equivalence", oracle_equivalence);
  guarded("8", "determinism", determinism);

  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
  return failed == 0 ? 0 : 1;
}
