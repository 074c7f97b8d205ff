#include "cobra/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <thread>

#include "cobra/adversaries.hpp"
#include "cobra/baselines.hpp"
#include "cobra/cbarc.hpp"
#include "cobra/errors.hpp"

namespace cobra {

std::unique_ptr<Adversary> make_adversary(const AdversarySpec& spec, const BanditInstance& instance, Round horizon,
                                          std::uint64_t seed) {
  switch (spec.kind) {
    case AdversaryKind::kNull: return std::make_unique<NullAdversary>();
    case AdversaryKind::kFlipMean: return std::make_unique<FlipMeanAdversary>(spec.flip_mean, instance, horizon, seed);
    case AdversaryKind::kTargeted:
      return std::make_unique<TargetedGapAdversary>(spec.budget, spec.target.value_or(instance.best_arm()),
                                                    spec.depress);
  }
  throw ConfigError("unknown adversary kind");
}

std::unique_ptr<Policy> make_policy(Algorithm algorithm, double delta, std::uint64_t seed) {
  switch (algorithm) {
    case Algorithm::kCbarc: return std::make_unique<cbarc::CbarcPolicy>(delta, seed);
    case Algorithm::kUcb1: return std::make_unique<Ucb1Policy>();
    case Algorithm::kCoopAae: return std::make_unique<CoopAaePolicy>(delta);
  }
  throw ConfigError("unknown algorithm");
}

RunLog run_single(const ExperimentConfig& config, Algorithm algorithm, std::uint64_t seed) {
  const BanditInstance instance = config.instance();
  auto adversary = make_adversary(config.adversary, instance, config.horizon, seed);
  auto policy = make_policy(algorithm, config.delta, seed);
  return simulate(instance, *policy, *adversary, config.horizon, {seed, config.lean});
}

RunResult evaluate_run(const RunLog& log, Algorithm algorithm, const std::vector<Round>& checkpoints) {
  RunResult r;
  r.algorithm = algorithm;
  r.seed = log.seed;
  r.metrics = compute_metrics(log, checkpoints);
  r.invariants = check_run_metrics(log, r.metrics);
  r.epochs = log.epochs.size();
  r.adversary_spent = log.adversary_spent;
  r.adversary_agent_rounds = log.adversary_agent_rounds;
  if (algorithm == Algorithm::kCbarc) {
    r.invariants.merge(check_cbarc_snapshots(log));
    for (const EpochSnapshot& s : log.snapshots) r.any_reactivation = r.any_reactivation || !s.reactivated.empty();
    if (!log.snapshots.empty()) {
      const ArmSet& a = log.snapshots.back().active;
      r.best_arm_active_at_end = std::binary_search(a.begin(), a.end(), log.instance.best_arm());
    }
  }
  return r;
}

InvariantReport ExperimentResult::invariants() const {
  InvariantReport all;
  for (const RunResult& r : runs) {
    for (const std::string& v : r.invariants.violations) {
      all.violations.push_back(to_string(r.algorithm) + " seed " + std::to_string(r.seed) + ": " + v);
    }
    all.checks += r.invariants.checks;
  }
  return all;
}

std::vector<const RunResult*> ExperimentResult::runs_at(std::size_t algorithm_index) const {
  const std::size_t n = config.seeds.size();
  std::vector<const RunResult*> out;
  for (std::size_t s = 0; s < n; ++s) out.push_back(&runs.at(algorithm_index * n + s));
  return out;
}

ExperimentResult execute(const ExperimentConfig& config) {
  validate(config);
  struct Job {
    Algorithm algorithm;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (Algorithm a : config.algorithms) {
    for (std::uint64_t s : config.seeds) jobs.push_back({a, s});
  }
  const std::vector<Round> checkpoints = config.resolved_checkpoints();

  ExperimentResult result;
  result.config = config;
  result.runs.resize(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      try {
        const RunLog log = run_single(config, jobs[j].algorithm, jobs[j].seed);
        result.runs[j] = evaluate_run(log, jobs[j].algorithm, checkpoints);
      } catch (...) {
        errors[j] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::min(config.workers, jobs.size());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < threads; ++w) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return result;
}

std::string format_number(double value) {
  if (std::isnan(value)) return "NA";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::string csv_header() {
  return "seed,t,algo,adversary,regret,realized_regret,corruption,comm_values,comm_messages,epoch\n";
}

std::string series_csv(const ExperimentResult& result) {
  std::string out = csv_header();
  const std::string adversary = to_string(result.config.adversary.kind);
  for (const RunResult& r : result.runs) {
    const MetricsSeries& m = r.metrics;
    for (std::size_t k = 0; k < m.checkpoints.size(); ++k) {
      out += std::to_string(r.seed) + ',' + std::to_string(m.checkpoints[k]) + ',' + to_string(r.algorithm) + ',' +
             adversary + ',' + format_number(m.pseudo_regret[k]) + ',' + format_number(m.realized_regret[k]) + ',' +
             format_number(m.corruption[k]) + ',' + std::to_string(m.comm_values[k]) + ',' +
             std::to_string(m.comm_messages[k]) + ',' + std::to_string(m.epoch[k]) + '\n';
    }
  }
  return out;
}

namespace {

nlohmann::json stats_json(const std::vector<double>& values) {
  nlohmann::json j;
  if (values.size() >= 2) {
    const PointStats s = summarize(values);
    j = {{"mean", s.mean}, {"stderr", s.std_error}, {"q10", s.q10}, {"median", s.median}, {"q90", s.q90}};
  } else {
    j = {{"mean", values.front()}, {"stderr", 0.0}, {"q10", values.front()}, {"median", values.front()},
         {"q90", values.front()}};
  }
  for (auto& [key, value] : j.items()) {
    if (value.is_number_float() && std::isnan(value.get<double>())) value = nullptr;
  }
  return j;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

}  // namespace

nlohmann::json summary_json(const ExperimentResult& result) {
  nlohmann::json j;
  j["name"] = result.config.name;
  j["horizon"] = result.config.horizon;
  j["seeds"] = result.config.seeds.size();
  j["adversary"] = to_string(result.config.adversary.kind);
  j["lean"] = result.config.lean;
  j["algorithms"] = nlohmann::json::array();
  for (std::size_t ai = 0; ai < result.config.algorithms.size(); ++ai) {
    const Algorithm a = result.config.algorithms[ai];
    const auto runs = result.runs_at(ai);
    nlohmann::json algo;
    algo["name"] = to_string(a);
    const std::vector<Round>& cps = runs.front()->metrics.checkpoints;
    nlohmann::json points = nlohmann::json::array();
    for (std::size_t k = 0; k < cps.size(); ++k) {
      std::vector<double> regret, realized, corruption, comm;
      for (const RunResult* r : runs) {
        regret.push_back(r->metrics.pseudo_regret[k]);
        realized.push_back(r->metrics.realized_regret[k]);
        corruption.push_back(r->metrics.corruption[k]);
        comm.push_back(static_cast<double>(r->metrics.comm_values[k]));
      }
      points.push_back({{"t", cps[k]},
                        {"regret", stats_json(regret)},
                        {"realized_regret", stats_json(realized)},
                        {"corruption", stats_json(corruption)},
                        {"comm_values", stats_json(comm)}});
    }
    algo["checkpoints"] = points;
    std::size_t reactivated = 0, best_active = 0;
    for (const RunResult* r : runs) {
      reactivated += r->any_reactivation ? 1 : 0;
      best_active += r->best_arm_active_at_end ? 1 : 0;
    }
    if (a == Algorithm::kCbarc) {
      algo["runs_with_reactivation"] = reactivated;
      algo["runs_with_best_arm_active_at_end"] = best_active;
    }
    j["algorithms"].push_back(algo);
  }
  const InvariantReport inv = result.invariants();
  nlohmann::json violations = nlohmann::json::array();
  for (std::size_t k = 0; k < inv.violations.size() && k < 100; ++k) violations.push_back(inv.violations[k]);
  j["invariants"] = {{"checks", inv.checks}, {"violations", inv.violations.size()}, {"ok", inv.ok()},
                     {"first_violations", violations}};
  return j;
}

void write_run_outputs(const ExperimentResult& result, const std::filesystem::path& dir) {
  ensure_dir(dir);
  write_text(dir / "series.csv", series_csv(result));
  write_text(dir / "summary.json", summary_json(result).dump(2) + "\n");
  write_text(dir / "config.yaml", serialize_config(result.config));
}

ComparisonReport compare_runs(const ExperimentResult& result) {
  const auto& algos = result.config.algorithms;
  if (algos.size() < 2) throw ConfigError("compare: at least two algorithms required");
  ComparisonReport rep;
  rep.algorithms = algos;
  rep.seeds = result.config.seeds;
  for (std::size_t ai = 0; ai < algos.size(); ++ai) {
    std::vector<double> finals;
    for (const RunResult* r : result.runs_at(ai)) finals.push_back(r->metrics.pseudo_regret.back());
    rep.final_regret.push_back(std::move(finals));
  }
  for (std::size_t a = 0; a < algos.size(); ++a) {
    std::vector<double> diff;
    for (std::size_t s = 0; s < rep.seeds.size(); ++s) diff.push_back(rep.final_regret[a][s] - rep.final_regret[0][s]);
    rep.difference.push_back(std::move(diff));
    std::vector<double> wins(algos.size(), 0.0);
    for (std::size_t b = 0; b < algos.size(); ++b) {
      std::size_t w = 0;
      for (std::size_t s = 0; s < rep.seeds.size(); ++s) w += rep.final_regret[a][s] < rep.final_regret[b][s] ? 1 : 0;
      wins[b] = static_cast<double>(w) / static_cast<double>(rep.seeds.size());
    }
    rep.win_rate.push_back(std::move(wins));
  }
  return rep;
}

void write_compare_outputs(const ExperimentResult& result, const ComparisonReport& rep,
                           const std::filesystem::path& dir) {
  write_run_outputs(result, dir);
  const std::string ref = to_string(rep.algorithms.front());
  std::string csv = "seed,algo,final_regret,diff_vs_" + ref + "\n";
  for (std::size_t s = 0; s < rep.seeds.size(); ++s) {
    for (std::size_t a = 0; a < rep.algorithms.size(); ++a) {
      csv += std::to_string(rep.seeds[s]) + ',' + to_string(rep.algorithms[a]) + ',' +
             format_number(rep.final_regret[a][s]) + ',' + format_number(rep.difference[a][s]) + '\n';
    }
  }
  write_text(dir / "compare.csv", csv);

  nlohmann::json j;
  j["reference"] = ref;
  j["seeds"] = rep.seeds.size();
  j["algorithms"] = nlohmann::json::array();
  for (std::size_t a = 0; a < rep.algorithms.size(); ++a) {
    nlohmann::json row;
    row["name"] = to_string(rep.algorithms[a]);
    row["median_difference"] = quantile(rep.difference[a], 0.5);
    double mean = 0.0;
    for (double d : rep.difference[a]) mean += d;
    row["mean_difference"] = mean / static_cast<double>(rep.seeds.size());
    row["win_rate"] = rep.win_rate[a];
    j["algorithms"].push_back(row);
  }
  write_text(dir / "compare_summary.json", j.dump(2) + "\n");
}

}  // namespace cobra
