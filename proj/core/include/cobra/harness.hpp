#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cobra/config.hpp"
#include "cobra/env.hpp"
#include "cobra/invariants.hpp"
#include "cobra/metrics.hpp"
#include "cobra/run_log.hpp"
#include "cobra/simulate.hpp"

namespace cobra {

std::unique_ptr<Adversary> make_adversary(const AdversarySpec& spec, const BanditInstance& instance, Round horizon,
                                          std::uint64_t seed);
std::unique_ptr<Policy> make_policy(Algorithm algorithm, double delta, std::uint64_t seed);

// One seeded simulation; the same seed gives every algorithm the same rewards.
RunLog run_single(const ExperimentConfig& config, Algorithm algorithm, std::uint64_t seed);

struct RunResult {
  Algorithm algorithm = Algorithm::kCbarc;
  std::uint64_t seed = 0;
  MetricsSeries metrics;
  InvariantReport invariants;
  std::size_t epochs = 0;
  bool any_reactivation = false;
  // cbarc only: the optimal arm is in the active set of the last epoch.
  bool best_arm_active_at_end = false;
  double adversary_spent = 0.0;
  std::uint64_t adversary_agent_rounds = 0;
};

RunResult evaluate_run(const RunLog& log, Algorithm algorithm, const std::vector<Round>& checkpoints);

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<RunResult> runs;  // algorithm-major, seeds in config order

  InvariantReport invariants() const;
  // Runs of the algorithm at this position of config.algorithms.
  std::vector<const RunResult*> runs_at(std::size_t algorithm_index) const;
};

// Fans seeds out over config.workers threads; results are ordered
// deterministically regardless of scheduling.
ExperimentResult execute(const ExperimentConfig& config);

std::string csv_header();
std::string series_csv(const ExperimentResult& result);
nlohmann::json summary_json(const ExperimentResult& result);

// Writes series.csv, summary.json and config.yaml into dir.
void write_run_outputs(const ExperimentResult& result, const std::filesystem::path& dir);

struct ComparisonReport {
  std::vector<Algorithm> algorithms;
  std::vector<std::uint64_t> seeds;
  // final_regret[a][s]: final pseudo-regret of algorithm a on seed s.
  std::vector<std::vector<double>> final_regret;
  // Paired differences against the first algorithm.
  std::vector<std::vector<double>> difference;
  // win_rate[a][b]: fraction of seeds where a had strictly lower regret than b.
  std::vector<std::vector<double>> win_rate;
};

// Throws ConfigError when fewer than two algorithms are configured.
ComparisonReport compare_runs(const ExperimentResult& result);
void write_compare_outputs(const ExperimentResult& result, const ComparisonReport& report,
                           const std::filesystem::path& dir);

std::string format_number(double value);

}  // namespace cobra
