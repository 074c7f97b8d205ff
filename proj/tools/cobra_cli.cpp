// cobra: run, compare and plot corrupted multi-agent bandit experiments.
//
// Exit codes: 0 success, 1 configuration error, 2 invariant violation,
// 3 I/O error.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "cobra/config.hpp"
#include "cobra/errors.hpp"
#include "cobra/harness.hpp"
#include "cobra/plot.hpp"
#include "cobra/selftest.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kInvariantViolation = 2;
constexpr int kIoError = 3;

struct CommonFlags {
  std::string config_path;
  std::optional<std::size_t> seeds;
  std::optional<std::uint64_t> base_seed;
  std::optional<std::string> out;
  std::optional<std::size_t> workers;
  bool lean = false;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_path, "Experiment config (YAML)")->required();
  cmd->add_option("--seeds", f.seeds, "Number of seeds (overrides config)");
  cmd->add_option("--base-seed", f.base_seed, "First seed (overrides config)");
  cmd->add_option("--out", f.out, "Output directory (overrides config)");
  cmd->add_option("--workers", f.workers, "Parallel runs (overrides config)");
  cmd->add_flag("--lean", f.lean, "Keep only played-arm data per round");
}

cobra::ExperimentConfig load(const CommonFlags& f) {
  cobra::ExperimentConfig c = cobra::load_config(f.config_path);
  if (f.seeds || f.base_seed) {
    const std::size_t count = f.seeds.value_or(c.seeds.size());
    const std::uint64_t base = f.base_seed.value_or(c.seeds.empty() ? 1 : c.seeds.front());
    c.seeds = cobra::seed_range(base, count);
  }
  if (f.out) c.output = *f.out;
  if (f.workers) c.workers = *f.workers;
  if (f.lean) c.lean = true;
  cobra::validate(c);
  return c;
}

int finish(const cobra::ExperimentResult& result, const std::filesystem::path& dir) {
  const cobra::InvariantReport inv = result.invariants();
  std::cout << "wrote " << dir.string() << " (" << result.runs.size() << " runs, " << inv.checks
            << " invariant checks)\n";
  if (!inv.ok()) {
    std::cerr << inv.violations.size() << " invariant violations; first: " << inv.violations.front() << "\n";
    return kInvariantViolation;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cooperative multi-agent bandits under adversarial corruption"};
  app.require_subcommand(1);

  CommonFlags run_flags, compare_flags;
  CLI::App* run = app.add_subcommand("run", "Run every configured algorithm over the seeds");
  add_common(run, run_flags);
  CLI::App* compare = app.add_subcommand("compare", "Paired comparison of two or more algorithms");
  add_common(compare, compare_flags);

  std::vector<std::string> csvs;
  std::string plot_out = ".";
  CLI::App* plot = app.add_subcommand("plot", "Render regret curves from run CSVs as SVG");
  plot->add_option("csv", csvs, "series.csv files")->required();
  plot->add_option("--out", plot_out, "Output directory");

  std::uint64_t selftest_seed = 1;
  CLI::App* selftest = app.add_subcommand("selftest", "Run the built-in invariant suites");
  selftest->add_option("--base-seed", selftest_seed, "Seed for the randomized suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kConfigError;
  }

  try {
    if (run->parsed()) {
      const cobra::ExperimentConfig config = load(run_flags);
      const cobra::ExperimentResult result = cobra::execute(config);
      cobra::write_run_outputs(result, config.output);
      return finish(result, config.output);
    }
    if (compare->parsed()) {
      const cobra::ExperimentConfig config = load(compare_flags);
      if (config.algorithms.size() < 2) throw cobra::ConfigError("compare: list at least two algorithms");
      const cobra::ExperimentResult result = cobra::execute(config);
      const cobra::ComparisonReport report = cobra::compare_runs(result);
      cobra::write_compare_outputs(result, report, config.output);
      for (std::size_t a = 0; a < report.algorithms.size(); ++a) {
        std::cout << cobra::to_string(report.algorithms[a]) << ": median diff vs "
                  << cobra::to_string(report.algorithms.front()) << " = "
                  << cobra::format_number(cobra::quantile(report.difference[a], 0.5)) << "\n";
      }
      return finish(result, config.output);
    }
    if (plot->parsed()) {
      std::vector<std::filesystem::path> paths(csvs.begin(), csvs.end());
      std::cout << "wrote " << cobra::plot_files(paths, plot_out).string() << "\n";
      return kOk;
    }
    if (selftest->parsed()) {
      return cobra::run_selftest(std::cout, selftest_seed).ok() ? kOk : kInvariantViolation;
    }
  } catch (const cobra::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const cobra::ShapeMismatch& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kConfigError;
  } catch (const cobra::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIoError;
  } catch (const cobra::InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return kInvariantViolation;
  } catch (const cobra::AdversaryRangeViolation& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return kInvariantViolation;
  }
  return kOk;
}
