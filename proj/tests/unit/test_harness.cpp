#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "cobra/config.hpp"
#include "cobra/errors.hpp"
#include "cobra/harness.hpp"
#include "cobra/plot.hpp"

using namespace cobra;
namespace fs = std::filesystem;

namespace {

ExperimentConfig small(Algorithm algo, std::size_t seeds) {
  ExperimentConfig c;
  c.agents = 2;
  c.arms = {ArmSpec::bernoulli(0.8), ArmSpec::bernoulli(0.6), ArmSpec::bernoulli(0.5)};
  c.algorithms = {algo};
  c.horizon = 1000;
  c.seeds = seed_range(1, seeds);
  return c;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("cobra_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("null adversary run writes zero corruption") {
  const ExperimentResult r = execute(small(Algorithm::kCbarc, 1));
  const std::string csv = series_csv(r);
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  CHECK(line + "\n" == csv_header());
  int rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    std::stringstream cells(line);
    std::string cell;
    for (int k = 0; k < 7; ++k) std::getline(cells, cell, ',');
    CHECK(cell == "0");
  }
  CHECK(rows == 7);
  CHECK(r.invariants().ok());
}

TEST_CASE("outputs are deterministic across worker counts") {
  ExperimentConfig c = small(Algorithm::kCbarc, 4);
  c.algorithms = {Algorithm::kCbarc, Algorithm::kUcb1, Algorithm::kCoopAae};
  c.adversary.kind = AdversaryKind::kTargeted;
  c.adversary.budget = 50;
  c.workers = 1;
  const std::string one = series_csv(execute(c));
  c.workers = 3;
  const std::string three = series_csv(execute(c));
  CHECK(one == three);
  CHECK(one == series_csv(execute(c)));
}

TEST_CASE("summary covers every checkpoint") {
  const ExperimentResult r = execute(small(Algorithm::kCbarc, 20));
  const nlohmann::json s = summary_json(r);
  REQUIRE(s["algorithms"].size() == 1);
  CHECK(s["algorithms"][0]["checkpoints"].size() == r.config.resolved_checkpoints().size());
  CHECK(s["invariants"]["ok"] == true);
}

TEST_CASE("compare cbarc against itself") {
  ExperimentConfig c = small(Algorithm::kCbarc, 3);
  c.algorithms = {Algorithm::kCbarc, Algorithm::kCbarc};
  const ComparisonReport rep = compare_runs(execute(c));
  for (double d : rep.difference[1]) CHECK(d == 0.0);
  CHECK_THROWS_AS(compare_runs(execute(small(Algorithm::kCbarc, 2))), ConfigError);
}

TEST_CASE("compare with a tiny horizon still reports") {
  ExperimentConfig c = small(Algorithm::kUcb1, 2);
  c.algorithms = {Algorithm::kUcb1, Algorithm::kCbarc};
  c.horizon = 20;
  const ComparisonReport rep = compare_runs(execute(c));
  CHECK(rep.final_regret.size() == 2);
  CHECK(rep.seeds.size() == 2);
}

TEST_CASE("run outputs land on disk") {
  const fs::path dir = scratch("outputs");
  const ExperimentResult r = execute(small(Algorithm::kCbarc, 2));
  write_run_outputs(r, dir);
  CHECK(fs::exists(dir / "series.csv"));
  CHECK(fs::exists(dir / "summary.json"));
  CHECK(parse_config(slurp(dir / "config.yaml")) == r.config);
  fs::remove_all(dir);
}

TEST_CASE("plots") {
  const fs::path dir = scratch("plots");
  fs::create_directories(dir);
  ExperimentConfig c = small(Algorithm::kCbarc, 2);

  SUBCASE("one series gives one polyline with labeled axes") {
    write_run_outputs(execute(c), dir / "a");
    const fs::path svg = plot_files({dir / "a" / "series.csv"}, dir / "plot");
    const std::string text = slurp(svg);
    CHECK(text.find("<svg") != std::string::npos);
    std::size_t lines = 0;
    for (std::size_t p = text.find("<polyline"); p != std::string::npos; p = text.find("<polyline", p + 1)) ++lines;
    CHECK(lines == 1);
    CHECK(text.find("R_T") != std::string::npos);
    CHECK(text.find("t (log scale)") != std::string::npos);
  }
  SUBCASE("two algorithms give two polylines and a legend") {
    c.algorithms = {Algorithm::kCbarc, Algorithm::kUcb1};
    write_run_outputs(execute(c), dir / "b");
    const std::string text = slurp(plot_files({dir / "b" / "series.csv"}, dir / "plot"));
    std::size_t lines = 0;
    for (std::size_t p = text.find("<polyline"); p != std::string::npos; p = text.find("<polyline", p + 1)) ++lines;
    CHECK(lines == 2);
    CHECK(text.find("ucb1") != std::string::npos);
  }
  SUBCASE("empty csv is an error and writes nothing") {
    std::ofstream(dir / "empty.csv").close();
    CHECK_THROWS(plot_files({dir / "empty.csv"}, dir / "none"));
    CHECK_FALSE(fs::exists(dir / "none" / "regret.svg"));
  }
  SUBCASE("header only csv is an error") {
    std::ofstream(dir / "header.csv") << csv_header() << "\n";
    CHECK_THROWS(plot_files({dir / "header.csv"}, dir / "none"));
    CHECK_FALSE(fs::exists(dir / "none" / "regret.svg"));
  }
  SUBCASE("missing csv is an I/O error") {
    CHECK_THROWS_AS(plot_files({dir / "missing.csv"}, dir / "none"), IoError);
  }
  SUBCASE("wrong columns are a shape error") {
    std::ofstream(dir / "bad.csv") << "a,b\n1,2\n";
    CHECK_THROWS_AS(plot_files({dir / "bad.csv"}, dir / "none"), ShapeMismatch);
  }
  fs::remove_all(dir);
}
