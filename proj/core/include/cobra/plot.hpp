#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace cobra {

struct SeriesRow {
  std::uint64_t seed = 0;
  std::uint64_t t = 0;
  std::string algo;
  std::string adversary;
  double regret = 0.0;
};

// Parses the run CSV schema; throws IoError when unreadable and ShapeMismatch
// on a missing header column or a malformed row.
std::vector<SeriesRow> read_series_csv(const std::filesystem::path& path);

// Regret-vs-round SVG on a log-scaled round axis: one polyline per
// (algo, adversary) pair with a shaded +-1 standard error band. Throws
// ShapeMismatch on empty input.
std::string render_regret_svg(const std::vector<SeriesRow>& rows);

// Reads every CSV, renders one combined plot, writes dir/regret.svg and
// returns its path. Nothing is written on error.
std::filesystem::path plot_files(const std::vector<std::filesystem::path>& csvs, const std::filesystem::path& dir);

}  // namespace cobra
