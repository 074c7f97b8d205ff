#include "cobra/plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "cobra/errors.hpp"
#include "cobra/harness.hpp"

namespace cobra {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::vector<SeriesRow> read_series_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ShapeMismatch(path.string() + ": empty CSV");
  const std::vector<std::string> header = split(line);
  auto column = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw ShapeMismatch(path.string() + ": missing column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t c_seed = column("seed"), c_t = column("t"), c_algo = column("algo"),
                    c_adv = column("adversary"), c_regret = column("regret");
  std::vector<SeriesRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::vector<std::string> cells = split(line);
    if (cells.size() != header.size()) {
      throw ShapeMismatch(path.string() + ":" + std::to_string(line_no) + ": wrong number of columns");
    }
    try {
      rows.push_back({std::stoull(cells[c_seed]), std::stoull(cells[c_t]), cells[c_algo], cells[c_adv],
                      std::stod(cells[c_regret])});
    } catch (const std::exception&) {
      throw ShapeMismatch(path.string() + ":" + std::to_string(line_no) + ": malformed number");
    }
  }
  return rows;
}

std::string render_regret_svg(const std::vector<SeriesRow>& rows) {
  if (rows.empty()) throw ShapeMismatch("no data rows to plot");

  struct Point {
    double t, mean, err;
  };
  // (algo, adversary) -> t -> values across seeds
  std::map<std::pair<std::string, std::string>, std::map<std::uint64_t, std::vector<double>>> groups;
  for (const SeriesRow& r : rows) groups[{r.algo, r.adversary}][r.t].push_back(r.regret);

  std::vector<std::pair<std::string, std::vector<Point>>> curves;
  double t_min = INFINITY, t_max = 0.0, y_max = 0.0;
  for (const auto& [key, by_t] : groups) {
    std::vector<Point> pts;
    for (const auto& [t, values] : by_t) {
      double mean = 0.0;
      for (double v : values) mean += v;
      mean /= static_cast<double>(values.size());
      double err = 0.0;
      if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - mean) * (v - mean);
        err = std::sqrt(ss / static_cast<double>(values.size() - 1)) / std::sqrt(static_cast<double>(values.size()));
      }
      pts.push_back({static_cast<double>(std::max<std::uint64_t>(t, 1)), mean, err});
      t_min = std::min(t_min, pts.back().t);
      t_max = std::max(t_max, pts.back().t);
      y_max = std::max(y_max, mean + err);
    }
    curves.emplace_back(key.first + " / " + key.second, std::move(pts));
  }
  if (y_max <= 0.0) y_max = 1.0;
  double lx0 = std::log10(t_min), lx1 = std::log10(t_max);
  if (lx1 - lx0 < 1e-9) {
    lx0 -= 0.5;
    lx1 += 0.5;
  }

  const double width = 800, height = 500, left = 80, right = 200, top = 30, bottom = 60;
  const double pw = width - left - right, ph = height - top - bottom;
  auto px = [&](double t) { return left + (std::log10(t) - lx0) / (lx1 - lx0) * pw; };
  auto py = [&](double y) { return top + ph - y / (y_max * 1.05) * ph; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<line x1=\"" << left << "\" y1=\"" << top + ph << "\" x2=\"" << left + pw << "\" y2=\"" << top + ph
      << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + ph
      << "\" stroke=\"black\"/>\n";
  for (int d = static_cast<int>(std::ceil(lx0)); d <= static_cast<int>(std::floor(lx1)); ++d) {
    const double x = px(std::pow(10.0, d));
    svg << "<line x1=\"" << num(x) << "\" y1=\"" << top + ph << "\" x2=\"" << num(x) << "\" y2=\"" << top + ph + 5
        << "\" stroke=\"black\"/><text x=\"" << num(x) << "\" y=\"" << top + ph + 18
        << "\" text-anchor=\"middle\">1e" << d << "</text>\n";
  }
  for (int k = 0; k <= 4; ++k) {
    const double y = y_max * k / 4.0;
    svg << "<text x=\"" << left - 6 << "\" y=\"" << num(py(y) + 4) << "\" text-anchor=\"end\">"
        << format_number(std::round(y * 100.0) / 100.0) << "</text>\n";
  }
  svg << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 15 << "\" text-anchor=\"middle\">t (log scale)</text>\n";
  svg << "<text x=\"20\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
      << top + ph / 2 << ")\">R_T</text>\n";

  for (std::size_t c = 0; c < curves.size(); ++c) {
    const auto& [label, pts] = curves[c];
    const char* color = kPalette[c % std::size(kPalette)];
    svg << "<polygon fill=\"" << color << "\" fill-opacity=\"0.2\" stroke=\"none\" points=\"";
    for (const Point& p : pts) svg << num(px(p.t)) << ',' << num(py(p.mean + p.err)) << ' ';
    for (auto it = pts.rbegin(); it != pts.rend(); ++it) svg << num(px(it->t)) << ',' << num(py(std::max(0.0, it->mean - it->err))) << ' ';
    svg << "\"/>\n";
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (const Point& p : pts) svg << num(px(p.t)) << ',' << num(py(p.mean)) << ' ';
    svg << "\"/>\n";
    const double ly = top + 15 + 20.0 * static_cast<double>(c);
    svg << "<line x1=\"" << left + pw + 15 << "\" y1=\"" << ly << "\" x2=\"" << left + pw + 40 << "\" y2=\"" << ly
        << "\" stroke=\"" << color << "\" stroke-width=\"2\"/><text x=\"" << left + pw + 45 << "\" y=\"" << ly + 4
        << "\">" << label << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::filesystem::path plot_files(const std::vector<std::filesystem::path>& csvs, const std::filesystem::path& dir) {
  std::vector<SeriesRow> rows;
  for (const auto& path : csvs) {
    auto part = read_series_csv(path);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  const std::string svg = render_regret_svg(rows);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string());
  const auto out_path = dir / "regret.svg";
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw IoError("cannot write " + out_path.string());
  out << svg;
  return out_path;
}

}  // namespace cobra
