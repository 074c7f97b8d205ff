#include "cobra/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cobra/errors.hpp"

namespace cobra {

std::vector<Round> default_checkpoints(Round horizon) {
  std::vector<Round> out;
  if (horizon == 0) return out;
  const Round base = (horizon + 63) / 64;
  for (Round c = base; c <= horizon; c *= 2) out.push_back(c);
  out.push_back(horizon);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

void check_checkpoints(const RoundLog& log, std::span<const Round> checkpoints) {
  Round prev = 0;
  for (Round c : checkpoints) {
    if (c < 1 || c > log.rounds() || c < prev) throw ShapeMismatch("checkpoints must be ascending within [1, T]");
    prev = c;
  }
}

}  // namespace

std::vector<double> pseudo_regret(const RoundLog& log, const BanditInstance& instance,
                                  std::span<const Round> checkpoints) {
  check_checkpoints(log, checkpoints);
  std::vector<double> out;
  out.reserve(checkpoints.size());
  double total = 0.0;
  Round t = 0;
  for (Round c : checkpoints) {
    for (; t < c; ++t) {
      for (AgentIndex v = 0; v < log.agents(); ++v) total += instance.gap(log.chosen(t + 1, v));
    }
    out.push_back(total);
  }
  return out;
}

std::vector<double> observed_reward_total(const RoundLog& log, std::span<const Round> checkpoints) {
  check_checkpoints(log, checkpoints);
  std::vector<double> out;
  double total = 0.0;
  Round t = 0;
  for (Round c : checkpoints) {
    for (; t < c; ++t) {
      for (AgentIndex v = 0; v < log.agents(); ++v) total += log.observed(t + 1, v);
    }
    out.push_back(total);
  }
  return out;
}

std::vector<double> realized_regret(const RoundLog& log, std::span<const Round> checkpoints) {
  check_checkpoints(log, checkpoints);
  if (log.lean()) return std::vector<double>(checkpoints.size(), std::numeric_limits<double>::quiet_NaN());
  std::vector<double> out;
  std::vector<double> arm_totals(log.arms(), 0.0);
  double observed = 0.0;
  Round t = 0;
  for (Round c : checkpoints) {
    for (; t < c; ++t) {
      for (AgentIndex v = 0; v < log.agents(); ++v) {
        for (ArmIndex i = 0; i < log.arms(); ++i) arm_totals[i] += log.corrupted(t + 1, v, i);
        observed += log.observed(t + 1, v);
      }
    }
    out.push_back(*std::max_element(arm_totals.begin(), arm_totals.end()) - observed);
  }
  return out;
}

CorruptionTotals corruption_totals(const RunLog& log, std::span<const Round> checkpoints) {
  const RoundLog& rounds = log.rounds;
  check_checkpoints(rounds, checkpoints);
  CorruptionTotals out;
  double total = 0.0;
  std::size_t next = 0;
  for (Round t = 1; t <= rounds.rounds(); ++t) {
    for (AgentIndex v = 0; v < rounds.agents(); ++v) total += rounds.corruption(t, v);
    while (next < checkpoints.size() && checkpoints[next] == t) {
      out.at_checkpoints.push_back(total);
      ++next;
    }
  }
  out.total = total;
  if (rounds.lean()) return out;

  for (std::size_t e = 0; e < log.epochs.size(); ++e) {
    const EpochSummary& epoch = log.epochs[e];
    // Which agents held which arm; baselines let every agent pull every arm.
    std::vector<std::vector<char>> holds(rounds.agents(), std::vector<char>(rounds.arms(), 1));
    if (e < log.snapshots.size()) {
      for (const AgentEpochView& view : log.snapshots[e].agents) {
        std::fill(holds[view.agent].begin(), holds[view.agent].end(), 0);
        for (ArmIndex i : view.arms) holds[view.agent][i] = 1;
      }
    }
    std::vector<double> per_arm(rounds.arms(), 0.0);
    for (Round t = epoch.first_round; t <= epoch.last_round && t <= rounds.rounds(); ++t) {
      for (AgentIndex v = 0; v < rounds.agents(); ++v) {
        for (ArmIndex i = 0; i < rounds.arms(); ++i) {
          if (holds[v][i]) per_arm[i] += std::fabs(rounds.corrupted(t, v, i) - rounds.stochastic(t, v, i));
        }
      }
    }
    out.per_epoch.push_back(*std::max_element(per_arm.begin(), per_arm.end()));
  }
  return out;
}

CommSeries comm_cost(const RunLog& log, std::span<const Round> checkpoints) {
  CommSeries out;
  for (Round c : checkpoints) {
    CommLedger sum;
    for (const EpochSummary& e : log.epochs) {
      if (e.last_round <= c) sum += e.comm;
    }
    out.values.push_back(sum.values);
    out.messages.push_back(sum.messages);
  }
  return out;
}

MetricsSeries compute_metrics(const RunLog& log, std::span<const Round> checkpoints) {
  MetricsSeries m;
  m.checkpoints.assign(checkpoints.begin(), checkpoints.end());
  m.pseudo_regret = pseudo_regret(log.rounds, log.instance, checkpoints);
  m.realized_regret = realized_regret(log.rounds, checkpoints);
  CorruptionTotals c = corruption_totals(log, checkpoints);
  m.corruption = std::move(c.at_checkpoints);
  m.epoch_corruption = std::move(c.per_epoch);
  CommSeries comm = comm_cost(log, checkpoints);
  m.comm_values = std::move(comm.values);
  m.comm_messages = std::move(comm.messages);
  for (Round cp : checkpoints) {
    std::size_t idx = 0;
    for (const EpochSummary& e : log.epochs) {
      if (e.first_round <= cp && cp <= e.last_round) idx = e.index;
    }
    m.epoch.push_back(idx);
  }
  return m;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw ShapeMismatch("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

PointStats summarize(std::span<const double> values) {
  if (values.size() < 2) throw ShapeMismatch("summary statistics need at least two values");
  PointStats s;
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double x : values) sum += x;
  s.mean = sum / n;
  double ss = 0.0;
  for (double x : values) ss += (x - s.mean) * (x - s.mean);
  s.std_error = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  std::vector<double> v(values.begin(), values.end());
  s.q10 = quantile(v, 0.1);
  s.median = quantile(v, 0.5);
  s.q90 = quantile(v, 0.9);
  return s;
}

SeedAggregate aggregate_over_seeds(std::span<const MetricsSeries> series) {
  if (series.size() < 2) throw ShapeMismatch("aggregation needs at least two series");
  SeedAggregate out;
  out.seeds = series.size();
  out.checkpoints = series.front().checkpoints;
  for (const MetricsSeries& s : series) {
    if (s.checkpoints != out.checkpoints) throw ShapeMismatch("series have different checkpoint grids");
  }
  auto column = [&](auto member, std::size_t k) {
    std::vector<double> col;
    for (const MetricsSeries& s : series) col.push_back(static_cast<double>((s.*member)[k]));
    return summarize(col);
  };
  for (std::size_t k = 0; k < out.checkpoints.size(); ++k) {
    out.pseudo_regret.push_back(column(&MetricsSeries::pseudo_regret, k));
    out.realized_regret.push_back(column(&MetricsSeries::realized_regret, k));
    out.corruption.push_back(column(&MetricsSeries::corruption, k));
    out.comm_values.push_back(column(&MetricsSeries::comm_values, k));
  }
  return out;
}

}  // namespace cobra
