#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cobra/env.hpp"
#include "cobra/instance.hpp"
#include "cobra/run_log.hpp"

namespace cobra {

// {ceil(T/64) * 2^k} within [1, T], plus T; sorted and unique.
std::vector<Round> default_checkpoints(Round horizon);

// Sum over rounds <= checkpoint and agents of (best mean - mean of pulled arm).
std::vector<double> pseudo_regret(const RoundLog& log, const BanditInstance& instance,
                                  std::span<const Round> checkpoints);

// Best single arm in hindsight on corrupted rewards minus the observed total.
// In lean mode the max-arm term is unavailable and every entry is NaN.
std::vector<double> realized_regret(const RoundLog& log, std::span<const Round> checkpoints);

// Observed reward total up to each checkpoint (the played-arm term).
std::vector<double> observed_reward_total(const RoundLog& log, std::span<const Round> checkpoints);

struct CorruptionTotals {
  double total = 0.0;
  std::vector<double> at_checkpoints;
  // Per-epoch max over arms of the summed absolute corruption, counting only
  // agents that held the arm. Empty in lean mode.
  std::vector<double> per_epoch;
};

CorruptionTotals corruption_totals(const RunLog& log, std::span<const Round> checkpoints);

struct CommSeries {
  std::vector<std::uint64_t> values;
  std::vector<std::uint64_t> messages;
};

// Messages are charged at the last round of the epoch that sent them.
CommSeries comm_cost(const RunLog& log, std::span<const Round> checkpoints);

struct MetricsSeries {
  std::vector<Round> checkpoints;
  std::vector<double> pseudo_regret;
  std::vector<double> realized_regret;
  std::vector<double> corruption;
  std::vector<std::uint64_t> comm_values;
  std::vector<std::uint64_t> comm_messages;
  std::vector<std::size_t> epoch;  // epoch (or phase) containing the checkpoint
  std::vector<double> epoch_corruption;
};

MetricsSeries compute_metrics(const RunLog& log, std::span<const Round> checkpoints);

struct PointStats {
  double mean = 0.0;
  double std_error = 0.0;
  double q10 = 0.0;
  double median = 0.0;
  double q90 = 0.0;
};

// Linear interpolation between order statistics (R type 7).
double quantile(std::vector<double> values, double q);
// Sample mean and standard error (n-1 denominator); needs at least two values.
PointStats summarize(std::span<const double> values);

struct SeedAggregate {
  std::size_t seeds = 0;
  std::vector<Round> checkpoints;
  std::vector<PointStats> pseudo_regret;
  // Seed mean of the realized regret estimates the expected-reward regret.
  std::vector<PointStats> realized_regret;
  std::vector<PointStats> corruption;
  std::vector<PointStats> comm_values;
};

// Throws ShapeMismatch on fewer than two series or unequal checkpoint grids.
SeedAggregate aggregate_over_seeds(std::span<const MetricsSeries> series);

}  // namespace cobra
