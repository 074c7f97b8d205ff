#include "cobra/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "cobra/errors.hpp"

namespace cobra {

ArmIndex ucb1_choice(std::span<const std::uint64_t> counts, std::span<const double> sums, Round t) {
  for (ArmIndex i = 0; i < counts.size(); ++i) {
    if (counts[i] == 0) return i;
  }
  const double log_t = std::log(static_cast<double>(t));
  ArmIndex best = 0;
  double best_index = -std::numeric_limits<double>::infinity();
  for (ArmIndex i = 0; i < counts.size(); ++i) {
    const double n = static_cast<double>(counts[i]);
    const double index = sums[i] / n + std::sqrt(2.0 * log_t / n);
    if (index > best_index) {
      best_index = index;
      best = i;
    }
  }
  return best;
}

void Ucb1Policy::start(const BanditInstance& instance, Round horizon) {
  horizon_ = horizon;
  agents_.assign(instance.num_agents(), UcbAgentState{std::vector<std::uint64_t>(instance.num_arms(), 0),
                                                       std::vector<double>(instance.num_arms(), 0.0), 0});
}

std::vector<ArmIndex> Ucb1Policy::choose(Round t) {
  std::vector<ArmIndex> out(agents_.size());
  for (AgentIndex v = 0; v < agents_.size(); ++v) out[v] = ucb1_choice(agents_[v].counts, agents_[v].sums, t);
  return out;
}

void Ucb1Policy::observe(Round, std::span<const ArmIndex> chosen, std::span<const double> observed) {
  for (AgentIndex v = 0; v < agents_.size(); ++v) {
    ++agents_[v].counts[chosen[v]];
    agents_[v].sums[chosen[v]] += observed[v];
    ++agents_[v].rounds;
  }
}

void Ucb1Policy::finish(RunLog& log) {
  log.epochs = {EpochSummary{1, 1, horizon_, false, {}}};
  log.snapshots.clear();
  log.comm_total = {};
}

double aae_radius(std::uint64_t pooled_count, std::size_t num_arms, std::size_t phase, double delta) {
  const double p = static_cast<double>(phase);
  return std::sqrt(std::log(static_cast<double>(num_arms) * p * p / delta) / (2.0 * static_cast<double>(pooled_count)));
}

ArmSet aae_eliminate(const CoopAaeState& state, std::size_t num_arms, double delta) {
  double best_lower = -std::numeric_limits<double>::infinity();
  for (ArmIndex i : state.surviving) {
    if (state.counts[i] == 0) return state.surviving;
    const double mean = state.sums[i] / static_cast<double>(state.counts[i]);
    best_lower = std::max(best_lower, mean - aae_radius(state.counts[i], num_arms, state.phase, delta));
  }
  ArmSet kept;
  for (ArmIndex i : state.surviving) {
    const double mean = state.sums[i] / static_cast<double>(state.counts[i]);
    if (mean + aae_radius(state.counts[i], num_arms, state.phase, delta) >= best_lower) kept.push_back(i);
  }
  if (kept.empty()) throw InvariantViolation("coop_aae: surviving set became empty");
  return kept;
}

CoopAaePolicy::CoopAaePolicy(double delta) : delta_(delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("coop_aae: delta must lie in (0, 1)");
}

void CoopAaePolicy::start(const BanditInstance& instance, Round horizon) {
  num_arms_ = instance.num_arms();
  num_agents_ = instance.num_agents();
  horizon_ = horizon;
  state_ = CoopAaeState{};
  state_.surviving.resize(num_arms_);
  std::iota(state_.surviving.begin(), state_.surviving.end(), ArmIndex{0});
  state_.counts.assign(num_arms_, 0);
  state_.sums.assign(num_arms_, 0.0);
  phases_.clear();
  surviving_history_.clear();
  begin_phase(1);
}

void CoopAaePolicy::begin_phase(Round first_round) {
  const Round sweep = (state_.surviving.size() + num_agents_ - 1) / num_agents_;
  const Round length = sweep << (state_.phase - 1);
  state_.phase_first_round = first_round;
  state_.phase_last_round = first_round + length - 1;
  surviving_history_.push_back(state_.surviving);
}

std::vector<ArmIndex> CoopAaePolicy::choose(Round t) {
  const std::size_t s = state_.surviving.size();
  const Round offset = t - state_.phase_first_round;
  std::vector<ArmIndex> out(num_agents_);
  for (AgentIndex v = 0; v < num_agents_; ++v) {
    out[v] = state_.surviving[static_cast<std::size_t>((offset * num_agents_ + v) % s)];
  }
  return out;
}

void CoopAaePolicy::observe(Round t, std::span<const ArmIndex> chosen, std::span<const double> observed) {
  for (AgentIndex v = 0; v < num_agents_; ++v) {
    ++state_.counts[chosen[v]];
    state_.sums[chosen[v]] += observed[v];
  }
  if (t != state_.phase_last_round) return;

  CommLedger comm;
  if (num_agents_ > 1) {
    // Every agent reports counts and sums for the survivors; the leader
    // broadcasts the new surviving set.
    comm = {2 * num_agents_, num_agents_ * 3 * state_.surviving.size()};
  }
  state_.surviving = aae_eliminate(state_, num_arms_, delta_);
  phases_.push_back({state_.phase, state_.phase_first_round, t, false, comm});
  ++state_.phase;
  if (t < horizon_) begin_phase(t + 1);
}

void CoopAaePolicy::finish(RunLog& log) {
  if (state_.phase_first_round <= horizon_ && (phases_.empty() || phases_.back().last_round < horizon_)) {
    phases_.push_back({state_.phase, state_.phase_first_round, horizon_, true, {}});
  }
  log.epochs = phases_;
  log.snapshots.clear();
  log.comm_total = {};
  for (const EpochSummary& p : phases_) log.comm_total += p.comm;
}

}  // namespace cobra
