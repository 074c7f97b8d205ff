#include "cobra/cbarc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "cobra/errors.hpp"

namespace cobra::cbarc {

namespace {

bool contains(const ArmSet& set, ArmIndex arm) { return std::binary_search(set.begin(), set.end(), arm); }

ArmSet set_union(const ArmSet& a, const ArmSet& b) {
  ArmSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

ArmSet set_difference(const ArmSet& a, const ArmSet& b) {
  ArmSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

ArmSet with_arm(ArmSet set, ArmIndex arm) {
  auto it = std::lower_bound(set.begin(), set.end(), arm);
  if (it == set.end() || *it != arm) set.insert(it, arm);
  return set;
}

// Partial Fisher-Yates: `count` distinct draws from `pool`.
ArmSet sample_without_replacement(std::vector<ArmIndex> pool, std::size_t count, Engine& rng) {
  for (std::size_t j = 0; j < count; ++j) {
    const std::size_t pick = j + uniform_index(rng, pool.size() - j);
    std::swap(pool[j], pool[pick]);
  }
  ArmSet out(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(count));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

double epsilon_at(std::size_t epoch) { return std::ldexp(kInitialEpsilon, 1 - static_cast<int>(epoch)); }

ArmSet intersect(const ArmSet& a, const ArmSet& b) {
  ArmSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

Allocation allocate_arms(std::size_t num_arms, std::size_t num_agents, ArmIndex empirical_best, Engine& rng) {
  if (num_agents == 0 || num_agents > num_arms) {
    throw ConfigError("allocate_arms: need 1 <= V <= K (V=" + std::to_string(num_agents) +
                      ", K=" + std::to_string(num_arms) + ")");
  }
  if (empirical_best >= num_arms) throw InvariantViolation("allocate_arms: empirical best arm out of range");

  Allocation out;
  if (num_agents == 1) {
    out.arms_per_agent = num_arms;
    ArmSet all(num_arms);
    std::iota(all.begin(), all.end(), ArmIndex{0});
    out.arm_sets.push_back(std::move(all));
    return out;
  }

  const std::size_t block = (num_arms + num_agents - 1) / num_agents;
  const std::size_t last_block_agent = (num_arms + block - 1) / block;  // v-bar, 1-based
  out.arms_per_agent = block + 1;
  out.arm_sets.resize(num_agents);

  for (std::size_t v = 0; v + 1 < last_block_agent; ++v) {
    for (std::size_t i = v * block; i < (v + 1) * block; ++i) out.arm_sets[v].push_back(i);
  }
  {
    ArmSet& tail = out.arm_sets[last_block_agent - 1];
    for (std::size_t i = (last_block_agent - 1) * block; i < num_arms; ++i) tail.push_back(i);
    const std::size_t pad = last_block_agent * block - num_arms;
    if (pad > 0) {
      std::vector<ArmIndex> pool;
      for (ArmIndex i = 0; i < num_arms; ++i) {
        if (!contains(tail, i)) pool.push_back(i);
      }
      tail = set_union(tail, sample_without_replacement(std::move(pool), pad, rng));
    }
  }
  for (std::size_t v = last_block_agent; v < num_agents; ++v) {
    std::vector<ArmIndex> pool(num_arms);
    std::iota(pool.begin(), pool.end(), ArmIndex{0});
    out.arm_sets[v] = sample_without_replacement(std::move(pool), block, rng);
  }
  for (ArmSet& set : out.arm_sets) set = with_arm(std::move(set), empirical_best);
  return out;
}

std::vector<double> pull_probabilities(const ArmSet& arms, const ArmSet& active, double epsilon,
                                       std::span<const double> arm_epsilon, std::size_t arms_per_agent) {
  std::vector<double> p(arms.size(), 0.0);
  double bad_mass = 0.0;
  std::size_t active_count = 0;
  for (std::size_t j = 0; j < arms.size(); ++j) {
    if (contains(active, arms[j])) {
      ++active_count;
      continue;
    }
    const double ratio = epsilon / arm_epsilon[arms[j]];
    p[j] = ratio * ratio / static_cast<double>(arms_per_agent);
    bad_mass += p[j];
  }
  if (active_count == 0) throw InvariantViolation("pull_probabilities: agent holds no active arm");
  const double share = (1.0 - bad_mass) / static_cast<double>(active_count);
  double total = 0.0;
  for (std::size_t j = 0; j < arms.size(); ++j) {
    if (contains(active, arms[j])) p[j] = share;
    if (!(p[j] >= 0.0)) throw InvariantViolation("pull_probabilities: negative probability");
    total += p[j];
  }
  if (std::fabs(total - 1.0) > 1e-9) throw InvariantViolation("pull_probabilities: distribution does not sum to 1");
  return p;
}

double epoch_length_real(double epsilon, std::size_t arms_per_agent, std::size_t num_arms, Round horizon,
                         double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("epoch_length: delta must lie in (0, 1)");
  if (horizon < 4) throw ConfigError("epoch_length: horizon must be at least 4");
  const double log4_horizon = std::log(static_cast<double>(horizon)) / std::log(4.0);
  const double confidence = std::log(8.0 * static_cast<double>(num_arms) * log4_horizon / delta);
  return 3.0 * static_cast<double>(arms_per_agent) * confidence / (epsilon * epsilon);
}

std::uint64_t epoch_length(double epsilon, std::size_t arms_per_agent, std::size_t num_arms, Round horizon,
                           double delta) {
  return static_cast<std::uint64_t>(std::ceil(epoch_length_real(epsilon, arms_per_agent, num_arms, horizon, delta)));
}

double agent_estimate(double reward_sum, double expected_pulls) { return reward_sum / expected_pulls; }

double leader_aggregate(std::span<const double> agent_estimates) {
  if (agent_estimates.empty()) throw InvariantViolation("leader_aggregate: no agent holds this arm");
  double sum = 0.0;
  for (double e : agent_estimates) sum += e;
  return sum / static_cast<double>(agent_estimates.size());
}

LeaderState LeaderState::initial(std::size_t num_arms, ArmIndex empirical_best) {
  LeaderState s;
  s.arm_epsilon.assign(num_arms, kInitialEpsilon);
  s.last_good_epoch.assign(num_arms, 1);
  s.active.resize(num_arms);
  std::iota(s.active.begin(), s.active.end(), ArmIndex{0});
  s.empirical_best = empirical_best;
  return s;
}

ArmSet reactivate(const ArmSet& active, const ArmSet& bad, std::span<const double> estimates,
                  std::span<const std::size_t> last_good_epoch) {
  ArmSet out;
  if (bad.empty() || active.empty()) return out;
  double best_active = estimates[active.front()];
  for (ArmIndex j : active) best_active = std::max(best_active, estimates[j]);
  for (ArmIndex i : bad) {
    if (best_active - estimates[i] < 4.0 * epsilon_at(last_good_epoch[i])) out.push_back(i);
  }
  return out;
}

EmpiricalBest select_empirical_best(const ArmSet& candidates, std::span<const double> estimates,
                                    std::span<const double> arm_epsilon) {
  if (candidates.empty()) throw InvariantViolation("select_empirical_best: no candidate arms");
  EmpiricalBest best{candidates.front(), estimates[candidates.front()] + 2.0 * arm_epsilon[candidates.front()]};
  for (ArmIndex j : candidates) {
    const double score = estimates[j] + 2.0 * arm_epsilon[j];
    if (score > best.score) best = {j, score};
  }
  return best;
}

Deactivation deactivate(const ArmSet& active, const ArmSet& bad, const ArmSet& reactivated,
                        const EmpiricalBest& best, std::span<const double> estimates, double epsilon) {
  Deactivation out;
  const ArmSet candidates = set_union(active, reactivated);
  for (ArmIndex i : candidates) {
    if (best.score - estimates[i] > 14.0 * epsilon) {
      if (i == best.arm) {
        out.best_exempted = true;
        continue;
      }
      out.deactivated.push_back(i);
    }
  }
  out.next_active = set_difference(candidates, out.deactivated);
  out.next_bad = set_union(set_difference(bad, reactivated), out.deactivated);
  if (!contains(out.next_active, best.arm)) throw InvariantViolation("deactivate: empirical best arm left the active set");
  return out;
}

void update_error_levels(LeaderState& state, const ArmSet& next_active, const ArmSet& next_bad) {
  const std::size_t tau = state.epoch;
  state.epsilon = epsilon_at(tau + 1);
  for (ArmIndex i : next_active) {
    state.arm_epsilon[i] = state.epsilon;
    state.last_good_epoch[i] = tau;
  }
  for (ArmIndex i : next_bad) state.arm_epsilon[i] = epsilon_at(state.last_good_epoch[i]);
  state.active = next_active;
  state.bad = next_bad;
  state.epoch = tau + 1;
}

EpochOutcome end_epoch(LeaderState& state, std::span<const double> estimates) {
  EpochOutcome out;
  out.reactivated = reactivate(state.active, state.bad, estimates, state.last_good_epoch);
  const ArmSet candidates = set_union(state.active, out.reactivated);
  out.best = select_empirical_best(candidates, estimates, state.arm_epsilon);
  const Deactivation d = deactivate(state.active, state.bad, out.reactivated, out.best, estimates, state.epsilon);
  out.deactivated = d.deactivated;
  out.best_exempted = d.best_exempted;
  update_error_levels(state, d.next_active, d.next_bad);
  state.empirical_best = out.best.arm;
  return out;
}

CommLedger epoch_comm(std::size_t num_agents, std::size_t arms_per_agent) {
  if (num_agents <= 1) return {};
  return {3 * num_agents, num_agents * (5 * arms_per_agent + 1)};
}

struct CbarcPolicy::Impl {
  double delta;
  Engine rng;
  const BanditInstance* instance = nullptr;
  Round horizon = 0;

  LeaderState leader;
  Allocation allocation;
  EpochSnapshot current;
  bool in_epoch = false;
  Round next_first_round = 1;
  std::vector<EpochSnapshot> snapshots;
  // Cumulative distributions per agent, aligned with the agent's arm set.
  std::vector<std::vector<double>> cdf;

  Impl(double d, std::uint64_t seed) : delta(d), rng(make_stream(seed, StreamPurpose::kAlgorithm)) {}

  void begin_epoch(Round first_round) {
    const std::size_t k = instance->num_arms();
    allocation = allocate_arms(k, instance->num_agents(), leader.empirical_best, rng);

    current = EpochSnapshot{};
    current.epoch = leader.epoch;
    current.first_round = first_round;
    current.planned_length = epoch_length(leader.epsilon, allocation.arms_per_agent, k, horizon, delta);
    current.last_round = std::min<Round>(horizon, first_round + current.planned_length - 1);
    current.truncated = first_round + current.planned_length - 1 > horizon;
    current.epsilon = leader.epsilon;
    current.arm_epsilon = leader.arm_epsilon;
    current.last_good_epoch = leader.last_good_epoch;
    current.active = leader.active;
    current.bad = leader.bad;
    current.empirical_best = leader.empirical_best;
    current.arms_per_agent = allocation.arms_per_agent;

    cdf.clear();
    for (AgentIndex v = 0; v < instance->num_agents(); ++v) {
      AgentEpochView view;
      view.agent = v;
      view.arms = allocation.arm_sets[v];
      view.active = intersect(view.arms, leader.active);
      view.bad = intersect(view.arms, leader.bad);
      view.probabilities =
          pull_probabilities(view.arms, leader.active, leader.epsilon, leader.arm_epsilon, allocation.arms_per_agent);
      view.expected_pulls.resize(view.arms.size());
      for (std::size_t j = 0; j < view.arms.size(); ++j) {
        view.expected_pulls[j] = view.probabilities[j] * static_cast<double>(current.planned_length);
      }
      view.realized_pulls.assign(view.arms.size(), 0);
      view.reward_sums.assign(view.arms.size(), 0.0);
      std::vector<double> c(view.probabilities.size());
      std::partial_sum(view.probabilities.begin(), view.probabilities.end(), c.begin());
      cdf.push_back(std::move(c));
      current.agents.push_back(std::move(view));
    }
    in_epoch = true;
  }

  void close_epoch() {
    if (!current.truncated) {
      const std::size_t k = instance->num_arms();
      std::vector<std::vector<double>> per_arm(k);
      for (AgentEpochView& view : current.agents) {
        view.estimates.resize(view.arms.size());
        for (std::size_t j = 0; j < view.arms.size(); ++j) {
          view.estimates[j] = agent_estimate(view.reward_sums[j], view.expected_pulls[j]);
          per_arm[view.arms[j]].push_back(view.estimates[j]);
        }
      }
      current.estimates.resize(k);
      for (ArmIndex i = 0; i < k; ++i) current.estimates[i] = leader_aggregate(per_arm[i]);

      const EpochOutcome outcome = end_epoch(leader, current.estimates);
      current.reactivated = outcome.reactivated;
      current.deactivated = outcome.deactivated;
      current.selected_best = outcome.best.arm;
      current.best_score = outcome.best.score;
      current.best_exempted = outcome.best_exempted;
      current.comm = epoch_comm(instance->num_agents(), allocation.arms_per_agent);
    }
    next_first_round = current.last_round + 1;
    snapshots.push_back(std::move(current));
    in_epoch = false;
  }
};

CbarcPolicy::CbarcPolicy(double delta, std::uint64_t seed) : impl_(std::make_unique<Impl>(delta, seed)) {
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("cbarc: delta must lie in (0, 1)");
}

CbarcPolicy::~CbarcPolicy() = default;

const LeaderState& CbarcPolicy::leader() const { return impl_->leader; }

void CbarcPolicy::start(const BanditInstance& instance, Round horizon) {
  if (horizon < 4) throw ConfigError("cbarc: horizon must be at least 4");
  Impl& s = *impl_;
  s.instance = &instance;
  s.horizon = horizon;
  s.snapshots.clear();
  s.leader = LeaderState::initial(instance.num_arms(), uniform_index(s.rng, instance.num_arms()));
  s.next_first_round = 1;
  s.in_epoch = false;
}

std::vector<ArmIndex> CbarcPolicy::choose(Round t) {
  Impl& s = *impl_;
  if (!s.in_epoch) s.begin_epoch(t);
  std::vector<ArmIndex> choices(s.instance->num_agents());
  for (AgentIndex v = 0; v < choices.size(); ++v) {
    const std::vector<double>& c = s.cdf[v];
    const double u = uniform01(s.rng);
    std::size_t j = static_cast<std::size_t>(std::upper_bound(c.begin(), c.end(), u) - c.begin());
    if (j >= c.size()) j = c.size() - 1;
    choices[v] = s.current.agents[v].arms[j];
  }
  return choices;
}

void CbarcPolicy::observe(Round t, std::span<const ArmIndex> chosen, std::span<const double> observed) {
  Impl& s = *impl_;
  for (AgentIndex v = 0; v < chosen.size(); ++v) {
    AgentEpochView& view = s.current.agents[v];
    const auto it = std::lower_bound(view.arms.begin(), view.arms.end(), chosen[v]);
    const auto j = static_cast<std::size_t>(it - view.arms.begin());
    ++view.realized_pulls[j];
    view.reward_sums[j] += observed[v];
  }
  if (t == s.current.last_round) s.close_epoch();
}

void CbarcPolicy::finish(RunLog& log) {
  Impl& s = *impl_;
  if (s.in_epoch) s.close_epoch();
  log.snapshots = s.snapshots;
  log.epochs.clear();
  log.comm_total = {};
  for (const EpochSnapshot& snap : s.snapshots) {
    log.epochs.push_back({snap.epoch, snap.first_round, snap.last_round, snap.truncated, snap.comm});
    log.comm_total += snap.comm;
  }
}

RunLog run_cbarc(const BanditInstance& instance, Adversary& adversary, Round horizon, double delta,
                 std::uint64_t seed, bool lean) {
  CbarcPolicy policy(delta, seed);
  return simulate(instance, policy, adversary, horizon, {seed, lean});
}

}  // namespace cobra::cbarc
