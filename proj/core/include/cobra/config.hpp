#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cobra/adversaries.hpp"
#include "cobra/env.hpp"
#include "cobra/instance.hpp"

namespace cobra {

enum class Algorithm { kCbarc, kUcb1, kCoopAae };
enum class AdversaryKind { kNull, kFlipMean, kTargeted };

std::string to_string(Algorithm a);
std::string to_string(AdversaryKind a);
Algorithm parse_algorithm(const std::string& text);
AdversaryKind parse_adversary_kind(const std::string& text);

struct AdversarySpec {
  AdversaryKind kind = AdversaryKind::kNull;
  FlipMeanConfig flip_mean;
  double budget = 0.0;
  std::optional<ArmIndex> target;  // nullopt: the instance's best arm
  double depress = 0.4;

  friend bool operator==(const AdversarySpec&, const AdversarySpec&) = default;
};

struct ExperimentConfig {
  std::string name = "experiment";
  std::size_t agents = 1;
  std::vector<ArmSpec> arms;
  std::vector<Algorithm> algorithms{Algorithm::kCbarc};
  AdversarySpec adversary;
  Round horizon = 1000;
  double delta = 0.05;
  std::vector<std::uint64_t> seeds{1};
  std::vector<Round> checkpoints;  // empty: geometric grid
  bool lean = false;
  std::size_t workers = 1;
  std::string output = "results";

  BanditInstance instance() const { return BanditInstance(arms, agents); }
  std::vector<Round> resolved_checkpoints() const;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

// Cross-field checks (V <= K, delta, horizon, adversary/instance shape).
// Throws ConfigError.
void validate(const ExperimentConfig& config);

// YAML text to config; ConfigError messages carry the offending key and line.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);
std::string serialize_config(const ExperimentConfig& config);

std::vector<std::uint64_t> seed_range(std::uint64_t base, std::size_t count);

}  // namespace cobra
