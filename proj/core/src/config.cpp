#include "cobra/config.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <sstream>

#include "cobra/errors.hpp"
#include "cobra/metrics.hpp"

namespace cobra {

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::kCbarc: return "cbarc";
    case Algorithm::kUcb1: return "ucb1";
    case Algorithm::kCoopAae: return "coop_aae";
  }
  return "?";
}

std::string to_string(AdversaryKind a) {
  switch (a) {
    case AdversaryKind::kNull: return "null";
    case AdversaryKind::kFlipMean: return "flip_mean";
    case AdversaryKind::kTargeted: return "targeted";
  }
  return "?";
}

Algorithm parse_algorithm(const std::string& text) {
  if (text == "cbarc") return Algorithm::kCbarc;
  if (text == "ucb1") return Algorithm::kUcb1;
  if (text == "coop_aae") return Algorithm::kCoopAae;
  throw ConfigError("unknown algorithm '" + text + "' (expected cbarc, ucb1 or coop_aae)");
}

AdversaryKind parse_adversary_kind(const std::string& text) {
  if (text == "null") return AdversaryKind::kNull;
  if (text == "flip_mean") return AdversaryKind::kFlipMean;
  if (text == "targeted") return AdversaryKind::kTargeted;
  throw ConfigError("unknown adversary '" + text + "' (expected null, flip_mean or targeted)");
}

std::vector<std::uint64_t> seed_range(std::uint64_t base, std::size_t count) {
  std::vector<std::uint64_t> out(count);
  for (std::size_t k = 0; k < count; ++k) out[k] = base + k;
  return out;
}

std::vector<Round> ExperimentConfig::resolved_checkpoints() const {
  return checkpoints.empty() ? default_checkpoints(horizon) : checkpoints;
}

void validate(const ExperimentConfig& c) {
  const BanditInstance inst = c.instance();
  if (c.horizon < 4) throw ConfigError("horizon: must be at least 4");
  if (!(c.delta > 0.0 && c.delta < 1.0)) throw ConfigError("delta: must lie in (0, 1)");
  if (c.algorithms.empty()) throw ConfigError("algorithms: at least one algorithm required");
  if (c.seeds.empty()) throw ConfigError("seeds: at least one seed required");
  if (c.workers == 0) throw ConfigError("workers: must be positive");
  Round prev = 0;
  for (Round cp : c.checkpoints) {
    if (cp <= prev || cp > c.horizon) throw ConfigError("checkpoints: must be strictly ascending within [1, horizon]");
    prev = cp;
  }
  switch (c.adversary.kind) {
    case AdversaryKind::kNull: break;
    case AdversaryKind::kFlipMean:
      // Constructing one validates both the parameters and the instance shape.
      FlipMeanAdversary(c.adversary.flip_mean, inst, c.horizon, 0);
      break;
    case AdversaryKind::kTargeted:
      if (c.adversary.target && *c.adversary.target >= inst.num_arms()) {
        throw ConfigError("adversary.target: arm index out of range");
      }
      TargetedGapAdversary(c.adversary.budget, 0, c.adversary.depress);
      break;
  }
}

namespace {

std::string where(const YAML::Node& node, const std::string& key) {
  const YAML::Mark m = node.Mark();
  if (m.line < 0) return "key '" + key + "'";
  return "key '" + key + "' (line " + std::to_string(m.line + 1) + ")";
}

template <typename T>
T read(const YAML::Node& node, const std::string& key) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError("invalid value for " + where(node, key));
  }
}

void check_keys(const YAML::Node& map, const std::string& section, std::initializer_list<const char*> allowed) {
  for (const auto& kv : map) {
    const std::string key = kv.first.as<std::string>();
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) throw ConfigError("unknown " + where(kv.first, section.empty() ? key : section + "." + key));
  }
}

YAML::Node require(const YAML::Node& map, const char* key, const std::string& section) {
  YAML::Node n = map[key];
  if (!n) {
    throw ConfigError("missing key '" + (section.empty() ? std::string(key) : section + "." + key) + "'" +
                      (map.Mark().line >= 0 ? " in section starting at line " + std::to_string(map.Mark().line + 1)
                                            : std::string()));
  }
  return n;
}

void parse_instance(const YAML::Node& node, ExperimentConfig& c) {
  if (!node.IsMap()) throw ConfigError("section " + where(node, "instance") + " must be a map");
  check_keys(node, "instance", {"agents", "arms"});
  c.agents = read<std::size_t>(require(node, "agents", "instance"), "instance.agents");
  const YAML::Node arms = require(node, "arms", "instance");
  if (!arms.IsSequence()) throw ConfigError(where(arms, "instance.arms") + " must be a list");
  c.arms.clear();
  for (std::size_t k = 0; k < arms.size(); ++k) {
    const YAML::Node a = arms[k];
    const std::string key = "instance.arms[" + std::to_string(k) + "]";
    if (!a.IsMap()) throw ConfigError(where(a, key) + " must be a map");
    check_keys(a, key, {"kind", "mean", "count"});
    const ArmKind kind = parse_arm_kind(read<std::string>(require(a, "kind", key), key + ".kind"));
    const double mean = read<double>(require(a, "mean", key), key + ".mean");
    const std::size_t count = a["count"] ? read<std::size_t>(a["count"], key + ".count") : 1;
    for (std::size_t j = 0; j < count; ++j) c.arms.push_back({kind, mean});
  }
}

void parse_adversary(const YAML::Node& node, ExperimentConfig& c) {
  if (!node.IsMap()) throw ConfigError("section " + where(node, "adversary") + " must be a map");
  check_keys(node, "adversary", {"kind", "gap", "alpha", "b0", "start_interval", "budget", "target", "depress"});
  AdversarySpec& a = c.adversary;
  a.kind = parse_adversary_kind(read<std::string>(require(node, "kind", "adversary"), "adversary.kind"));
  if (node["gap"]) a.flip_mean.gap = read<double>(node["gap"], "adversary.gap");
  if (node["alpha"]) a.flip_mean.alpha = read<double>(node["alpha"], "adversary.alpha");
  if (node["b0"]) a.flip_mean.b0 = read<double>(node["b0"], "adversary.b0");
  if (node["start_interval"]) {
    const YAML::Node s = node["start_interval"];
    if (s.IsScalar() && s.Scalar() == "auto") {
      a.flip_mean.start_interval.reset();
    } else {
      a.flip_mean.start_interval = read<std::size_t>(s, "adversary.start_interval");
    }
  }
  if (node["budget"]) a.budget = read<double>(node["budget"], "adversary.budget");
  if (node["depress"]) a.depress = read<double>(node["depress"], "adversary.depress");
  if (node["target"]) {
    const YAML::Node t = node["target"];
    if (t.IsScalar() && t.Scalar() == "best") {
      a.target.reset();
    } else {
      a.target = read<std::size_t>(t, "adversary.target");
    }
  }
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError("malformed config (line " + std::to_string(e.mark.line + 1) + "): " + e.msg);
  }
  if (!root.IsMap()) throw ConfigError("config must be a map of sections");
  check_keys(root, "",
             {"name", "instance", "algorithm", "algorithms", "adversary", "horizon", "delta", "seeds", "checkpoints",
              "lean", "workers", "output"});

  ExperimentConfig c;
  if (root["name"]) c.name = read<std::string>(root["name"], "name");
  parse_instance(require(root, "instance", ""), c);
  if (root["algorithm"] && root["algorithms"]) throw ConfigError("use either 'algorithm' or 'algorithms', not both");
  if (root["algorithm"]) {
    c.algorithms = {parse_algorithm(read<std::string>(root["algorithm"], "algorithm"))};
  } else if (root["algorithms"]) {
    const YAML::Node list = root["algorithms"];
    if (!list.IsSequence()) throw ConfigError(where(list, "algorithms") + " must be a list");
    c.algorithms.clear();
    for (const auto& a : list) c.algorithms.push_back(parse_algorithm(read<std::string>(a, "algorithms")));
  }
  if (root["adversary"]) parse_adversary(root["adversary"], c);
  c.horizon = read<Round>(require(root, "horizon", ""), "horizon");
  if (root["delta"]) c.delta = read<double>(root["delta"], "delta");
  if (const YAML::Node s = root["seeds"]) {
    if (s.IsSequence()) {
      c.seeds.clear();
      for (const auto& x : s) c.seeds.push_back(read<std::uint64_t>(x, "seeds"));
    } else if (s.IsMap()) {
      check_keys(s, "seeds", {"count", "base"});
      const auto count = read<std::size_t>(require(s, "count", "seeds"), "seeds.count");
      const auto base = s["base"] ? read<std::uint64_t>(s["base"], "seeds.base") : 1;
      c.seeds = seed_range(base, count);
    } else {
      c.seeds = seed_range(1, read<std::size_t>(s, "seeds"));
    }
  }
  if (const YAML::Node cp = root["checkpoints"]) {
    if (cp.IsScalar() && cp.Scalar() == "geometric") {
      c.checkpoints.clear();
    } else if (cp.IsSequence()) {
      for (const auto& x : cp) c.checkpoints.push_back(read<Round>(x, "checkpoints"));
    } else {
      throw ConfigError(where(cp, "checkpoints") + " must be 'geometric' or a list of rounds");
    }
  }
  if (root["lean"]) c.lean = read<bool>(root["lean"], "lean");
  if (root["workers"]) c.workers = read<std::size_t>(root["workers"], "workers");
  if (root["output"]) c.output = read<std::string>(root["output"], "output");
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const ExperimentConfig& c) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "name" << YAML::Value << c.name;
  out << YAML::Key << "instance" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "agents" << YAML::Value << c.agents;
  out << YAML::Key << "arms" << YAML::Value << YAML::BeginSeq;
  for (std::size_t k = 0; k < c.arms.size();) {
    std::size_t run = 1;
    while (k + run < c.arms.size() && c.arms[k + run] == c.arms[k]) ++run;
    out << YAML::Flow << YAML::BeginMap;
    out << YAML::Key << "kind" << YAML::Value << to_string(c.arms[k].kind);
    out << YAML::Key << "mean" << YAML::Value << YAML::Precision(17) << c.arms[k].mean;
    if (run > 1) out << YAML::Key << "count" << YAML::Value << run;
    out << YAML::EndMap;
    k += run;
  }
  out << YAML::EndSeq << YAML::EndMap;

  out << YAML::Key << "algorithms" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (Algorithm a : c.algorithms) out << to_string(a);
  out << YAML::EndSeq;

  const AdversarySpec& a = c.adversary;
  out << YAML::Key << "adversary" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "kind" << YAML::Value << to_string(a.kind);
  if (a.kind == AdversaryKind::kFlipMean) {
    out << YAML::Key << "gap" << YAML::Value << YAML::Precision(17) << a.flip_mean.gap;
    out << YAML::Key << "alpha" << YAML::Value << YAML::Precision(17) << a.flip_mean.alpha;
    out << YAML::Key << "b0" << YAML::Value << YAML::Precision(17) << a.flip_mean.b0;
    out << YAML::Key << "start_interval" << YAML::Value;
    if (a.flip_mean.start_interval) {
      out << *a.flip_mean.start_interval;
    } else {
      out << "auto";
    }
  } else if (a.kind == AdversaryKind::kTargeted) {
    out << YAML::Key << "budget" << YAML::Value << YAML::Precision(17) << a.budget;
    out << YAML::Key << "target" << YAML::Value;
    if (a.target) {
      out << *a.target;
    } else {
      out << "best";
    }
    out << YAML::Key << "depress" << YAML::Value << YAML::Precision(17) << a.depress;
  }
  out << YAML::EndMap;

  out << YAML::Key << "horizon" << YAML::Value << c.horizon;
  out << YAML::Key << "delta" << YAML::Value << YAML::Precision(17) << c.delta;
  const bool contiguous = !c.seeds.empty() && c.seeds == seed_range(c.seeds.front(), c.seeds.size());
  out << YAML::Key << "seeds" << YAML::Value;
  if (contiguous) {
    out << YAML::Flow << YAML::BeginMap << YAML::Key << "count" << YAML::Value << c.seeds.size() << YAML::Key
        << "base" << YAML::Value << c.seeds.front() << YAML::EndMap;
  } else {
    out << YAML::Flow << YAML::BeginSeq;
    for (auto s : c.seeds) out << s;
    out << YAML::EndSeq;
  }
  out << YAML::Key << "checkpoints" << YAML::Value;
  if (c.checkpoints.empty()) {
    out << "geometric";
  } else {
    out << YAML::Flow << YAML::BeginSeq;
    for (auto cp : c.checkpoints) out << cp;
    out << YAML::EndSeq;
  }
  out << YAML::Key << "lean" << YAML::Value << c.lean;
  out << YAML::Key << "workers" << YAML::Value << c.workers;
  out << YAML::Key << "output" << YAML::Value << c.output;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace cobra
