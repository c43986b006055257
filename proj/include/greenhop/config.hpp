#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "greenhop/aggregate.hpp"
#include "greenhop/errors.hpp"
#include "greenhop/strings.hpp"

namespace greenhop {

/// Everything that shapes the trained pipeline. The same key-value encoding
/// is used for config files, --override flags, and the model file header, so
/// a saved model replays its exact training configuration.
struct PipelineConfig {
  int k_neighbors = 32;
  double theta1_deg = 75.0;  // symmetric cone half-angle
  double theta2_deg = 45.0;  // inverted cone half-angle
  double delta = 1.0;        // inverted cone vertex offset
  std::vector<Aggregator> aggregators = all_aggregators();
  int num_points = 1024;     // downsample target per cloud
  int dft_bins = 32;
  std::optional<std::size_t> n_features;  // unset: elbow of the loss curve
  double ridge = 1e-4;
  std::uint64_t seed = 42;
  bool augment = false;      // random z-rotation plus clipped jitter (training only)
  double jitter_sigma = 0.01;
  double jitter_clip = 0.05;
  int saab_max_points = 0;   // cap on per-cloud descriptors fed to the Saab fit; 0 = all

  void validate() const {
    if (k_neighbors < 1) throw ConfigError("k_neighbors must be at least 1");
    if (!(theta1_deg > 0.0 && theta1_deg < 90.0))
      throw ConfigError("theta1_deg must lie strictly between 0 and 90");
    if (!(theta2_deg > 0.0 && theta2_deg < 90.0))
      throw ConfigError("theta2_deg must lie strictly between 0 and 90");
    if (!(delta > 0.0)) throw ConfigError("delta must be positive");
    if (aggregators.empty()) throw ConfigError("aggregators must not be empty");
    std::set<std::string> seen;
    for (Aggregator a : aggregators)
      if (!seen.insert(aggregator_name(a)).second)
        throw ConfigError("duplicate aggregator '" + aggregator_name(a) + "'");
    if (num_points < 2) throw ConfigError("num_points must be at least 2");
    if (k_neighbors >= num_points)
      throw ConfigError("k_neighbors must be smaller than num_points");
    if (dft_bins < 1) throw ConfigError("dft_bins must be at least 1");
    if (n_features && *n_features < 1) throw ConfigError("n_features must be at least 1");
    if (!(ridge >= 0.0)) throw ConfigError("ridge must be non-negative");
    if (!(jitter_sigma >= 0.0)) throw ConfigError("jitter_sigma must be non-negative");
    if (!(jitter_clip >= 0.0)) throw ConfigError("jitter_clip must be non-negative");
    if (saab_max_points < 0) throw ConfigError("saab_max_points must be non-negative");
  }
};

inline std::string aggregators_to_string(const std::vector<Aggregator>& aggs) {
  std::string out;
  for (std::size_t i = 0; i < aggs.size(); ++i) {
    if (i) out += ",";
    out += aggregator_name(aggs[i]);
  }
  return out;
}

inline std::vector<Aggregator> aggregators_from_string(const std::string& csv) {
  std::vector<Aggregator> aggs;
  for (const std::string& token : split(csv, ','))
    aggs.push_back(aggregator_from_name(std::string(trim(token))));
  return aggs;
}

inline const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "k_neighbors", "theta1_deg", "theta2_deg", "delta",        "aggregators",
      "num_points",  "dft_bins",   "n_features", "ridge",        "seed",
      "augment",     "jitter_sigma", "jitter_clip", "saab_max_points"};
  return keys;
}

inline std::string get_config_value(const PipelineConfig& c, const std::string& key) {
  if (key == "k_neighbors") return std::to_string(c.k_neighbors);
  if (key == "theta1_deg") return format_double(c.theta1_deg);
  if (key == "theta2_deg") return format_double(c.theta2_deg);
  if (key == "delta") return format_double(c.delta);
  if (key == "aggregators") return aggregators_to_string(c.aggregators);
  if (key == "num_points") return std::to_string(c.num_points);
  if (key == "dft_bins") return std::to_string(c.dft_bins);
  if (key == "n_features") return c.n_features ? std::to_string(*c.n_features) : "auto";
  if (key == "ridge") return format_double(c.ridge);
  if (key == "seed") return std::to_string(c.seed);
  if (key == "augment") return c.augment ? "true" : "false";
  if (key == "jitter_sigma") return format_double(c.jitter_sigma);
  if (key == "jitter_clip") return format_double(c.jitter_clip);
  if (key == "saab_max_points") return std::to_string(c.saab_max_points);
  throw ConfigError("unknown config key '" + key + "'");
}

inline void set_config_value(PipelineConfig& c, const std::string& key,
                             const std::string& value) {
  if (key == "k_neighbors") c.k_neighbors = parse_int_strict(value, key);
  else if (key == "theta1_deg") c.theta1_deg = parse_double_strict(value, key);
  else if (key == "theta2_deg") c.theta2_deg = parse_double_strict(value, key);
  else if (key == "delta") c.delta = parse_double_strict(value, key);
  else if (key == "aggregators") c.aggregators = aggregators_from_string(value);
  else if (key == "num_points") c.num_points = parse_int_strict(value, key);
  else if (key == "dft_bins") c.dft_bins = parse_int_strict(value, key);
  else if (key == "n_features") {
    if (value == "auto") c.n_features.reset();
    else c.n_features = static_cast<std::size_t>(parse_uint_strict(value, key));
  } else if (key == "ridge") c.ridge = parse_double_strict(value, key);
  else if (key == "seed") c.seed = parse_uint_strict(value, key);
  else if (key == "augment") c.augment = parse_bool_strict(value, key);
  else if (key == "jitter_sigma") c.jitter_sigma = parse_double_strict(value, key);
  else if (key == "jitter_clip") c.jitter_clip = parse_double_strict(value, key);
  else if (key == "saab_max_points") c.saab_max_points = parse_int_strict(value, key);
  else throw ConfigError("unknown config key '" + key + "'");
}

/// Flat `key = value` file with '#' comment lines. Unknown keys are errors so
/// typos cannot silently fall back to defaults.
inline PipelineConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  PipelineConfig c;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped(trim(line));
    if (stripped.empty() || stripped[0] == '#') continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(line_no) + ": expected 'key = value'");
    try {
      set_config_value(c, std::string(trim(stripped.substr(0, eq))),
                       std::string(trim(stripped.substr(eq + 1))));
    } catch (const ConfigError& e) {
      throw ConfigError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return c;
}

/// Applies a single `key=value` override on top of an existing config.
inline void apply_override(PipelineConfig& c, const std::string& spec) {
  const std::size_t eq = spec.find('=');
  if (eq == std::string::npos)
    throw ConfigError("override '" + spec + "' must have the form key=value");
  set_config_value(c, std::string(trim(spec.substr(0, eq))),
                   std::string(trim(spec.substr(eq + 1))));
}

inline void write_config_file(const PipelineConfig& c, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write config file '" + path + "'");
  for (const std::string& key : config_keys())
    out << key << " = " << get_config_value(c, key) << "\n";
  if (!out) throw ConfigError("failed writing config file '" + path + "'");
}

}  // namespace greenhop
