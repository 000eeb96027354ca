#pragma once

// Experiment configuration files (JSON). Every object is checked against a
// fixed key set; unknown keys raise InputError naming the offending path.

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "freightcoord/contracts.hpp"
#include "freightcoord/core.hpp"
#include "freightcoord/pricing.hpp"

namespace fcoord {

struct OracleSpec {
  std::string type = "uniform";  // uniform | logistic | tabular
  double lo = 100.0, hi = 200.0;
  double k = 0.05, x0 = 150.0, p_min = 0.0, p_max = 400.0, step = 0.0;
  TabularMdpOracle::Spec tabular;
};

struct FamilySpec {
  std::string type = "lane";  // lane | bipartite | er_bipartite | regional | regional_random
  std::size_t n_left = 0, n_right = 0;
  std::vector<BipartiteFamily::Edge> edges;
  std::string edges_file;  // resolved against the config directory
  double edge_prob = 0.0;
  int slots = 0;
  int num_colors = 1;  // regional_random
  std::vector<int> colors;
  std::vector<SlotInterval> intervals;
  std::uint64_t seed = 1;  // random families
};

struct InstanceSpec {
  std::size_t loads = 0;  // derived for bipartite families when 0
  int capacity = 1;
  std::vector<double> alternate_costs;  // one value broadcasts
  double nu = 0.25;
  FamilySpec family;
  OracleSpec oracle;                 // shared
  std::vector<OracleSpec> oracles;   // per load, overrides `oracle`
};

struct SweepSpec {
  /// capacity | alternate_cost | alternate_premium | er_edge_prob. A premium x
  /// sets a_l = (1 + x/100) times the price where load l's acceptance is 1/2.
  std::string axis;
  std::vector<double> values;
  std::size_t draws = 1;  // independent instance draws per value (random families)
};

struct ExperimentConfig {
  std::string experiment = "experiment";
  std::string preset;  // "er-sweep" fills the Erdos-Renyi sweep
  InstanceSpec instance;
  double epsilon = 1e-6;
  std::size_t max_iterations = 100000;
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
  double delta = 0.05;
  std::optional<SweepSpec> sweep;
  std::filesystem::path base_dir;  // directory of the config file
};

ExperimentConfig parse_config(const std::string& json_text, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

/// Built-in configurations.
ExperimentConfig example1_config();
ExperimentConfig er_sweep_config();

std::shared_ptr<const PricingOracle> build_oracle(const OracleSpec& spec);
std::shared_ptr<const ContractFamily> build_family(const FamilySpec& spec, std::size_t loads);
/// Resolves the spec into an Instance; `family` overrides the spec's family.
Instance build_instance(const InstanceSpec& spec, const std::filesystem::path& base_dir = {},
                        std::shared_ptr<const ContractFamily> family = nullptr);

/// Regional family with uniformly drawn contiguous intervals and colors.
RegionalFamily random_regional(std::size_t loads, int slots, int colors, std::uint64_t seed);

}  // namespace fcoord
