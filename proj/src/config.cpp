#include "freightcoord/config.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

#include "freightcoord/error.hpp"

namespace fcoord {

namespace {

using json = nlohmann::json;

void expect_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw InputError(path + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* k) { return key == k; }))
      throw InputError(path + ": unknown key '" + key + "'");
  }
}

template <class T>
T get(const json& obj, const char* key, const std::string& path, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InputError(path + "." + key + ": " + e.what());
  }
}

OracleSpec parse_oracle(const json& j, const std::string& path, OracleSpec spec = {}) {
  expect_keys(j, path,
              {"type", "lo", "hi", "k", "x0", "p_min", "p_max", "step", "horizon", "states", "prices", "accept",
               "transition", "initial"});
  spec.type = get<std::string>(j, "type", path, spec.type);
  spec.lo = get(j, "lo", path, spec.lo);
  spec.hi = get(j, "hi", path, spec.hi);
  spec.k = get(j, "k", path, spec.k);
  spec.x0 = get(j, "x0", path, spec.x0);
  spec.p_min = get(j, "p_min", path, spec.p_min);
  spec.p_max = get(j, "p_max", path, spec.p_max);
  spec.step = get(j, "step", path, spec.step);
  auto& t = spec.tabular;
  t.horizon = get<std::size_t>(j, "horizon", path, t.horizon);
  t.num_states = get<std::size_t>(j, "states", path, t.num_states);
  t.prices = get(j, "prices", path, t.prices);
  t.accept = get(j, "accept", path, t.accept);
  t.transition = get(j, "transition", path, t.transition);
  t.initial = get(j, "initial", path, t.initial);
  if (spec.type != "uniform" && spec.type != "logistic" && spec.type != "tabular")
    throw InputError(path + ".type: unknown oracle type '" + spec.type + "'");
  return spec;
}

FamilySpec parse_family(const json& j, const std::string& path, FamilySpec spec) {
  expect_keys(j, path, {"type", "n_left", "n_right", "edges", "edges_file", "p", "slots", "colors", "intervals", "seed"});
  spec.type = get<std::string>(j, "type", path, spec.type);
  spec.n_left = get<std::size_t>(j, "n_left", path, spec.n_left);
  spec.n_right = get<std::size_t>(j, "n_right", path, spec.n_right);
  spec.edges = get(j, "edges", path, spec.edges);
  spec.edges_file = get<std::string>(j, "edges_file", path, spec.edges_file);
  spec.edge_prob = get(j, "p", path, spec.edge_prob);
  spec.slots = get(j, "slots", path, spec.slots);
  spec.seed = get<std::uint64_t>(j, "seed", path, spec.seed);
  if (j.contains("colors")) {
    if (spec.type == "regional_random") spec.num_colors = get(j, "colors", path, 1);
    else spec.colors = get(j, "colors", path, spec.colors);
  }
  if (j.contains("intervals")) {
    const auto raw = get<std::vector<std::pair<int, int>>>(j, "intervals", path, {});
    spec.intervals.clear();
    for (const auto& [first, last] : raw) spec.intervals.push_back({first, last});
  }
  static const char* kTypes[] = {"lane", "bipartite", "er_bipartite", "regional", "regional_random"};
  if (std::find(std::begin(kTypes), std::end(kTypes), spec.type) == std::end(kTypes))
    throw InputError(path + ".type: unknown family type '" + spec.type + "'");
  return spec;
}

InstanceSpec parse_instance(const json& j, const std::string& path, InstanceSpec spec) {
  expect_keys(j, path, {"loads", "capacity", "alternate_cost", "alternate_costs", "nu", "family", "oracle", "oracles"});
  spec.loads = get<std::size_t>(j, "loads", path, spec.loads);
  spec.capacity = get(j, "capacity", path, spec.capacity);
  if (j.contains("alternate_cost") && j.contains("alternate_costs"))
    throw InputError(path + ": give either alternate_cost or alternate_costs");
  if (j.contains("alternate_cost")) spec.alternate_costs = {get(j, "alternate_cost", path, 0.0)};
  if (j.contains("alternate_costs")) spec.alternate_costs = get(j, "alternate_costs", path, spec.alternate_costs);
  spec.nu = get(j, "nu", path, spec.nu);
  if (j.contains("family")) spec.family = parse_family(j.at("family"), path + ".family", spec.family);
  if (j.contains("oracle")) spec.oracle = parse_oracle(j.at("oracle"), path + ".oracle", spec.oracle);
  if (j.contains("oracles")) {
    const auto& arr = j.at("oracles");
    spec.oracles.clear();
    if (!arr.is_array()) throw InputError(path + ".oracles: expected an array");
    for (std::size_t i = 0; i < arr.size(); ++i)
      spec.oracles.push_back(parse_oracle(arr[i], path + ".oracles[" + std::to_string(i) + "]"));
  }
  return spec;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("config is not valid JSON: ") + e.what());
  }
  expect_keys(j, "config", {"experiment", "preset", "instance", "dfw", "eval", "sweep"});
  ExperimentConfig cfg;
  // A preset supplies defaults for every field; the file overrides them.
  if (const auto preset = get<std::string>(j, "preset", "config", ""); !preset.empty()) {
    if (preset != "er-sweep") throw InputError("config.preset: unknown preset '" + preset + "'");
    cfg = er_sweep_config();
  }
  cfg.base_dir = base_dir;
  cfg.experiment = get<std::string>(j, "experiment", "config", cfg.experiment);
  if (j.contains("dfw")) {
    const auto& d = j.at("dfw");
    expect_keys(d, "config.dfw", {"epsilon", "max_iterations"});
    cfg.epsilon = get(d, "epsilon", "config.dfw", cfg.epsilon);
    cfg.max_iterations = get<std::size_t>(d, "max_iterations", "config.dfw", cfg.max_iterations);
  }
  if (j.contains("eval")) {
    const auto& e = j.at("eval");
    expect_keys(e, "config.eval", {"samples", "seed", "delta"});
    cfg.samples = get<std::size_t>(e, "samples", "config.eval", cfg.samples);
    cfg.seed = get<std::uint64_t>(e, "seed", "config.eval", cfg.seed);
    cfg.delta = get(e, "delta", "config.eval", cfg.delta);
  }
  if (j.contains("sweep")) {
    const auto& s = j.at("sweep");
    expect_keys(s, "config.sweep", {"axis", "values", "draws"});
    SweepSpec sweep;
    sweep.axis = get<std::string>(s, "axis", "config.sweep", "");
    sweep.values = get(s, "values", "config.sweep", sweep.values);
    sweep.draws = get<std::size_t>(s, "draws", "config.sweep", 1);
    static const char* kAxes[] = {"capacity", "alternate_cost", "alternate_premium", "er_edge_prob"};
    if (std::find(std::begin(kAxes), std::end(kAxes), sweep.axis) == std::end(kAxes))
      throw InputError("config.sweep.axis: expected capacity, alternate_cost, alternate_premium or er_edge_prob");
    if (sweep.values.empty()) throw InputError("config.sweep.values: need at least one value");
    if (sweep.draws == 0) throw InputError("config.sweep.draws: must be positive");
    cfg.sweep = sweep;
  }
  if (j.contains("instance")) cfg.instance = parse_instance(j.at("instance"), "config.instance", cfg.instance);
  if (!(cfg.epsilon > 0.0)) throw InputError("config.dfw.epsilon: must be positive");
  if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) throw InputError("config.eval.delta: must lie in (0, 1)");
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.parent_path());
}

ExperimentConfig example1_config() {
  ExperimentConfig cfg;
  cfg.experiment = "example1";
  cfg.instance.loads = 1000;
  cfg.instance.capacity = 700;
  cfg.instance.alternate_costs = {300.0};
  cfg.instance.family.type = "lane";
  cfg.instance.oracle.type = "uniform";
  cfg.instance.oracle.lo = 100.0;
  cfg.instance.oracle.hi = 200.0;
  cfg.epsilon = 1e-6;
  return cfg;
}

ExperimentConfig er_sweep_config() {
  ExperimentConfig cfg;
  cfg.experiment = "er-sweep";
  cfg.preset = "er-sweep";
  cfg.instance.capacity = 25;
  cfg.instance.alternate_costs = {300.0};
  cfg.instance.nu = 0.2;
  cfg.instance.family.type = "er_bipartite";
  cfg.instance.family.n_left = 50;
  cfg.instance.family.n_right = 50;
  cfg.instance.oracle.type = "uniform";
  cfg.instance.oracle.lo = 100.0;
  cfg.instance.oracle.hi = 200.0;
  cfg.epsilon = 10.0;
  cfg.samples = 50;
  cfg.seed = 2024;
  cfg.sweep = SweepSpec{"er_edge_prob", {0.0, 0.02, 0.10, 0.20, 0.30}, 1000};
  return cfg;
}

std::shared_ptr<const PricingOracle> build_oracle(const OracleSpec& spec) {
  if (spec.type == "uniform") return std::make_shared<UniformStaticOracle>(spec.lo, spec.hi);
  if (spec.type == "logistic")
    return std::make_shared<LogisticStaticOracle>(spec.k, spec.x0, spec.p_min, spec.p_max, spec.step);
  if (spec.type == "tabular") return std::make_shared<TabularMdpOracle>(spec.tabular);
  throw InputError("unknown oracle type '" + spec.type + "'");
}

RegionalFamily random_regional(std::size_t loads, int slots, int colors, std::uint64_t seed) {
  if (slots <= 0 || colors <= 0) throw InputError("random regional family needs positive slots and colors");
  RngEngine rng(RngStream(seed, 0x1e6));
  std::vector<int> c(loads);
  std::vector<SlotInterval> iv(loads);
  for (std::size_t l = 0; l < loads; ++l) {
    c[l] = static_cast<int>(rng.uniform_int(0, colors - 1));
    int a = static_cast<int>(rng.uniform_int(1, slots));
    int b = static_cast<int>(rng.uniform_int(1, slots));
    if (a > b) std::swap(a, b);
    iv[l] = {a, b};
  }
  return RegionalFamily(slots, std::move(c), std::move(iv));
}

std::shared_ptr<const ContractFamily> build_family(const FamilySpec& spec, std::size_t loads) {
  if (spec.type == "lane") return std::make_shared<LaneLevelFamily>(loads);
  if (spec.type == "bipartite")
    return std::make_shared<BipartiteFamily>(spec.n_left, spec.n_right, spec.edges);
  if (spec.type == "er_bipartite")
    return std::make_shared<BipartiteFamily>(gen_er_bipartite(spec.n_left, spec.n_right, spec.edge_prob, spec.seed));
  if (spec.type == "regional") return std::make_shared<RegionalFamily>(spec.slots, spec.colors, spec.intervals);
  if (spec.type == "regional_random")
    return std::make_shared<RegionalFamily>(random_regional(loads, spec.slots, spec.num_colors, spec.seed));
  throw InputError("unknown family type '" + spec.type + "'");
}

Instance build_instance(const InstanceSpec& spec, const std::filesystem::path& base_dir,
                        std::shared_ptr<const ContractFamily> family) {
  FamilySpec fam = spec.family;
  if (!fam.edges_file.empty()) {
    std::filesystem::path p = fam.edges_file;
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    std::ifstream in(p);
    if (!in) throw InputError("cannot open edge list " + p.string());
    auto more = read_edge_list(in);
    fam.edges.insert(fam.edges.end(), more.begin(), more.end());
  }
  std::size_t loads = spec.loads;
  const bool bipartite = fam.type == "bipartite" || fam.type == "er_bipartite";
  if (bipartite) {
    const std::size_t derived = fam.n_left + fam.n_right;
    if (loads != 0 && loads != derived) throw InputError("instance.loads disagrees with n_left + n_right");
    loads = derived;
  }
  if (fam.type == "regional" && loads == 0) loads = fam.colors.size();
  if (loads == 0) throw InputError("instance needs a positive number of loads");
  if (!family) family = build_family(fam, loads);

  std::vector<double> a = spec.alternate_costs;
  if (a.empty()) throw InputError("instance needs alternate costs");
  if (a.size() == 1) a.assign(loads, a.front());
  if (a.size() != loads) throw InputError("alternate_costs length does not match the number of loads");

  std::vector<std::shared_ptr<const PricingOracle>> oracles;
  if (!spec.oracles.empty()) {
    if (spec.oracles.size() != loads) throw InputError("need one oracle spec per load");
    for (const auto& o : spec.oracles) oracles.push_back(build_oracle(o));
  } else {
    oracles.assign(loads, build_oracle(spec.oracle));
  }
  return Instance(std::move(a), spec.capacity, std::move(family), std::move(oracles), spec.nu);
}

}  // namespace fcoord
