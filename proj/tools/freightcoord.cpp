// freightcoord: command-line runner for the DFW / LBA experiments.
//
//   freightcoord example1 [--epsilon X] [--samples N] [--seed N] [--out PATH]
//   freightcoord sweep --config configs/er_sweep.json
//   freightcoord regional --config configs/regional.json
//   freightcoord bipartite --config configs/bipartite_standin.json
//   freightcoord verify [--seed N]
//
// Results are CSV. FREIGHTCOORD_OUT_DIR, when set, replaces the directory
// part of --out.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "freightcoord/error.hpp"
#include "freightcoord/experiments.hpp"

namespace fs = std::filesystem;
using namespace fcoord;

namespace {

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  std::optional<double> epsilon;
  std::string out;
  bool parallel = false;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool needs_config) {
  auto* opt = cmd->add_option("--config", f.config, "experiment config (JSON)");
  if (needs_config) opt->required();
  cmd->add_option("--seed", f.seed, "evaluation seed");
  cmd->add_option("--samples", f.samples, "Monte Carlo samples per evaluation");
  cmd->add_option("--epsilon", f.epsilon, "DFW gap tolerance");
  cmd->add_option("--out", f.out, "results CSV (default: stdout)");
  cmd->add_flag("--parallel", f.parallel, "use OpenMP kernels");
}

ExperimentConfig resolve(const CommonFlags& f, ExperimentConfig fallback) {
  ExperimentConfig cfg = f.config.empty() ? std::move(fallback) : load_config(f.config);
  if (f.seed) cfg.seed = *f.seed;
  if (f.samples) cfg.samples = *f.samples;
  if (f.epsilon) cfg.epsilon = *f.epsilon;
  return cfg;
}

fs::path output_path(const std::string& out) {
  if (out.empty()) return {};
  fs::path p(out);
  if (const char* dir = std::getenv("FREIGHTCOORD_OUT_DIR"); dir && *dir) p = fs::path(dir) / p.filename();
  return p;
}

void emit(const ExperimentOutput& result, const CommonFlags& f) {
  for (const auto& n : result.notes) std::cerr << "note: " << n << '\n';
  const fs::path path = output_path(f.out);
  if (path.empty()) {
    write_results_csv(std::cout, result.rows);
    return;
  }
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream csv(path);
  if (!csv) throw InputError("cannot write " + path.string());
  write_results_csv(csv, result.rows);
  if (!result.trace.empty()) {
    const fs::path tpath = path.parent_path() / (path.stem().string() + "_trace.csv");
    std::ofstream trace(tpath);
    if (!trace) throw InputError("cannot write " + tpath.string());
    write_trace_csv(trace, result.trace);
    std::cerr << "wrote " << tpath.string() << '\n';
  }
  std::cerr << "wrote " << path.string() << '\n';
}

ExecMode mode(const CommonFlags& f) { return f.parallel ? ExecMode::parallel : ExecMode::serial; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spot/contract freight procurement with Dual Frank-Wolfe shadow prices"};
  app.require_subcommand(1);

  CommonFlags ex1, sweep, regional, bip, verify;
  auto* c_ex1 = app.add_subcommand("example1", "Example 1: 1000 lane loads, 700 contracts");
  add_common(c_ex1, ex1, false);
  auto* c_sweep = app.add_subcommand("sweep", "DFW vs LBA along a capacity, alternate-cost or edge-probability axis");
  add_common(c_sweep, sweep, true);
  auto* c_reg = app.add_subcommand("regional", "regional contracts plus substitutability gaps");
  add_common(c_reg, regional, true);
  auto* c_bip = app.add_subcommand("bipartite", "round-trip (bipartite) contracts");
  add_common(c_bip, bip, true);
  auto* c_ver = app.add_subcommand("verify", "run the invariant suites");
  std::uint64_t verify_seed = 11;
  bool inject = false;
  c_ver->add_option("--seed", verify_seed, "suite seed");
  c_ver->add_flag("--inject-faulty-oracle", inject, "add an oracle that violates the envelope identity");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*c_ex1) {
      emit(cmd_example1(resolve(ex1, example1_config()), mode(ex1)), ex1);
    } else if (*c_sweep) {
      emit(cmd_sweep(resolve(sweep, {}), mode(sweep)), sweep);
    } else if (*c_reg) {
      emit(cmd_regional(resolve(regional, {}), mode(regional)), regional);
    } else if (*c_bip) {
      emit(cmd_bipartite(resolve(bip, {}), mode(bip)), bip);
    } else if (*c_ver) {
      VerifyOptions vo;
      vo.seed = verify_seed;
      vo.inject_faulty_oracle = inject;
      const VerifyReport rep = cmd_verify(vo);
      for (const auto& c : rep.checks)
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << (c.detail.empty() ? "" : ": " + c.detail) << '\n';
      return rep.ok() ? 0 : 1;
    }
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
