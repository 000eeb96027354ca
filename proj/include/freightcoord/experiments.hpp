#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "freightcoord/config.hpp"
#include "freightcoord/dfw.hpp"
#include "freightcoord/parallel.hpp"

namespace fcoord {

struct ResultRow {
  std::string experiment;
  std::optional<double> sweep_value;
  std::string algorithm;  // dfw | lba | opt_oracle
  double mean_cost = 0.0;
  double stderr = 0.0;
  std::optional<double> iterations;
  std::optional<double> final_gap;
  std::optional<double> utilization;
  std::optional<double> savings_pct;
  std::optional<double> savings_se;
  std::uint64_t seed = 0;
};

struct ExperimentOutput {
  std::vector<ResultRow> rows;
  std::vector<DfwTraceRow> trace;  // single-instance runs only
  std::vector<std::string> notes;  // human-readable diagnostics
};

ExperimentOutput cmd_example1(const ExperimentConfig& config = example1_config(), ExecMode exec = ExecMode::serial);
/// Sees every (sweep point, draw) DFW run; may be called from worker threads.
using DrawObserver =
    std::function<void(std::size_t point, std::size_t draw, const Instance& inst, const DfwResult& result)>;

/// One DFW-vs-LBA comparison per sweep value.
ExperimentOutput cmd_sweep(const ExperimentConfig& config, ExecMode exec = ExecMode::serial,
                           const DrawObserver& observer = {});
/// DFW vs LBA plus sampled substitutability gaps against sqrt(L K ln T / 2).
ExperimentOutput cmd_regional(const ExperimentConfig& config, ExecMode exec = ExecMode::serial);
ExperimentOutput cmd_bipartite(const ExperimentConfig& config, ExecMode exec = ExecMode::serial);
/// DFW vs LBA on whatever instance the config describes.
ExperimentOutput run_comparison(const ExperimentConfig& config, ExecMode exec = ExecMode::serial);

struct VerifyCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  bool ok() const;
};

struct VerifyOptions {
  std::uint64_t seed = 11;
  /// Adds an oracle whose r and q disagree, to prove the envelope suite bites.
  bool inject_faulty_oracle = false;
};

VerifyReport cmd_verify(const VerifyOptions& options = {});

/// "%.6g"; empty for missing values.
std::string format_number(std::optional<double> v);
void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows);
void write_trace_csv(std::ostream& out, const std::vector<DfwTraceRow>& trace);

}  // namespace fcoord
