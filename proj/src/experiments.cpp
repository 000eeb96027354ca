#include "freightcoord/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "freightcoord/contracts.hpp"
#include "freightcoord/error.hpp"
#include "freightcoord/eval.hpp"
#include "freightcoord/lba.hpp"

namespace fcoord {

namespace {

struct DrawResult {
  double dfw_cost = 0.0, dfw_se = 0.0, dfw_util = 0.0;
  double lba_cost = 0.0, lba_util = 0.0;
  double iterations = 0.0, gap = 0.0;
  bool converged = false;
  std::vector<DfwTraceRow> trace;
  std::vector<std::string> notes;
};

double median_price(const OracleSpec& o) {
  if (o.type == "uniform") return 0.5 * (o.lo + o.hi);
  if (o.type == "logistic") return o.x0;
  throw InputError("alternate_premium sweeps need uniform or logistic oracles");
}

bool random_family(const FamilySpec& f) { return f.type == "er_bipartite" || f.type == "regional_random"; }

DrawResult run_draw(const ExperimentConfig& cfg, const InstanceSpec& spec, std::uint64_t eval_seed, ExecMode exec,
                    const std::function<void(const Instance&, const DfwResult&)>& observe) {
  const Instance inst = build_instance(spec, cfg.base_dir);
  DrawResult out;
  const ValidationReport report = validate_instance(inst);
  for (const auto& v : report.violations) {
    if (!v.warning) throw InputError("invalid instance: " + v.message);
    out.notes.push_back("warning: " + v.message);
  }
  DfwConfig dcfg;
  dcfg.epsilon = cfg.epsilon;
  dcfg.max_iterations = cfg.max_iterations;
  dcfg.exec = exec;
  const DfwResult dfw = run_dfw(inst, dcfg);
  if (observe) observe(inst, dfw);
  EvalOptions eo;
  eo.n_samples = cfg.samples;
  eo.seed = eval_seed;
  eo.exec = exec;
  const EvalReport ev = evaluate_policy(inst, dfw.policies, eo);
  const LbaResult lba = run_lba(inst, exec);
  out.dfw_cost = ev.mean_cost;
  out.dfw_se = ev.stderr;
  out.dfw_util = ev.mean_utilization;
  out.lba_cost = lba.expected_cost;
  out.lba_util = static_cast<double>(lba.contracts.size());
  out.iterations = static_cast<double>(dfw.iterations);
  out.gap = dfw.final_gap;
  out.converged = dfw.converged;
  out.trace = dfw.trace;
  if (!dfw.converged) {
    std::ostringstream msg;
    msg << "DFW stopped at the iteration cap " << cfg.max_iterations << " with gap " << dfw.final_gap;
    out.notes.push_back(msg.str());
  }
  return out;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double se_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

std::optional<ResultRow> opt_row(const ExperimentConfig& cfg, const InstanceSpec& spec) {
  if (!spec.oracles.empty() || spec.oracle.type != "uniform") return std::nullopt;
  const Instance inst = build_instance(spec, cfg.base_dir);
  if (inst.num_loads() > 5) return std::nullopt;
  const OptOracleResult opt = brute_force_opt(inst, make_grid(spec.oracle.lo, spec.oracle.hi, 10.0));
  ResultRow row;
  row.algorithm = "opt_oracle";
  row.mean_cost = opt.opt_cost;
  return row;
}

// Runs `draws` independent instances (reseeding random families) and
// appends one dfw and one lba row.
void run_point(const ExperimentConfig& cfg, const InstanceSpec& spec, std::optional<double> sweep_value,
               std::size_t draws, ExecMode exec, ExperimentOutput& out, bool keep_trace,
               std::size_t point = 0, const DrawObserver& observer = {}) {
  std::vector<DrawResult> results(draws);
  const RngStream root(cfg.seed, 0x5eedULL);
  const ExecMode inner = draws > 1 ? ExecMode::serial : exec;
  for_each_index(draws > 1 ? exec : ExecMode::serial, draws, [&](std::size_t d) {
    InstanceSpec s = spec;
    std::uint64_t eval_seed = cfg.seed;
    if (draws > 1) {
      const RngStream sub = root.substream(d);
      if (random_family(s.family)) s.family.seed = sub.bits(0);
      eval_seed = sub.bits(1);
    }
    std::function<void(const Instance&, const DfwResult&)> observe;
    if (observer) observe = [&](const Instance& inst, const DfwResult& r) { observer(point, d, inst, r); };
    results[d] = run_draw(cfg, s, eval_seed, inner, observe);
  });

  std::vector<double> dfw, lba, iters, gaps, du, lu;
  std::size_t unconverged = 0;
  for (auto& r : results) {
    dfw.push_back(r.dfw_cost);
    lba.push_back(r.lba_cost);
    iters.push_back(r.iterations);
    gaps.push_back(r.gap);
    du.push_back(r.dfw_util);
    lu.push_back(r.lba_util);
    if (!r.converged) ++unconverged;
  }
  // Per-draw warnings repeat for every draw; report each distinct message once.
  std::vector<std::string> seen;
  for (auto& r : results)
    for (auto& n : r.notes)
      if (std::find(seen.begin(), seen.end(), n) == seen.end()) seen.push_back(n);
  for (auto& n : seen) out.notes.push_back((sweep_value ? "[" + format_number(sweep_value) + "] " : "") + n);
  if (unconverged > 0 && draws > 1)
    out.notes.push_back(std::to_string(unconverged) + " of " + std::to_string(draws) + " draws hit the iteration cap");

  ResultRow d;
  d.experiment = cfg.experiment;
  d.sweep_value = sweep_value;
  d.algorithm = "dfw";
  d.mean_cost = mean_of(dfw);
  d.stderr = draws > 1 ? se_of(dfw) : results.front().dfw_se;
  d.iterations = mean_of(iters);
  d.final_gap = mean_of(gaps);
  d.utilization = mean_of(du);
  d.seed = cfg.seed;
  const Savings sv = draws > 1 ? paired_savings(lba, dfw) : relative_savings(mean_of(lba), 0.0, d.mean_cost, d.stderr);
  d.savings_pct = sv.pct;
  d.savings_se = sv.se;

  ResultRow l;
  l.experiment = cfg.experiment;
  l.sweep_value = sweep_value;
  l.algorithm = "lba";
  l.mean_cost = mean_of(lba);
  l.stderr = se_of(lba);
  l.utilization = mean_of(lu);
  l.seed = cfg.seed;

  out.rows.push_back(std::move(d));
  out.rows.push_back(std::move(l));
  if (draws == 1) {
    if (auto o = opt_row(cfg, spec)) {
      o->experiment = cfg.experiment;
      o->sweep_value = sweep_value;
      o->seed = cfg.seed;
      out.rows.push_back(std::move(*o));
    }
  }
  if (keep_trace && draws == 1) out.trace = std::move(results.front().trace);
}

}  // namespace

ExperimentOutput run_comparison(const ExperimentConfig& cfg, ExecMode exec) {
  ExperimentOutput out;
  run_point(cfg, cfg.instance, std::nullopt, 1, exec, out, true);
  return out;
}

ExperimentOutput cmd_example1(const ExperimentConfig& cfg, ExecMode exec) {
  ExperimentOutput out = run_comparison(cfg, exec);
  if (!out.trace.empty()) {
    const auto& last = out.trace.back();
    std::ostringstream msg;
    msg << "final lambda " << format_number(last.lambda_mean) << ", posted price " << format_number(last.price_mean)
        << ", non-procurement " << format_number(last.q_mean) << ", gap " << format_number(last.gap) << " after "
        << last.iteration << " LP solves";
    out.notes.push_back(msg.str());
  }
  return out;
}

ExperimentOutput cmd_sweep(const ExperimentConfig& cfg, ExecMode exec, const DrawObserver& observer) {
  if (!cfg.sweep) throw InputError("sweep command needs a sweep section or the er-sweep preset");
  const SweepSpec& sw = *cfg.sweep;
  std::vector<InstanceSpec> specs;
  for (double v : sw.values) {
    InstanceSpec spec = cfg.instance;
    if (sw.axis == "capacity") {
      if (v < 0 || v != std::floor(v)) throw InputError("capacity sweep values must be nonnegative integers");
      spec.capacity = static_cast<int>(v);
    } else if (sw.axis == "alternate_cost") {
      spec.alternate_costs = {v};
    } else if (sw.axis == "alternate_premium") {
      const Instance base = build_instance(spec, cfg.base_dir);
      spec.alternate_costs.clear();
      for (std::size_t l = 0; l < base.num_loads(); ++l)
        spec.alternate_costs.push_back((1.0 + v / 100.0) * median_price(spec.oracles.empty() ? spec.oracle : spec.oracles[l]));
    } else {
      if (spec.family.type != "er_bipartite") throw InputError("er_edge_prob sweep needs an er_bipartite family");
      spec.family.edge_prob = v;
    }
    specs.push_back(std::move(spec));
  }
  // Multi-draw points parallelize over draws; single-draw sweeps over points.
  std::vector<ExperimentOutput> parts(specs.size());
  const bool over_points = sw.draws <= 1;
  for_each_index(over_points ? exec : ExecMode::serial, specs.size(), [&](std::size_t i) {
    run_point(cfg, specs[i], sw.values[i], sw.draws, over_points ? ExecMode::serial : exec, parts[i], false, i,
              observer);
  });
  ExperimentOutput out;
  for (auto& part : parts) {
    for (auto& r : part.rows) out.rows.push_back(std::move(r));
    for (auto& n : part.notes) out.notes.push_back(std::move(n));
  }
  return out;
}

ExperimentOutput cmd_bipartite(const ExperimentConfig& cfg, ExecMode exec) {
  const auto& t = cfg.instance.family.type;
  if (t != "bipartite" && t != "er_bipartite") throw InputError("bipartite command needs a bipartite family");
  return cfg.sweep ? cmd_sweep(cfg, exec) : run_comparison(cfg, exec);
}

ExperimentOutput cmd_regional(const ExperimentConfig& cfg, ExecMode exec) {
  const auto& fam = cfg.instance.family;
  if (fam.type != "regional" && fam.type != "regional_random")
    throw InputError("regional command needs a regional family");
  if (fam.type == "regional" && fam.colors.empty()) return {};
  if (fam.type == "regional_random" && cfg.instance.loads == 0) return {};
  ExperimentOutput out = run_comparison(cfg, exec);

  const Instance inst = build_instance(cfg.instance, cfg.base_dir);
  const auto& regional = dynamic_cast<const RegionalFamily&>(inst.family());
  const double bound = regional_gap_bound(regional);
  RngEngine rng(RngStream(cfg.seed, 0x6a9ULL));
  const std::size_t trials = 200;
  double worst = -kInf;
  std::size_t above = 0;
  for (std::size_t k = 0; k < trials; ++k) {
    std::vector<int> x(inst.num_loads());
    for (int& v : x) v = static_cast<int>(rng.uniform_int(0, 3));
    const Estimate g = substitutability_gap(regional, x, 2000, cfg.seed + k);
    worst = std::max(worst, g.value);
    if (g.value > bound + 3.0 * g.stderr) ++above;
  }
  std::ostringstream msg;
  msg << "substitutability gap over " << trials << " random X: max " << format_number(worst) << ", bound "
      << format_number(bound) << ", " << above << " above";
  out.notes.push_back(msg.str());
  return out;
}

// ---------------------------------------------------------------- verify

bool VerifyReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const VerifyCheck& c) { return c.passed; });
}

namespace {

// Reports q = 1/2 but charges r(w) = w: the envelope identity fails everywhere.
class FaultyEnvelopeOracle final : public PricingOracle {
 public:
  PolicySummary best_response(double w) const override {
    PolicySummary s;
    s.non_procurement = 0.5;
    s.spot_cost = 0.5 * w;
    s.total = w;
    return s;
  }
  std::string describe() const override { return "faulty-envelope"; }
};

std::string fmt(double v) { return format_number(v); }

VerifyCheck envelope_suite(const std::vector<std::pair<std::string, std::shared_ptr<const PricingOracle>>>& oracles,
                           std::uint64_t seed) {
  VerifyCheck c{"envelope", true, ""};
  RngEngine rng(RngStream(seed, 1));
  const std::vector<double> grid = make_grid(0.0, 600.0, 0.25);
  for (const auto& [name, oracle] : oracles) {
    const double beta = lipschitz_estimate(*oracle, grid);
    for (int k = 0; k < 100; ++k) {
      const double h = rng.uniform(0.25, 2.0);
      const double w = rng.uniform(h, 500.0);
      const double res = envelope_residual(*oracle, w, h);
      if (res > beta * h + 1e-9) {
        c.passed = false;
        c.detail = name + ": residual " + fmt(res) + " > beta*h " + fmt(beta * h) + " at w=" + fmt(w) +
                   " (seed " + std::to_string(seed) + ")";
        return c;
      }
    }
  }
  c.detail = std::to_string(oracles.size()) + " oracles";
  return c;
}

VerifyCheck oracle_shape_suite(const std::vector<std::pair<std::string, std::shared_ptr<const PricingOracle>>>& oracles) {
  VerifyCheck c{"oracle-shape", true, ""};
  for (const auto& [name, oracle] : oracles) {
    if (oracle->describe() == "faulty-envelope") continue;
    const auto at0 = oracle->best_response(0.0);
    if (std::fabs(at0.non_procurement - 1.0) > 1e-12 || std::fabs(at0.spot_cost) > 1e-12) {
      c = {"oracle-shape", false, name + ": q(0) != 1 or s(0) != 0"};
      return c;
    }
    double prev_q = 1.0, prev_r = 0.0;
    for (double w = 0.0; w <= 600.0; w += 1.0) {
      const auto s = oracle->best_response(w);
      const double mid = oracle->total_cost(w + 0.5);
      const double right = oracle->total_cost(w + 1.0);
      if (s.non_procurement > prev_q + 1e-12 || s.total < prev_r - 1e-9 || s.total > w + 1e-9 ||
          mid < 0.5 * (s.total + right) - 1e-9 || std::fabs(s.total - (s.spot_cost + s.non_procurement * w)) > 1e-9) {
        c = {"oracle-shape", false, name + ": shape violated near w=" + fmt(w)};
        return c;
      }
      prev_q = s.non_procurement;
      prev_r = s.total;
    }
  }
  return c;
}

VerifyCheck packing_suite(std::uint64_t seed) {
  VerifyCheck c{"packing", true, ""};
  RngEngine rng(RngStream(seed, 2));
  for (int trial = 0; trial < 40; ++trial) {
    const auto fam = gen_er_bipartite(4, 4, 0.4, rng());
    std::vector<int> x(8), y(8), sum(8);
    for (int l = 0; l < 8; ++l) {
      x[l] = static_cast<int>(rng.uniform_int(0, 2));
      y[l] = static_cast<int>(rng.uniform_int(0, 2));
      sum[l] = x[l] + y[l];
    }
    const long long bx = fam.pack_count(x), by = fam.pack_count(y), bs = fam.pack_count(sum);
    if (bs > bx + by || bs < bx || bs < by) {
      c = {"packing", false, "monotone/subadditive violated at trial " + std::to_string(trial)};
      return c;
    }
    const std::vector<double> a(8, 300.0);
    const auto sol = fam.assignment_cost(x, 2, a);
    if (auto err = check_assignment(fam, x, 2, a, sol)) {
      c = {"packing", false, *err};
      return c;
    }
  }
  c.detail = "40 random bipartite trials";
  return c;
}

VerifyCheck duality_suite(std::uint64_t seed) {
  VerifyCheck c{"duality", true, ""};
  RngEngine rng(RngStream(seed, 3));
  auto oracle = std::make_shared<UniformStaticOracle>(100.0, 200.0);
  for (int trial = 0; trial < 25; ++trial) {
    auto fam = std::make_shared<BipartiteFamily>(gen_er_bipartite(4, 4, 0.3, rng()));
    std::vector<double> a(8), q(8);
    for (int l = 0; l < 8; ++l) {
      a[l] = rng.uniform(50.0, 400.0);
      q[l] = rng.uniform();
    }
    const Instance inst = Instance::with_shared_oracle(a, static_cast<int>(rng.uniform_int(1, 4)), fam, oracle);
    const double dual = solve_dual_lp(inst, q).objective;
    const double primal = solve_fractional_primal(inst, q).objective;
    if (std::fabs(dual - primal) > 1e-6 * std::max(1.0, std::fabs(primal))) {
      c = {"duality", false, "primal " + fmt(primal) + " vs dual " + fmt(dual) + " at trial " + std::to_string(trial)};
      return c;
    }
  }
  c.detail = "25 random (instance, q) pairs";
  return c;
}

VerifyCheck utilization_suite() {
  VerifyCheck c{"utilization", true, ""};
  const Instance inst = build_instance(example1_config().instance);
  const DfwResult r = run_dfw(inst, DfwConfig{});
  const CheckReport rep = utilization_check(inst, r, 0.005, 500, 0.05);
  c.passed = r.converged && rep.ok();
  c.detail = "fluid " + fmt(rep.fluid_value) + " vs bound " + fmt(rep.fluid_bound) + ", event frequency " +
             fmt(rep.event_frequency);
  return c;
}

VerifyCheck regret_suite() {
  VerifyCheck c{"regret-tiny", true, ""};
  auto oracle = std::make_shared<UniformStaticOracle>(100.0, 200.0);
  const Instance inst =
      Instance::with_shared_oracle({300.0, 300.0}, 1, std::make_shared<LaneLevelFamily>(2), oracle, 0.25);
  DfwConfig cfg;
  cfg.epsilon = 1e-4;
  const DfwResult r = run_dfw(inst, cfg);
  const double alg = evaluate_policy(inst, r.policies).mean_cost;
  const OptOracleResult opt = brute_force_opt(inst, make_grid(100.0, 200.0, 10.0));
  const double bound = 300.0 * std::sqrt(2.0) / 2.0 + cfg.epsilon;
  c.passed = alg - opt.opt_cost <= bound;
  c.detail = "ALG " + fmt(alg) + ", grid OPT " + fmt(opt.opt_cost) + ", bound " + fmt(bound);
  return c;
}

}  // namespace

VerifyReport cmd_verify(const VerifyOptions& options) {
  std::vector<std::pair<std::string, std::shared_ptr<const PricingOracle>>> oracles = {
      {"uniform", std::make_shared<UniformStaticOracle>(100.0, 200.0)},
      {"logistic", std::make_shared<LogisticStaticOracle>(0.05, 150.0, 0.0, 400.0)},
  };
  {
    const UniformStaticOracle base(100.0, 200.0);
    const auto grid = make_grid(100.0, 200.0, 1.0);
    oracles.emplace_back("tabular", std::make_shared<TabularMdpOracle>(TabularMdpOracle::replicate(base, grid)));
  }
  if (options.inject_faulty_oracle) oracles.emplace_back("faulty-envelope", std::make_shared<FaultyEnvelopeOracle>());

  VerifyReport rep;
  rep.checks.push_back(envelope_suite(oracles, options.seed));
  rep.checks.push_back(oracle_shape_suite(oracles));
  rep.checks.push_back(packing_suite(options.seed));
  rep.checks.push_back(duality_suite(options.seed));
  rep.checks.push_back(utilization_suite());
  rep.checks.push_back(regret_suite());
  return rep;
}

// ---------------------------------------------------------------- CSV

std::string format_number(std::optional<double> v) {
  if (!v) return "";
  double x = *v;
  if (x == 0.0) x = 0.0;  // drop the sign of -0
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << "experiment,sweep_value,algorithm,mean_cost,stderr,iterations,final_gap,utilization,savings_pct,savings_se,"
         "seed\n";
  for (const auto& r : rows) {
    out << r.experiment << ',' << format_number(r.sweep_value) << ',' << r.algorithm << ','
        << format_number(r.mean_cost) << ',' << format_number(r.stderr) << ',' << format_number(r.iterations) << ','
        << format_number(r.final_gap) << ',' << format_number(r.utilization) << ',' << format_number(r.savings_pct)
        << ',' << format_number(r.savings_se) << ',' << r.seed << '\n';
  }
}

void write_trace_csv(std::ostream& out, const std::vector<DfwTraceRow>& trace) {
  out << "iteration,mu,gap,lambda_min,lambda_mean,lambda_max,q_mean,price_mean\n";
  for (const auto& t : trace) {
    out << t.iteration << ',' << format_number(t.mu) << ',' << format_number(t.gap) << ','
        << format_number(t.lambda_min) << ',' << format_number(t.lambda_mean) << ',' << format_number(t.lambda_max)
        << ',' << format_number(t.q_mean) << ',' << format_number(t.price_mean) << '\n';
  }
}

}  // namespace fcoord
