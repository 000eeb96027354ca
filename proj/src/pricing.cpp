#include "freightcoord/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "freightcoord/error.hpp"

namespace fcoord {

namespace {

void check_terminal_cost(double w) {
  if (!std::isfinite(w) || w < 0.0) throw InputError("terminal cost must be finite and nonnegative");
}

PolicySummary posted(double price, double accept, double w) {
  PolicySummary out;
  out.spot_cost = price * accept;
  out.non_procurement = 1.0 - accept;
  out.total = out.spot_cost + out.non_procurement * w;
  out.policy = PostedPrice{price};
  return out;
}

}  // namespace

std::optional<double> PolicySummary::posted_price() const {
  if (const auto* p = std::get_if<PostedPrice>(&policy)) return p->price;
  return std::nullopt;
}

UniformStaticOracle::UniformStaticOracle(double lo, double hi) : lo_(lo), hi_(hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || lo < 0.0 || !(lo < hi))
    throw InputError("uniform oracle needs 0 <= lo < hi");
}

double UniformStaticOracle::acceptance(double price) const {
  return std::clamp((price - lo_) / (hi_ - lo_), 0.0, 1.0);
}

PolicySummary UniformStaticOracle::best_response(double w) const {
  check_terminal_cost(w);
  // Maximiser of (w - p) F(p) on [lo, hi].
  const double price = std::clamp(0.5 * (lo_ + w), lo_, hi_);
  return posted(price, acceptance(price), w);
}

std::string UniformStaticOracle::describe() const {
  std::ostringstream s;
  s << "uniform[" << lo_ << ", " << hi_ << "]";
  return s.str();
}

LogisticStaticOracle::LogisticStaticOracle(double k, double x0, double p_min, double p_max, double step)
    : k_(k), x0_(x0), p_min_(p_min), p_max_(p_max), step_(step) {
  if (!std::isfinite(k) || !(k > 0.0)) throw InputError("logistic slope must be positive");
  if (!std::isfinite(x0) || !std::isfinite(p_min) || !std::isfinite(p_max) || p_min < 0.0 || !(p_min < p_max))
    throw InputError("logistic price range needs 0 <= p_min < p_max");
  if (!std::isfinite(step)) throw InputError("logistic grid step must be finite");
  if (step_ <= 0.0) step_ = (p_max_ - p_min_) / 2000.0;
}

double LogisticStaticOracle::acceptance(double price) const {
  if (price <= 0.0) return 0.0;
  return 1.0 / (1.0 + std::exp(-k_ * (price - x0_)));
}

double LogisticStaticOracle::objective(double price, double w) const {
  const double f = acceptance(price);
  return price * f + w * (1.0 - f);
}

PolicySummary LogisticStaticOracle::best_response(double w) const {
  check_terminal_cost(w);
  const auto n = static_cast<std::size_t>(std::floor((p_max_ - p_min_) / step_ + 1e-9));
  double best_p = p_min_;
  double best_v = objective(p_min_, w);
  for (std::size_t i = 1; i <= n + 1; ++i) {
    const double p = std::min(p_min_ + static_cast<double>(i) * step_, p_max_);
    const double v = objective(p, w);
    if (v < best_v) {
      best_v = v;
      best_p = p;
    }
    if (p >= p_max_) break;
  }

  double a = std::max(p_min_, best_p - step_);
  double b = std::min(p_max_, best_p + step_);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = objective(c, w), fd = objective(d, w);
  for (int it = 0; it < 200 && b - a > 1e-11 * std::max(1.0, b); ++it) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = objective(c, w);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = objective(d, w);
    }
  }
  const double refined = 0.5 * (a + b);
  if (const double v = objective(refined, w); v < best_v) {
    best_v = v;
    best_p = refined;
  }

  // Withholding costs exactly w.
  if (w <= best_v) return posted(0.0, 0.0, w);
  return posted(best_p, acceptance(best_p), w);
}

std::string LogisticStaticOracle::describe() const {
  std::ostringstream s;
  s << "logistic(k=" << k_ << ", x0=" << x0_ << ", prices [" << p_min_ << ", " << p_max_ << "] step " << step_ << ")";
  return s.str();
}

TabularMdpOracle::TabularMdpOracle(Spec spec) : spec_(std::move(spec)) {
  const auto T = spec_.horizon, S = spec_.num_states, P = spec_.prices.size();
  if (T == 0 || S == 0 || P == 0) throw InputError("MDP needs a horizon, states and prices");
  auto zero_price = std::find(spec_.prices.begin(), spec_.prices.end(), 0.0);
  if (zero_price == spec_.prices.end()) throw InputError("MDP price set must include 0");
  const auto p0 = static_cast<std::size_t>(zero_price - spec_.prices.begin());
  for (double p : spec_.prices)
    if (!std::isfinite(p) || p < 0.0) throw InputError("MDP prices must be finite and nonnegative");
  if (spec_.accept.size() != T) throw InputError("acceptance table needs one entry per period");
  for (const auto& per_t : spec_.accept) {
    if (per_t.size() != S) throw InputError("acceptance table needs one row per state");
    for (const auto& row : per_t) {
      if (row.size() != P) throw InputError("acceptance row needs one entry per price");
      for (double b : row)
        if (!(b >= 0.0 && b <= 1.0)) throw InputError("acceptance probabilities must lie in [0, 1]");
      if (row[p0] != 0.0) throw InputError("price 0 must never be accepted");
    }
  }
  auto check_law = [](const std::vector<double>& law, std::size_t n, const char* what) {
    if (law.size() != n) throw InputError(std::string(what) + " has wrong length");
    double total = 0.0;
    for (double v : law) {
      if (!(v >= 0.0)) throw InputError(std::string(what) + " has negative entries");
      total += v;
    }
    if (std::fabs(total - 1.0) > 1e-9) throw InputError(std::string(what) + " must sum to 1");
  };
  if (!spec_.transition.empty()) {
    if (spec_.transition.size() != T) throw InputError("transition table needs one entry per period");
    for (const auto& per_t : spec_.transition) {
      if (per_t.size() != S) throw InputError("transition table needs one block per state");
      for (const auto& per_s : per_t) {
        if (per_s.size() != P) throw InputError("transition block needs one law per price");
        for (const auto& law : per_s) check_law(law, S, "transition law");
      }
    }
  }
  if (!spec_.initial.empty()) check_law(spec_.initial, S, "initial law");
}

TabularMdpOracle TabularMdpOracle::replicate(const StaticPricingOracle& base, std::span<const double> grid) {
  Spec spec;
  spec.prices.push_back(0.0);
  for (double p : grid)
    if (p != 0.0) spec.prices.push_back(p);
  std::vector<double> row;
  for (double p : spec.prices) row.push_back(p == 0.0 ? 0.0 : base.acceptance(p));
  spec.accept = {{row}};
  return TabularMdpOracle(std::move(spec));
}

double TabularMdpOracle::next_state_prob(std::size_t t, std::size_t s, std::size_t p, std::size_t next) const {
  if (spec_.transition.empty()) return s == next ? 1.0 : 0.0;
  return spec_.transition[t][s][p][next];
}

PolicySummary TabularMdpOracle::best_response(double w) const {
  check_terminal_cost(w);
  const auto T = spec_.horizon, S = spec_.num_states, P = spec_.prices.size();
  std::vector<double> value(S, w), next_value(S);
  PriceSchedule schedule{std::vector<std::vector<double>>(T, std::vector<double>(S, 0.0))};
  std::vector<std::vector<std::size_t>> choice(T, std::vector<std::size_t>(S, 0));

  for (std::size_t t = T; t-- > 0;) {
    for (std::size_t s = 0; s < S; ++s) {
      double best = 0.0;
      std::size_t best_p = 0;
      for (std::size_t p = 0; p < P; ++p) {
        const double b = spec_.accept[t][s][p];
        double cont = 0.0;
        for (std::size_t n = 0; n < S; ++n) {
          const double pr = next_state_prob(t, s, p, n);
          if (pr != 0.0) cont += pr * value[n];
        }
        const double v = b * spec_.prices[p] + (1.0 - b) * cont;
        if (p == 0 || v < best) {
          best = v;
          best_p = p;
        }
      }
      next_value[s] = best;
      choice[t][s] = best_p;
      schedule.price[t][s] = spec_.prices[best_p];
    }
    std::swap(value, next_value);
  }

  // Exact forward pass over the unaccepted mass.
  std::vector<double> mass(S, 0.0), next_mass(S);
  if (spec_.initial.empty()) mass[0] = 1.0;
  else mass = spec_.initial;
  double spot = 0.0;
  for (std::size_t t = 0; t < T; ++t) {
    std::fill(next_mass.begin(), next_mass.end(), 0.0);
    for (std::size_t s = 0; s < S; ++s) {
      if (mass[s] == 0.0) continue;
      const std::size_t p = choice[t][s];
      const double b = spec_.accept[t][s][p];
      spot += mass[s] * b * spec_.prices[p];
      const double stay = mass[s] * (1.0 - b);
      for (std::size_t n = 0; n < S; ++n) next_mass[n] += stay * next_state_prob(t, s, p, n);
    }
    std::swap(mass, next_mass);
  }
  double q = 0.0;
  for (double m : mass) q += m;

  PolicySummary out;
  out.spot_cost = spot;
  out.non_procurement = std::clamp(q, 0.0, 1.0);
  out.total = spot + out.non_procurement * w;
  if (T == 1 && S == 1) out.policy = PostedPrice{schedule.price[0][0]};
  else out.policy = std::move(schedule);
  return out;
}

std::string TabularMdpOracle::describe() const {
  std::ostringstream s;
  s << "tabular-mdp(T=" << spec_.horizon << ", S=" << spec_.num_states << ", |O|=" << spec_.prices.size() << ")";
  return s.str();
}

PolicySummary ConstantOracle::best_response(double w) const {
  check_terminal_cost(w);
  PolicySummary out;
  out.spot_cost = 0.0;
  out.non_procurement = q_;
  out.total = q_ * w;
  return out;
}

std::string ConstantOracle::describe() const {
  std::ostringstream s;
  s << "constant(q=" << q_ << ")";
  return s.str();
}

double envelope_residual(const PricingOracle& oracle, double w, double h) {
  const double slope = (oracle.total_cost(w + h) - oracle.total_cost(w - h)) / (2.0 * h);
  return std::fabs(slope - oracle.non_procurement(w));
}

double lipschitz_estimate(const PricingOracle& oracle, std::span<const double> w_grid) {
  if (w_grid.size() < 2) throw InputError("lipschitz estimate needs at least two grid points");
  double beta = 0.0;
  double prev_q = oracle.non_procurement(w_grid[0]);
  for (std::size_t i = 1; i < w_grid.size(); ++i) {
    const double dw = w_grid[i] - w_grid[i - 1];
    if (!(dw > 0.0)) throw InputError("lipschitz grid must be strictly increasing");
    const double q = oracle.non_procurement(w_grid[i]);
    beta = std::max(beta, std::fabs(q - prev_q) / dw);
    prev_q = q;
  }
  return beta;
}

std::vector<double> make_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || !std::isfinite(lo) || !std::isfinite(hi) || hi < lo) throw InputError("bad grid specification");
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
  std::vector<double> grid(n + 1);
  for (std::size_t i = 0; i <= n; ++i) grid[i] = lo + static_cast<double>(i) * step;
  return grid;
}

}  // namespace fcoord
