#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace fcoord {

/// Single take-it-or-leave-it price; 0 means the load is withheld.
struct PostedPrice {
  double price = 0.0;
};

/// Price index chosen per (period, state) by a sequential policy.
struct PriceSchedule {
  std::vector<std::vector<double>> price;  // [period][state]
};

using PolicyDescriptor = std::variant<PostedPrice, PriceSchedule>;

/// Oracle output at terminal cost w.
struct PolicySummary {
  double spot_cost = 0.0;        // s(w): expected spot spend, terminal cost excluded
  double non_procurement = 1.0;  // q(w)
  double total = 0.0;            // r(w) = s + q * w
  PolicyDescriptor policy = PostedPrice{};

  std::optional<double> posted_price() const;
};

/// Pricing oracle: optimal policy within its implementable class for a given
/// terminal cost. Implementations are immutable and thread-safe.
class PricingOracle {
 public:
  virtual ~PricingOracle() = default;

  /// Throws InputError for negative or non-finite w.
  virtual PolicySummary best_response(double w) const = 0;
  virtual std::string describe() const = 0;

  double non_procurement(double w) const { return best_response(w).non_procurement; }
  double total_cost(double w) const { return best_response(w).total; }
};

/// Single-period posted-price oracle with an explicit acceptance curve.
class StaticPricingOracle : public PricingOracle {
 public:
  /// Probability a carrier accepts posted price p.
  virtual double acceptance(double price) const = 0;
};

/// Carrier minimum acceptable price ~ Uniform[lo, hi].
class UniformStaticOracle final : public StaticPricingOracle {
 public:
  UniformStaticOracle(double lo, double hi);

  PolicySummary best_response(double w) const override;
  double acceptance(double price) const override;
  std::string describe() const override;

  double lo() const { return lo_; }
  double hi() const { return hi_; }

 private:
  double lo_, hi_;
};

/// Acceptance 1 / (1 + exp(-k (p - x0))) on prices in [p_min, p_max]; the
/// withheld price 0 (never accepted) is always available.
class LogisticStaticOracle final : public StaticPricingOracle {
 public:
  /// step <= 0 selects (p_max - p_min) / 2000.
  LogisticStaticOracle(double k, double x0, double p_min, double p_max, double step = 0.0);

  PolicySummary best_response(double w) const override;
  double acceptance(double price) const override;
  std::string describe() const override;

  double k() const { return k_; }
  double x0() const { return x0_; }
  /// Price at which acceptance is 1/2.
  double median_price() const { return x0_; }

 private:
  double objective(double price, double w) const;

  double k_, x0_, p_min_, p_max_, step_;
};

/// Finite-horizon pricing MDP solved exactly by backward induction.
///
/// States persist while the load is unaccepted; `transition[t][s][p]` is the
/// next-state law when price index p was posted in state s at period t and no
/// carrier accepted. Prices must include 0 with zero acceptance.
class TabularMdpOracle final : public PricingOracle {
 public:
  struct Spec {
    std::size_t horizon = 1;
    std::size_t num_states = 1;
    std::vector<double> prices;
    std::vector<std::vector<std::vector<double>>> accept;                   // [t][s][p]
    std::vector<std::vector<std::vector<std::vector<double>>>> transition;  // [t][s][p][s'], empty = stay
    std::vector<double> initial;                                            // empty = state 0
  };

  explicit TabularMdpOracle(Spec spec);

  /// Single-period, single-state MDP posting any price of `grid` against the
  /// acceptance curve of `base` (plus the withheld price 0).
  static TabularMdpOracle replicate(const StaticPricingOracle& base, std::span<const double> grid);

  PolicySummary best_response(double w) const override;
  std::string describe() const override;

  const Spec& spec() const { return spec_; }

 private:
  double next_state_prob(std::size_t t, std::size_t s, std::size_t p, std::size_t next) const;

  Spec spec_;
};

/// q is constant in w with zero spot spend; useful as a test stub.
class ConstantOracle final : public PricingOracle {
 public:
  explicit ConstantOracle(double q) : q_(q) {}
  PolicySummary best_response(double w) const override;
  std::string describe() const override;

 private:
  double q_;
};

/// |(r(w+h) - r(w-h)) / (2h) - q(w)|; zero for an exact envelope identity.
double envelope_residual(const PricingOracle& oracle, double w, double h);

/// max over consecutive grid points of |dq| / |dw|.
double lipschitz_estimate(const PricingOracle& oracle, std::span<const double> w_grid);

/// Evenly spaced grid [lo, hi] with the given step (hi included when it lands on the grid).
std::vector<double> make_grid(double lo, double hi, double step);

}  // namespace fcoord
