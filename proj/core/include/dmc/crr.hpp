#pragma once

// Cox-Ross-Rubinstein market on the Bernoulli space under the risk-neutral
// measure, Clark-formula hedging and the discrete change of variable formula.

#include <functional>
#include <vector>

#include "dmc/bernoulli_space.hpp"

namespace dmc {

struct CrrParams {
  int horizon = 0;
  // One entry per period 0..N; a single entry is broadcast to all periods.
  std::vector<double> r;
  std::vector<double> a;
  std::vector<double> b;
  double s0 = 1.0;  // S_{-1}
  double a0 = 1.0;  // A_{-1}
};

class CrrModel {
 public:
  /// Throws kArbitrageViolation unless -1 < a_k < r_k < b_k, kInvalidPrice
  /// unless S_{-1}, A_{-1} > 0.
  explicit CrrModel(CrrParams params, int max_horizon = kDefaultMaxHorizon);

  int horizon() const { return horizon_; }
  /// Space under P*, p*_k = (r_k - a_k) / (b_k - a_k).
  const SpacePtr& space() const { return space_; }
  double r(int k) const { return r_.at(static_cast<std::size_t>(k)); }
  double a(int k) const { return a_.at(static_cast<std::size_t>(k)); }
  double b(int k) const { return b_.at(static_cast<std::size_t>(k)); }
  double s0() const { return s0_; }
  double a0() const { return a0_; }
  double p_star(int k) const { return space_->p(k); }

  /// S_n for -1 <= n <= N. Throws kTimeIndexOutOfRange.
  RandomVariable stock_price(int n) const;
  /// S_n prod_{k<=n} (1 + r_k)^{-1}.
  RandomVariable discounted_price(int n) const;
  /// A_n = A_{-1} prod_{k<=n} (1 + r_k).
  double bond_price(int n) const;
  /// prod_{k=from}^{to} (1 + r_k)^{-1}; 1 for an empty range.
  double discount(int from, int to) const;

 private:
  void check_time(int n) const;

  int horizon_;
  std::vector<double> r_, a_, b_;
  double s0_, a0_;
  SpacePtr space_;
};

CrrModel build_model(const CrrParams& params);

/// V_{-1} = E*[F] prod_{k=0}^N (1 + r_k)^{-1}.
double price_claim(const CrrModel& model, const RandomVariable& f);

struct HedgingStrategy {
  ProcessRV eta;   // eta_0..eta_N, predictable
  ProcessRV zeta;  // zeta_0..zeta_N, predictable
  double eta_initial;   // eta_{-1} = 0
  double zeta_initial;  // zeta_{-1} = V_{-1} / A_{-1}
  std::vector<RandomVariable> value;             // V_{-1}..V_N
  std::vector<RandomVariable> discounted_value;  // V~_{-1}..V~_N
};

HedgingStrategy hedge(const CrrModel& model, const RandomVariable& f);

/// sup over n = -1..N-1 and outcomes of |A_n (zeta_{n+1} - zeta_n) + S_n (eta_{n+1} - eta_n)|.
double self_financing_residual(const CrrModel& model, const HedgingStrategy& h);
/// sup_w |V_N - F|.
double replication_error(const HedgingStrategy& h, const RandomVariable& f);
/// sup over n, w of |V~_n - V~_{-1} - sum_{k<=n} eta_k (S~_k - S~_{k-1})|.
double gains_decomposition_residual(const CrrModel& model, const HedgingStrategy& h);

enum class PayoffKind { kCall, kPut };

/// (S_N - K)^+ or (K - S_N)^+. Throws kInvalidStrike for negative or
/// non-finite K.
RandomVariable payoff(const CrrModel& model, PayoffKind kind, double strike);
/// A custom payoff table of 2^{N+1} values. Throws kInvalidInput on size mismatch.
RandomVariable payoff_table(const CrrModel& model, std::vector<double> values);

/// f(x, n) for the change of variable formula; n runs over -1..N.
using PathFunction = std::function<double(double, int)>;

/// sup over n and outcomes of
///   |f(M_n, n) - f(M_{-1}, -1) - sum_{k<=n} D_k f(M_k, k) Y_k
///     - sum_{k<=n} E[f(M_k, k) - f(M_{k-1}, k-1) | F_{k-1}]|.
/// `m` holds M_{-1}..M_N. Throws kNotAMartingale, kUndefinedFunctionValue.
double change_of_variable_residual(const std::vector<RandomVariable>& m, const PathFunction& f);

}  // namespace dmc
