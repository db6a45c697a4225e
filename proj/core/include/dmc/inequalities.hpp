#pragma once

// Entropy, logarithmic Sobolev upper bounds and deviation bounds.

#include <vector>

#include "dmc/bernoulli_space.hpp"

namespace dmc {

/// E[F log F] - E[F] log E[F]. Throws kNonPositiveInput unless min F > 0.
double entropy(const RandomVariable& f);

/// E[(1/F) sum_k (D_k F)^2].
double lsi_modified_rhs(const RandomVariable& f);
/// E[sum_k D_k F D_k log F].
double lsi_l1_rhs(const RandomVariable& f);

// The exponent forms below bound Ent[e^G] and need no positivity.

/// E[e^G sum_k p_k q_k h(|nabla_k G|)] with h(x) = x e^x - e^x + 1.
double lsi_optimal_rhs(const RandomVariable& g);
/// E[e^G sum_k p_k q_k h(nabla_k G)].
double lsi_sharp_rhs(const RandomVariable& g);
/// E[e^G sum_k sqrt(p_k q_k) |Y_k| h(nabla_k G)].
double lsi_intermediate_rhs(const RandomVariable& g);
/// E[e^G sum_k h(nabla_k G)].
double lsi_coarse_rhs(const RandomVariable& g);

/// x e^x - e^x + 1, evaluated without cancellation near 0.
double lsi_h(double x);

struct LsiReport {
  double entropy;
  double rhs_modified;
  double rhs_l1;
  double rhs_optimal;
  double rhs_sharp;
};

/// All four bounds for one positive F (the exponent forms use G = log F).
LsiReport lsi_report(const RandomVariable& f);

/// g(t) of the one-dimensional lemma behind the sharp inequality: rhs - lhs,
/// non-negative with g(a) = 0. Throws kProbabilityOutOfRange unless 0 < p < 1.
double one_dim_sharp_residual(double p, double t, double a);

struct Figure1Row {
  double p;
  double entropy;
  double rhs_modified;
  double rhs_l1;
  double rhs_optimal;
  double rhs_sharp;
};

/// One-variable table over p = 0.01, 0.02, ..., 0.99 with f(1) = f_up, f(-1) = f_down.
std::vector<Figure1Row> figure1_table(double f_up = 1.0, double f_down = 3.5);

// Deviation bounds ----------------------------------------------------------

/// max_{k, w} |F_k^+ - F_k^-|.
double increment_bound(const RandomVariable& f);
/// max_w sum_k (D_k F(w))^2.
double gradient_sup_norm_sq(const RandomVariable& f);
/// max_w sum_k |D_k F(w)| max_w' |D_k F(w')| / (2 (p_k ^ q_k)).
double gaussian_constant_sq(const RandomVariable& f);

/// exp(-(|DF|^2 / K^2) g(x K / |DF|^2)), g(u) = (1 + u) log(1 + u) - u.
/// Returns 1 for x <= 0; throws kDegenerateGradient when DF = 0 and x > 0.
double deviation_bound_poisson_type(const RandomVariable& f, double x);
/// The weaker form exp(-(x / 2K) log(1 + x K / |DF|^2)).
double deviation_bound_poisson_weak(const RandomVariable& f, double x);
/// exp(-x^2 / (2 K^2)) with K^2 from gaussian_constant_sq.
double deviation_bound_gaussian(const RandomVariable& f, double x);

/// P(F - E[F] >= x) by enumeration.
double exact_tail(const RandomVariable& f, double x);

struct DeviationReport {
  std::vector<double> x;
  std::vector<double> poisson_type;
  std::vector<double> poisson_weak;
  std::vector<double> gaussian;
  std::vector<double> exact;
  double increment_bound;
  double gradient_norm_sq;
  double gaussian_k2;
};

/// Evaluates all bounds on `points` equally spaced x in [0, max(F - E[F])].
DeviationReport deviation_report(const RandomVariable& f, int points = 20);

}  // namespace dmc
