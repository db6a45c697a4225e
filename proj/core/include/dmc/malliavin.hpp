#pragma once

// Finite-difference gradient D, the signed gradient nabla, the divergence
// (Skorohod integral) delta, the Ornstein-Uhlenbeck operator L = delta D and
// its semigroup P_t = exp(-tL).

#include <utility>
#include <vector>

#include "dmc/bernoulli_space.hpp"
#include "dmc/chaos.hpp"

namespace dmc {

using SkorohodProcess = ProcessRV;

struct GradientField {
  std::vector<RandomVariable> columns;  // D_0 F, ..., D_N F

  /// sum_k (D_k F)^2 pointwise.
  RandomVariable squared_norm() const;
  /// Views the field as an (unrestricted) process.
  ProcessRV as_process() const { return ProcessRV(columns); }
};

/// D_k F(w) = sqrt(p_k q_k) (F(w_+^k) - F(w_-^k)).
RandomVariable gradient(const RandomVariable& f, int k);
GradientField gradient_all(const RandomVariable& f);

/// D_{k_d} ... D_{k_1} F for the listed coordinates.
RandomVariable iterated_gradient(const RandomVariable& f, const std::vector<int>& ks);

/// nabla_k F = X_k (F_k^- - F_k^+).
RandomVariable nabla(const RandomVariable& f, int k);

/// sup_w |D_k(FG) - F D_k G - G D_k F + X_k/sqrt(p_k q_k) D_k F D_k G|.
double product_rule_residual(const RandomVariable& f, const RandomVariable& g, int k);

/// delta(u) computed in the Walsh domain: the coefficient on Y_C is
/// sum_{k in C} of the coefficient of u_k on Y_{C \ k}.
RandomVariable divergence(const SkorohodProcess& u);

/// delta(u) = sum u_k Y_k - sum D_k u_k - delta(phi D u), evaluated pointwise.
RandomVariable divergence_pointwise(const SkorohodProcess& u);

struct IsometrySides {
  double lhs;
  double rhs;
};

/// E[delta(u)^2] against E[|u|^2] + E[sum_{k != l} D_k u_l D_l u_k - sum_k (D_k u_k)^2].
IsometrySides skorohod_isometry_sides(const SkorohodProcess& u);

/// L F: Walsh coefficient a_A multiplied by |A|.
RandomVariable ou_operator(const RandomVariable& f);

/// P_t F: Walsh coefficient a_A multiplied by exp(-|A| t). Throws kNegativeTime.
RandomVariable semigroup(const RandomVariable& f, double t);

/// P_t F evaluated through the kernel q_t^N(w~, w) = prod_i (1 + e^{-t} Y_i(w) Y_i(w~)).
/// Quadratic in the number of outcomes.
RandomVariable semigroup_kernel(const RandomVariable& f, double t);

/// Row sums sum_w q_t^N(w~, w) P(w), one per w~ (all equal to 1).
std::vector<double> semigroup_kernel_row_mass(const SpacePtr& space, double t);

/// (I + L)^{-1} F: Walsh coefficient a_A multiplied by 1 / (1 + |A|).
RandomVariable resolvent(const RandomVariable& f);

/// P_t applied entry-wise to a process.
ProcessRV semigroup_process(const ProcessRV& u, double t);

/// lhs = sup_w |P_t u|_{l2}(w), rhs = sup_w |u|_{l2}(w).
IsometrySides semigroup_process_contraction_check(const ProcessRV& u, double t);

/// Beyond this time the semigroup returns E[F]; exp(-40) is below double resolution.
inline constexpr double kSemigroupSaturation = 40.0;

}  // namespace dmc
