#pragma once

// Clark predictable representation and the covariance identities built on it.

#include <utility>
#include <vector>

#include "dmc/bernoulli_space.hpp"

namespace dmc {

struct ClarkDecomposition {
  double mean;           // E[F]
  ProcessRV integrand;   // u_k = E[D_k F | F_{k-1}], predictable

  /// mean + sum_k u_k Y_k.
  RandomVariable reconstruct() const;
};

ClarkDecomposition clark(const RandomVariable& f);

struct ClarkTail {
  RandomVariable head;   // E[F | F_a]
  ProcessRV integrand;   // E[D_k F | F_{k-1}] for k > a, zero for k <= a
};

/// F = E[F | F_a] + sum_{k > a} E[D_k F | F_{k-1}] Y_k, for -1 <= a <= N.
ClarkTail clark_from(const RandomVariable& f, int a);

/// E[F^2] - E[E[F|F_a]^2] - E[sum_{k>a} u_k^2].
double clark_energy_residual(const RandomVariable& f, int a);

/// Predictable u with M_n = M_{-1} + sum_{k<=n} u_k Y_k. `m` holds
/// M_{-1}, M_0, ..., M_N. Throws kNotAMartingale when adaptedness or
/// E[M_{n+1} | F_n] = M_n fails beyond `tol`.
ProcessRV martingale_representation(const std::vector<RandomVariable>& m, double tol = 1e-10);

/// Checks adaptedness and the martingale property; returns the worst defect.
double martingale_defect(const std::vector<RandomVariable>& m);

struct PoincareSides {
  double variance;
  double energy;  // E[sum_k (D_k F)^2]
};
PoincareSides poincare_sides(const RandomVariable& f);

double covariance_direct(const RandomVariable& f, const RandomVariable& g);
/// E[sum_k E[D_k G | F_{k-1}] D_k F].
double covariance_clark(const RandomVariable& f, const RandomVariable& g);
/// E[sum_k D_k F (I + L)^{-1} D_k G], the time integral against e^{-t} P_t in closed form.
double covariance_semigroup(const RandomVariable& f, const RandomVariable& g);
/// Iterated identity of order n: alternating gradient sums up to order n
/// plus the conditioned order-(n+1) remainder.
double covariance_iterated(const RandomVariable& f, const RandomVariable& g, int n);

/// E[sum over increasing d-tuples (D_{k_d}..D_{k_1} F)(D_{k_d}..D_{k_1} G)].
double iterated_gradient_energy(const RandomVariable& f, const RandomVariable& g, int d);
/// Order-(n+1) remainder term without its sign.
double iterated_remainder(const RandomVariable& f, const RandomVariable& g, int n);

struct VarianceBounds {
  double lower;
  double upper;
};
/// Partial sums of the alternating gradient-energy series with 2n and 2n-1 terms.
VarianceBounds variance_sandwich(const RandomVariable& f, int n);

struct FkgResult {
  bool monotone_f;
  bool monotone_g;
  double covariance;
  /// E[D_k F | F_{k-1}] E[D_k G | F_{k-1}] >= 0 for every k.
  bool predictable_gradients_aligned;
};
FkgResult fkg_check(const RandomVariable& f, const RandomVariable& g, double tol = 1e-12);

/// D_k F >= -tol for every k: sufficient for F to be non-decreasing.
bool is_nondecreasing(const RandomVariable& f, double tol = 1e-12);

}  // namespace dmc
