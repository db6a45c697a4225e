#pragma once

// Walsh / chaos algebra on a Bernoulli space.
//
// The products Y_A = prod_{k in A} Y_k, A subset of {0..N}, form an
// orthonormal basis of L^2(Omega). A ChaosExpansion stores the coefficients
// a_A = E[F Y_A]; the order-n chaos of F is the multiple integral
// J_n(f_n) with a_A = n! f_n(sorted A).

#include <cstdint>
#include <map>
#include <vector>

#include "dmc/bernoulli_space.hpp"

namespace dmc {

using SubsetMask = std::uint64_t;

std::vector<int> subset_indices(SubsetMask a);
SubsetMask subset_mask(const std::vector<int>& indices);

/// Kernel f_n stored on strictly increasing index tuples. Diagonal values
/// never enter J_n, so they are not representable.
class SymmetricKernel {
 public:
  explicit SymmetricKernel(int order);
  /// Order-0 kernel holding a scalar.
  static SymmetricKernel scalar(double c);

  int order() const { return order_; }
  /// Sets f(k_1..k_n); throws kInvalidInput unless strictly increasing.
  void set(const std::vector<int>& indices, double value);
  double at(const std::vector<int>& indices) const;
  const std::map<std::vector<int>, double>& entries() const { return entries_; }

 private:
  int order_;
  std::map<std::vector<int>, double> entries_;
};

/// Symmetrization of an arbitrary n-variable function given on finitely
/// many tuples: f~(i) = (1/n!) sum over permutations. Tuples with a repeated
/// index fall on the diagonal and are dropped.
SymmetricKernel symmetrize(const std::map<std::vector<int>, double>& raw, int order);

/// J_n(f_n) = n! sum_{k_1 < ... < k_n} f_n(k) Y_{k_1} ... Y_{k_n}. Orders
/// above N + 1 give the zero variable.
RandomVariable multiple_integral(const SpacePtr& space, const SymmetricKernel& f);

class ChaosExpansion {
 public:
  /// All-zero expansion.
  explicit ChaosExpansion(SpacePtr space);
  ChaosExpansion(SpacePtr space, std::vector<double> dense_coeffs);

  const SpacePtr& space() const { return space_; }
  double coeff(SubsetMask a) const;
  void set(SubsetMask a, double value);
  /// Dense view indexed by subset mask.
  const std::vector<double>& coeffs() const { return coeffs_; }

  /// Subsets with |a_A| > threshold, ordered by size then mask.
  std::vector<std::pair<SubsetMask, double>> nonzero(double threshold = 0.0) const;

 private:
  SpacePtr space_;
  std::vector<double> coeffs_;
};

/// a_A = E[F Y_A] for every subset, via the per-coordinate tensor transform.
ChaosExpansion walsh_decompose(const RandomVariable& f);
/// sum_A a_A Y_A.
RandomVariable walsh_reconstruct(const ChaosExpansion& e);

/// Keeps subsets of {0..n}; equals the expansion of E[F | F_n].
ChaosExpansion chaos_truncate(const ChaosExpansion& e, int n);

SymmetricKernel kernel_of_order(const ChaosExpansion& e, int n);
ChaosExpansion expansion_from_kernels(const SpacePtr& space,
                                      const std::vector<SymmetricKernel>& kernels);

struct KrawtchoukResult {
  RandomVariable value;        // J_n(1_{[0,N]^n})
  std::vector<double> table;   // s -> value on {S_N = s}, s = 0..N+1
  bool measurable;             // equal values on equal S_N
  double max_spread;           // largest deviation within a level set
  int degree;                  // degree of the induced polynomial; -1 for zero
};

/// Evaluates the constant-kernel multiple integral of order n and its
/// induced polynomial in S_N. Requires constant p (kNonConstantP).
KrawtchoukResult krawtchouk_check(const SpacePtr& space, int n, double tol = 1e-12);

/// Degree of the polynomial interpolating `table` at 0..m-1, judged by
/// vanishing finite differences relative to the table scale.
int interpolation_degree(const std::vector<double>& table, double rel_tol = 1e-9);

}  // namespace dmc
