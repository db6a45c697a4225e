#pragma once

// Finite Bernoulli sample space {-1,1}^{N+1} under a product measure.
//
// Outcomes are bit masks: bit k holds Z_k = (1 + X_k) / 2, bit 0 is time 0.
// Every random variable is a dense table of 2^{N+1} values, so conditional
// expectations, gradients and integrals are exact finite sums.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "dmc/error.hpp"

namespace dmc {

inline constexpr int kDefaultMaxHorizon = 24;
inline constexpr double kProbabilityGuard = 1e-9;

/// Time index of the trivial sigma-field F_{-1}.
inline constexpr int kInitialTime = -1;

class OutcomeIndex {
 public:
  constexpr OutcomeIndex() = default;
  constexpr explicit OutcomeIndex(std::uint64_t bits) : bits_(bits) {}

  constexpr std::uint64_t value() const { return bits_; }
  constexpr bool up(int k) const { return ((bits_ >> k) & 1U) != 0; }
  /// Canonical projection X_k in {-1, +1}.
  constexpr int x(int k) const { return up(k) ? 1 : -1; }
  constexpr OutcomeIndex with_bit(int k, bool set) const {
    const std::uint64_t m = std::uint64_t{1} << k;
    return OutcomeIndex(set ? (bits_ | m) : (bits_ & ~m));
  }

  friend constexpr bool operator==(OutcomeIndex, OutcomeIndex) = default;

 private:
  std::uint64_t bits_ = 0;
};

class BernoulliSpace {
 public:
  BernoulliSpace(int horizon, std::vector<double> p, int max_horizon = kDefaultMaxHorizon);

  int horizon() const { return horizon_; }
  /// Number of coordinates, N + 1.
  int dimension() const { return horizon_ + 1; }
  /// Number of outcomes, 2^{N+1}.
  std::size_t size() const { return std::size_t{1} << dimension(); }

  double p(int k) const { return coord(k).p; }
  double q(int k) const { return coord(k).q; }
  double phi(int k) const { return coord(k).phi; }
  double sqrt_pq(int k) const { return coord(k).sqrt_pq; }
  double y_plus(int k) const { return coord(k).y_plus; }
  double y_minus(int k) const { return coord(k).y_minus; }
  const std::vector<double>& p_values() const { return p_; }

  /// Y_k evaluated on the branch selected by `up`.
  double y(int k, bool up) const { return up ? coord(k).y_plus : coord(k).y_minus; }

  bool contains(OutcomeIndex w) const { return w.value() < size(); }

  /// P({w}); throws kIndexOutOfRange.
  double probability(OutcomeIndex w) const;
  /// P({w}) for every outcome, ascending index.
  std::span<const double> probabilities() const { return weights_; }

  bool constant_p(double tol = 0.0) const;

  friend bool operator==(const BernoulliSpace& a, const BernoulliSpace& b) {
    return a.horizon_ == b.horizon_ && a.p_ == b.p_;
  }

 private:
  struct Coord {
    double p, q, phi, sqrt_pq, y_plus, y_minus;
  };
  const Coord& coord(int k) const;

  int horizon_;
  std::vector<double> p_;
  std::vector<Coord> coords_;
  std::vector<double> weights_;
};

using SpacePtr = std::shared_ptr<const BernoulliSpace>;

/// Validates the inputs and builds the space. Errors: kHorizonTooLarge,
/// kProbabilityOutOfRange.
SpacePtr new_space(int horizon, std::vector<double> p, int max_horizon = kDefaultMaxHorizon);

/// Convenience: all coordinates share the same success probability.
SpacePtr new_uniform_space(int horizon, double p, int max_horizon = kDefaultMaxHorizon);

double outcome_probability(const BernoulliSpace& space, OutcomeIndex w);

class RandomVariable {
 public:
  RandomVariable(SpacePtr space, std::vector<double> values);
  /// The constant variable c.
  RandomVariable(SpacePtr space, double c);

  static RandomVariable from_function(SpacePtr space,
                                      const std::function<double(OutcomeIndex)>& f);

  const SpacePtr& space() const { return space_; }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const& { return values_; }
  std::vector<double> values() && { return std::move(values_); }
  std::vector<double>& mutable_values() { return values_; }

  double operator[](std::size_t w) const { return values_[w]; }
  double at(OutcomeIndex w) const;

  double max_abs() const;
  double min() const;
  double max() const;

  RandomVariable map(const std::function<double(double)>& f) const;

  RandomVariable& operator+=(const RandomVariable& o);
  RandomVariable& operator-=(const RandomVariable& o);
  RandomVariable& operator*=(const RandomVariable& o);
  RandomVariable& operator*=(double c);
  RandomVariable& operator+=(double c);

  friend RandomVariable operator+(RandomVariable a, const RandomVariable& b) { return a += b; }
  friend RandomVariable operator-(RandomVariable a, const RandomVariable& b) { return a -= b; }
  friend RandomVariable operator*(RandomVariable a, const RandomVariable& b) { return a *= b; }
  friend RandomVariable operator*(RandomVariable a, double c) { return a *= c; }
  friend RandomVariable operator*(double c, RandomVariable a) { return a *= c; }
  friend RandomVariable operator+(RandomVariable a, double c) { return a += c; }
  friend RandomVariable operator-(RandomVariable a) { return a *= -1.0; }

 private:
  void check_same_space(const RandomVariable& o) const;

  SpacePtr space_;
  std::vector<double> values_;
};

/// sup_w |a(w) - b(w)|.
double max_abs_diff(const RandomVariable& a, const RandomVariable& b);

/// True when `f` takes the same value (within `tol`) on both branches of
/// every bit in [first_bit, N].
bool independent_of_bits_from(const RandomVariable& f, int first_bit, double tol);

enum class Measurability { kUnrestricted, kAdapted, kPredictable };

/// A process u_0..u_N on one space with a declared measurability, checked
/// by bit-flip invariance at construction.
class ProcessRV {
 public:
  ProcessRV(std::vector<RandomVariable> entries, Measurability tag = Measurability::kUnrestricted,
            double tol = 1e-12);

  static ProcessRV zero(SpacePtr space, Measurability tag = Measurability::kPredictable);

  const SpacePtr& space() const { return entries_.front().space(); }
  Measurability tag() const { return tag_; }
  std::size_t length() const { return entries_.size(); }
  const RandomVariable& operator[](std::size_t k) const { return entries_[k]; }
  const std::vector<RandomVariable>& entries() const& { return entries_; }
  std::vector<RandomVariable> entries() && { return std::move(entries_); }

 private:
  std::vector<RandomVariable> entries_;
  Measurability tag_;
};

bool is_predictable(const ProcessRV& u, double tol = 1e-12);
bool is_adapted(const ProcessRV& u, double tol = 1e-12);

/// Sum over outcomes of F(w) P(w), ascending outcome order.
double expectation(const RandomVariable& f);

/// E[F | F_n] for -1 <= n <= N, stored as a full table that depends only on
/// bits 0..n.
RandomVariable conditional_expectation(const RandomVariable& f, int n);

RandomVariable y_rv(const SpacePtr& space, int k);
RandomVariable x_rv(const SpacePtr& space, int k);
/// S_n = sum_{k<=n} (1 + X_k) / 2; n = -1 gives 0.
RandomVariable s_rv(const SpacePtr& space, int n);
/// Y_A = prod_{k in A} Y_k for a subset mask A.
RandomVariable y_product(const SpacePtr& space, std::uint64_t subset);

/// J(u) = sum_k u_k Y_k for a predictable u. Throws kNotPredictable.
RandomVariable integral(const ProcessRV& u);
/// J(u 1_{[0,k]}), which equals E[J(u) | F_k].
RandomVariable integral_partial(const ProcessRV& u, int k);

/// sum_k u_k v_k pointwise.
RandomVariable inner_product(const ProcessRV& u, const ProcessRV& v);

}  // namespace dmc
