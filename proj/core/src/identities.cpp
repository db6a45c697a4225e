#include "dmc/identities.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "dmc/malliavin.hpp"

namespace dmc {

RandomVariable ClarkDecomposition::reconstruct() const {
  RandomVariable out = integral(integrand);
  out += mean;
  return out;
}

namespace {

ProcessRV predictable_gradient_projection(const RandomVariable& f, int from) {
  const SpacePtr& sp = f.space();
  std::vector<RandomVariable> u;
  u.reserve(static_cast<std::size_t>(sp->dimension()));
  for (int k = 0; k < sp->dimension(); ++k) {
    if (k <= from) {
      u.emplace_back(sp, 0.0);
    } else {
      u.push_back(conditional_expectation(gradient(f, k), k - 1));
    }
  }
  return ProcessRV(std::move(u), Measurability::kPredictable);
}

/// Visits every strictly increasing tuple k_1 < ... < k_d of {0..N} with the
/// iterated gradients of f and g along it.
void for_each_increasing_tuple(
    const RandomVariable& f, const RandomVariable& g, int d,
    const std::function<void(int last, const RandomVariable&, const RandomVariable&)>& visit) {
  const int dim = f.space()->dimension();
  std::function<void(int, int, const RandomVariable&, const RandomVariable&)> rec =
      [&](int start, int remaining, const RandomVariable& df, const RandomVariable& dg) {
        for (int k = start; k <= dim - remaining; ++k) {
          RandomVariable nf = gradient(df, k);
          RandomVariable ng = gradient(dg, k);
          if (remaining == 1) {
            visit(k, nf, ng);
          } else {
            rec(k + 1, remaining - 1, nf, ng);
          }
        }
      };
  if (d >= 1 && d <= dim) rec(0, d, f, g);
}

}  // namespace

ClarkDecomposition clark(const RandomVariable& f) {
  return ClarkDecomposition{expectation(f), predictable_gradient_projection(f, kInitialTime)};
}

ClarkTail clark_from(const RandomVariable& f, int a) {
  if (a < kInitialTime || a > f.space()->horizon()) {
    throw Error(Errc::kTimeIndexOutOfRange, "split time " + std::to_string(a));
  }
  return ClarkTail{conditional_expectation(f, a), predictable_gradient_projection(f, a)};
}

double clark_energy_residual(const RandomVariable& f, int a) {
  const ClarkTail t = clark_from(f, a);
  return expectation(f * f) - expectation(t.head * t.head) -
         expectation(inner_product(t.integrand, t.integrand));
}

double martingale_defect(const std::vector<RandomVariable>& m) {
  if (m.empty()) throw Error(Errc::kInvalidInput, "empty martingale");
  const SpacePtr& sp = m.front().space();
  if (m.size() != static_cast<std::size_t>(sp->dimension()) + 1) {
    throw Error(Errc::kIndexOutOfRange, "martingale needs M_{-1}..M_N");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const int n = static_cast<int>(i) - 1;
    // Adaptedness: M_n equals its own projection on F_n.
    worst = std::max(worst, max_abs_diff(m[i], conditional_expectation(m[i], n)));
    if (i + 1 < m.size()) {
      worst = std::max(worst, max_abs_diff(conditional_expectation(m[i + 1], n), m[i]));
    }
  }
  return worst;
}

ProcessRV martingale_representation(const std::vector<RandomVariable>& m, double tol) {
  const double defect = martingale_defect(m);
  double scale = 1.0;
  for (const auto& x : m) scale = std::max(scale, x.max_abs());
  if (defect > tol * scale) {
    throw Error(Errc::kNotAMartingale, "defect " + std::to_string(defect));
  }
  const SpacePtr& sp = m.front().space();
  std::vector<RandomVariable> u;
  for (int k = 0; k < sp->dimension(); ++k) {
    u.push_back(conditional_expectation(gradient(m[static_cast<std::size_t>(k) + 1], k), k - 1));
  }
  return ProcessRV(std::move(u), Measurability::kPredictable);
}

PoincareSides poincare_sides(const RandomVariable& f) {
  const double mean = expectation(f);
  const double var = expectation(f * f) - mean * mean;
  return {var, expectation(gradient_all(f).squared_norm())};
}

double covariance_direct(const RandomVariable& f, const RandomVariable& g) {
  const RandomVariable fc = f + (-expectation(f));
  const RandomVariable gc = g + (-expectation(g));
  return expectation(fc * gc);
}

double covariance_clark(const RandomVariable& f, const RandomVariable& g) {
  const SpacePtr& sp = f.space();
  RandomVariable acc(sp, 0.0);
  for (int k = 0; k < sp->dimension(); ++k) {
    acc += conditional_expectation(gradient(g, k), k - 1) * gradient(f, k);
  }
  return expectation(acc);
}

double covariance_semigroup(const RandomVariable& f, const RandomVariable& g) {
  const SpacePtr& sp = f.space();
  RandomVariable acc(sp, 0.0);
  for (int k = 0; k < sp->dimension(); ++k) {
    acc += gradient(f, k) * resolvent(gradient(g, k));
  }
  return expectation(acc);
}

double iterated_gradient_energy(const RandomVariable& f, const RandomVariable& g, int d) {
  RandomVariable acc(f.space(), 0.0);
  for_each_increasing_tuple(f, g, d, [&](int, const RandomVariable& df, const RandomVariable& dg) {
    acc += df * dg;
  });
  return expectation(acc);
}

double iterated_remainder(const RandomVariable& f, const RandomVariable& g, int n) {
  RandomVariable acc(f.space(), 0.0);
  for_each_increasing_tuple(f, g, n + 1,
                            [&](int last, const RandomVariable& df, const RandomVariable& dg) {
                              acc += df * conditional_expectation(dg, last - 1);
                            });
  return expectation(acc);
}

double covariance_iterated(const RandomVariable& f, const RandomVariable& g, int n) {
  if (n < 0) throw Error(Errc::kOrderMismatch, "iteration order must be >= 0");
  double total = 0.0;
  for (int d = 1; d <= n; ++d) {
    const double sign = (d % 2 == 1) ? 1.0 : -1.0;
    total += sign * iterated_gradient_energy(f, g, d);
  }
  const double rsign = (n % 2 == 0) ? 1.0 : -1.0;
  return total + rsign * iterated_remainder(f, g, n);
}

VarianceBounds variance_sandwich(const RandomVariable& f, int n) {
  if (n < 1) throw Error(Errc::kOrderMismatch, "sandwich order must be >= 1");
  // The 1/k! weighted norm over ordered distinct tuples equals the plain sum
  // over increasing tuples.
  double upper = 0.0;
  double lower = 0.0;
  for (int d = 1; d <= 2 * n; ++d) {
    const double term = ((d % 2 == 1) ? 1.0 : -1.0) * iterated_gradient_energy(f, f, d);
    lower += term;
    if (d <= 2 * n - 1) upper += term;
  }
  return {lower, upper};
}

bool is_nondecreasing(const RandomVariable& f, double tol) {
  const double scaled = tol * std::max(1.0, f.max_abs());
  for (int k = 0; k < f.space()->dimension(); ++k) {
    if (gradient(f, k).min() < -scaled) return false;
  }
  return true;
}

FkgResult fkg_check(const RandomVariable& f, const RandomVariable& g, double tol) {
  FkgResult r{is_nondecreasing(f, tol), is_nondecreasing(g, tol), covariance_direct(f, g), true};
  const double scaled = tol * std::max(1.0, f.max_abs() * g.max_abs());
  for (int k = 0; k < f.space()->dimension(); ++k) {
    const RandomVariable prod = conditional_expectation(gradient(f, k), k - 1) *
                                conditional_expectation(gradient(g, k), k - 1);
    if (prod.min() < -scaled) {
      r.predictable_gradients_aligned = false;
      break;
    }
  }
  return r;
}

}  // namespace dmc
