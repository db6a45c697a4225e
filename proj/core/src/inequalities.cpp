#include "dmc/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dmc/malliavin.hpp"

namespace dmc {

namespace {

void require_positive(const RandomVariable& f) {
  const double m = f.min();
  if (!(m > 0.0)) {
    throw Error(Errc::kNonPositiveInput, "min F = " + std::to_string(m));
  }
}

double xlogx(double x) { return x * std::log(x); }

/// E[e^G sum_k w_k(w) h(s * nabla_k G)] where s selects signed or absolute use.
template <class Weight, class Shape>
double exponent_bound(const RandomVariable& g, Weight weight, Shape shape) {
  const BernoulliSpace& sp = *g.space();
  const auto prob = sp.probabilities();
  double total = 0.0;
  for (std::size_t w = 0; w < g.size(); ++w) {
    double s = 0.0;
    for (int k = 0; k < sp.dimension(); ++k) {
      const std::size_t m = std::size_t{1} << k;
      const bool up = (w & m) != 0;
      const double x = up ? 1.0 : -1.0;
      const double nab = x * (g[w & ~m] - g[w | m]);
      s += weight(k, up) * lsi_h(shape(nab));
    }
    total += prob[w] * std::exp(g[w]) * s;
  }
  return total;
}

double identity(double v) { return v; }

}  // namespace

double lsi_h(double x) {
  // x e^x - (e^x - 1)
  return x * std::exp(x) - std::expm1(x);
}

double entropy(const RandomVariable& f) {
  require_positive(f);
  const double mean = expectation(f);
  return expectation(f.map(xlogx)) - xlogx(mean);
}

double lsi_modified_rhs(const RandomVariable& f) {
  require_positive(f);
  const RandomVariable norm = gradient_all(f).squared_norm();
  return expectation(norm * f.map([](double v) { return 1.0 / v; }));
}

double lsi_l1_rhs(const RandomVariable& f) {
  require_positive(f);
  const RandomVariable lf = f.map([](double v) { return std::log(v); });
  RandomVariable acc(f.space(), 0.0);
  for (int k = 0; k < f.space()->dimension(); ++k) acc += gradient(f, k) * gradient(lf, k);
  return expectation(acc);
}

double lsi_optimal_rhs(const RandomVariable& g) {
  const BernoulliSpace& sp = *g.space();
  return exponent_bound(
      g, [&](int k, bool) { return sp.p(k) * sp.q(k); }, [](double v) { return std::abs(v); });
}

double lsi_sharp_rhs(const RandomVariable& g) {
  const BernoulliSpace& sp = *g.space();
  return exponent_bound(g, [&](int k, bool) { return sp.p(k) * sp.q(k); }, identity);
}

double lsi_intermediate_rhs(const RandomVariable& g) {
  const BernoulliSpace& sp = *g.space();
  return exponent_bound(
      g, [&](int k, bool up) { return sp.sqrt_pq(k) * std::abs(sp.y(k, up)); }, identity);
}

double lsi_coarse_rhs(const RandomVariable& g) {
  return exponent_bound(g, [](int, bool) { return 1.0; }, identity);
}

LsiReport lsi_report(const RandomVariable& f) {
  const double ent = entropy(f);
  const RandomVariable g = f.map([](double v) { return std::log(v); });
  return {ent, lsi_modified_rhs(f), lsi_l1_rhs(f), lsi_optimal_rhs(g), lsi_sharp_rhs(g)};
}

double one_dim_sharp_residual(double p, double t, double a) {
  if (!(p > 0.0 && p < 1.0)) {
    throw Error(Errc::kProbabilityOutOfRange, "p = " + std::to_string(p));
  }
  const double q = 1.0 - p;
  const double d = t - a;
  const double ed = std::exp(d);
  const double mix = 1.0 + p * std::expm1(d);  // p e^d + q
  const double inner = p * q * (q * lsi_h(d) + p * ed * lsi_h(-d)) - p * d * ed +
                       mix * std::log1p(p * std::expm1(d));
  return std::exp(a) * inner;
}

std::vector<Figure1Row> figure1_table(double f_up, double f_down) {
  std::vector<Figure1Row> rows;
  rows.reserve(99);
  for (int i = 1; i <= 99; ++i) {
    const double p = i / 100.0;
    const SpacePtr sp = new_uniform_space(0, p);
    const RandomVariable f(sp, std::vector<double>{f_down, f_up});
    const LsiReport r = lsi_report(f);
    rows.push_back({p, r.entropy, r.rhs_modified, r.rhs_l1, r.rhs_optimal, r.rhs_sharp});
  }
  return rows;
}

double increment_bound(const RandomVariable& f) {
  double k = 0.0;
  for (int i = 0; i < f.space()->dimension(); ++i) {
    const std::size_t m = std::size_t{1} << i;
    for (std::size_t w = 0; w < f.size(); ++w) {
      if (w & m) continue;
      k = std::max(k, std::abs(f[w | m] - f[w]));
    }
  }
  return k;
}

double gradient_sup_norm_sq(const RandomVariable& f) {
  return gradient_all(f).squared_norm().max();
}

double gaussian_constant_sq(const RandomVariable& f) {
  const BernoulliSpace& sp = *f.space();
  RandomVariable acc(f.space(), 0.0);
  for (int k = 0; k < sp.dimension(); ++k) {
    const RandomVariable dk = gradient(f, k);
    const double c = dk.max_abs() / (2.0 * std::min(sp.p(k), sp.q(k)));
    acc += dk.map([](double v) { return std::abs(v); }) * c;
  }
  return acc.max();
}

namespace {

double check_degenerate(double norm_sq) {
  if (norm_sq <= 0.0) {
    throw Error(Errc::kDegenerateGradient, "DF vanishes, no bound for x > 0");
  }
  return norm_sq;
}

}  // namespace

double deviation_bound_poisson_type(const RandomVariable& f, double x) {
  if (x <= 0.0) return 1.0;
  const double n2 = check_degenerate(gradient_sup_norm_sq(f));
  const double k = increment_bound(f);
  if (k <= 1e-12) return std::exp(-x * x / (2.0 * n2));
  const double u = x * k / n2;
  const double g = (1.0 + u) * std::log1p(u) - u;
  return std::exp(-(n2 / (k * k)) * g);
}

double deviation_bound_poisson_weak(const RandomVariable& f, double x) {
  if (x <= 0.0) return 1.0;
  const double n2 = check_degenerate(gradient_sup_norm_sq(f));
  const double k = increment_bound(f);
  if (k <= 1e-12) return std::exp(-x * x / (2.0 * n2));
  return std::exp(-(x / (2.0 * k)) * std::log1p(x * k / n2));
}

double deviation_bound_gaussian(const RandomVariable& f, double x) {
  if (x <= 0.0) return 1.0;
  const double k2 = check_degenerate(gaussian_constant_sq(f));
  return std::exp(-x * x / (2.0 * k2));
}

double exact_tail(const RandomVariable& f, double x) {
  const double mean = expectation(f);
  const double threshold = x - 1e-12 * (1.0 + std::abs(x));
  const auto prob = f.space()->probabilities();
  double tail = 0.0;
  for (std::size_t w = 0; w < f.size(); ++w) {
    if (f[w] - mean >= threshold) tail += prob[w];
  }
  return std::min(tail, 1.0);
}

DeviationReport deviation_report(const RandomVariable& f, int points) {
  if (points < 2) throw Error(Errc::kInvalidInput, "need at least two grid points");
  DeviationReport r;
  r.increment_bound = increment_bound(f);
  r.gradient_norm_sq = gradient_sup_norm_sq(f);
  r.gaussian_k2 = gaussian_constant_sq(f);
  const double top = std::max(0.0, f.max() - expectation(f));
  const bool flat = r.gradient_norm_sq <= 0.0;
  for (int i = 0; i < points; ++i) {
    const double x = top * i / (points - 1);
    r.x.push_back(x);
    r.exact.push_back(exact_tail(f, x));
    if (flat) {
      // Constant F: only x = 0 is on the grid, where every bound is 1.
      r.poisson_type.push_back(1.0);
      r.poisson_weak.push_back(1.0);
      r.gaussian.push_back(1.0);
      continue;
    }
    r.poisson_type.push_back(deviation_bound_poisson_type(f, x));
    r.poisson_weak.push_back(deviation_bound_poisson_weak(f, x));
    r.gaussian.push_back(deviation_bound_gaussian(f, x));
  }
  return r;
}

}  // namespace dmc
