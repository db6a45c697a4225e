#include "dmc/malliavin.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <string>

namespace dmc {

namespace {

void check_time(double t) {
  if (!(t >= 0.0)) throw Error(Errc::kNegativeTime, "t = " + std::to_string(t));
}

/// Multiplies each Walsh coefficient a_A by weight(|A|).
template <class Weight>
RandomVariable spectral_multiply(const RandomVariable& f, Weight weight) {
  ChaosExpansion e = walsh_decompose(f);
  std::vector<double> c = e.coeffs();
  const int dim = f.space()->dimension();
  std::vector<double> w(static_cast<std::size_t>(dim) + 1);
  for (int n = 0; n <= dim; ++n) w[static_cast<std::size_t>(n)] = weight(n);
  for (SubsetMask a = 0; a < c.size(); ++a) c[a] *= w[static_cast<std::size_t>(std::popcount(a))];
  return walsh_reconstruct(ChaosExpansion(f.space(), std::move(c)));
}

}  // namespace

RandomVariable GradientField::squared_norm() const {
  RandomVariable out(columns.front().space(), 0.0);
  for (const auto& c : columns) out += c * c;
  return out;
}

RandomVariable gradient(const RandomVariable& f, int k) {
  const BernoulliSpace& sp = *f.space();
  const double s = sp.sqrt_pq(k);  // validates k
  const std::size_t m = std::size_t{1} << k;
  RandomVariable out(f.space(), 0.0);
  auto& v = out.mutable_values();
  for (std::size_t w = 0; w < v.size(); ++w) v[w] = s * (f[w | m] - f[w & ~m]);
  return out;
}

GradientField gradient_all(const RandomVariable& f) {
  GradientField g;
  g.columns.reserve(static_cast<std::size_t>(f.space()->dimension()));
  for (int k = 0; k < f.space()->dimension(); ++k) g.columns.push_back(gradient(f, k));
  return g;
}

RandomVariable iterated_gradient(const RandomVariable& f, const std::vector<int>& ks) {
  RandomVariable out = f;
  for (int k : ks) out = gradient(out, k);
  return out;
}

RandomVariable nabla(const RandomVariable& f, int k) {
  if (k < 0 || k > f.space()->horizon()) {
    throw Error(Errc::kIndexOutOfRange, "coordinate " + std::to_string(k));
  }
  const std::size_t m = std::size_t{1} << k;
  RandomVariable out(f.space(), 0.0);
  auto& v = out.mutable_values();
  for (std::size_t w = 0; w < v.size(); ++w) {
    const double x = (w & m) ? 1.0 : -1.0;
    v[w] = x * (f[w & ~m] - f[w | m]);
  }
  return out;
}

double product_rule_residual(const RandomVariable& f, const RandomVariable& g, int k) {
  const BernoulliSpace& sp = *f.space();
  const RandomVariable dfg = gradient(f * g, k);
  const RandomVariable df = gradient(f, k);
  const RandomVariable dg = gradient(g, k);
  const double inv_s = 1.0 / sp.sqrt_pq(k);
  const std::size_t m = std::size_t{1} << k;
  double worst = 0.0;
  for (std::size_t w = 0; w < f.size(); ++w) {
    const double x = (w & m) ? 1.0 : -1.0;
    const double r = dfg[w] - f[w] * dg[w] - g[w] * df[w] + x * inv_s * df[w] * dg[w];
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

RandomVariable divergence(const SkorohodProcess& u) {
  const SpacePtr& sp = u.space();
  std::vector<double> out(sp->size(), 0.0);
  for (int k = 0; k < sp->dimension(); ++k) {
    const ChaosExpansion ek = walsh_decompose(u[static_cast<std::size_t>(k)]);
    const SubsetMask bit = SubsetMask{1} << k;
    // Components of u_k already containing k sit on the diagonal and vanish.
    for (SubsetMask a = 0; a < out.size(); ++a) {
      if ((a & bit) == 0) out[a | bit] += ek.coeffs()[a];
    }
  }
  return walsh_reconstruct(ChaosExpansion(sp, std::move(out)));
}

RandomVariable divergence_pointwise(const SkorohodProcess& u) {
  const SpacePtr& sp = u.space();
  RandomVariable out(sp, 0.0);
  for (int k = 0; k < sp->dimension(); ++k) {
    const auto& uk = u[static_cast<std::size_t>(k)];
    const RandomVariable yk = y_rv(sp, k);
    const RandomVariable dk = gradient(uk, k);
    // v_k = phi_k D_k u_k does not depend on bit k, so delta(v) = sum v_k Y_k.
    const RandomVariable vk = dk * sp->phi(k);
    out += uk * yk;
    out -= dk;
    out -= vk * yk - gradient(vk, k);
  }
  return out;
}

IsometrySides skorohod_isometry_sides(const SkorohodProcess& u) {
  const SpacePtr& sp = u.space();
  const RandomVariable d = divergence(u);
  const double lhs = expectation(d * d);
  const int dim = sp->dimension();
  RandomVariable acc(sp, 0.0);
  for (int k = 0; k < dim; ++k) {
    const auto& uk = u[static_cast<std::size_t>(k)];
    acc += uk * uk;
    for (int l = 0; l < dim; ++l) {
      if (l == k) {
        const RandomVariable dkk = gradient(uk, k);
        acc -= dkk * dkk;
      } else {
        acc += gradient(u[static_cast<std::size_t>(l)], k) * gradient(uk, l);
      }
    }
  }
  return {lhs, expectation(acc)};
}

RandomVariable ou_operator(const RandomVariable& f) {
  return spectral_multiply(f, [](int n) { return static_cast<double>(n); });
}

RandomVariable semigroup(const RandomVariable& f, double t) {
  check_time(t);
  if (t >= kSemigroupSaturation) return RandomVariable(f.space(), expectation(f));
  return spectral_multiply(f, [t](int n) { return std::exp(-n * t); });
}

RandomVariable semigroup_kernel(const RandomVariable& f, double t) {
  check_time(t);
  const SpacePtr& sp = f.space();
  const int dim = sp->dimension();
  const double decay = std::exp(-t);
  // factor[i][b~][b] = 1 + e^{-t} Y_i(b) Y_i(b~)
  std::vector<std::array<std::array<double, 2>, 2>> factor(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) {
    for (int bt = 0; bt < 2; ++bt) {
      for (int b = 0; b < 2; ++b) {
        factor[static_cast<std::size_t>(i)][bt][b] = 1.0 + decay * sp->y(i, b != 0) * sp->y(i, bt != 0);
      }
    }
  }
  const auto prob = sp->probabilities();
  RandomVariable out(sp, 0.0);
  auto& v = out.mutable_values();
  for (std::size_t wt = 0; wt < v.size(); ++wt) {
    double s = 0.0;
    for (std::size_t w = 0; w < v.size(); ++w) {
      double q = 1.0;
      for (int i = 0; i < dim; ++i) {
        q *= factor[static_cast<std::size_t>(i)][(wt >> i) & 1U][(w >> i) & 1U];
      }
      s += f[w] * q * prob[w];
    }
    v[wt] = s;
  }
  return out;
}

std::vector<double> semigroup_kernel_row_mass(const SpacePtr& space, double t) {
  const RandomVariable one(space, 1.0);
  const RandomVariable rows = semigroup_kernel(one, t);
  return {rows.values().begin(), rows.values().end()};
}

RandomVariable resolvent(const RandomVariable& f) {
  return spectral_multiply(f, [](int n) { return 1.0 / (1.0 + n); });
}

ProcessRV semigroup_process(const ProcessRV& u, double t) {
  std::vector<RandomVariable> out;
  out.reserve(u.length());
  for (const auto& e : u.entries()) out.push_back(semigroup(e, t));
  return ProcessRV(std::move(out));
}

IsometrySides semigroup_process_contraction_check(const ProcessRV& u, double t) {
  const ProcessRV pu = semigroup_process(u, t);
  auto sup_l2 = [](const ProcessRV& x) {
    const RandomVariable n2 = inner_product(x, x);
    return std::sqrt(std::max(0.0, n2.max()));
  };
  return {sup_l2(pu), sup_l2(u)};
}

}  // namespace dmc
