#include "dmc/chaos.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

namespace dmc {

std::vector<int> subset_indices(SubsetMask a) {
  std::vector<int> out;
  for (int k = 0; a != 0; ++k, a >>= 1) {
    if (a & 1U) out.push_back(k);
  }
  return out;
}

SubsetMask subset_mask(const std::vector<int>& indices) {
  SubsetMask m = 0;
  for (int k : indices) {
    if (k < 0 || k >= 64) throw Error(Errc::kIndexOutOfRange, "index " + std::to_string(k));
    m |= SubsetMask{1} << k;
  }
  return m;
}

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

bool strictly_increasing(const std::vector<int>& t) {
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (t[i - 1] >= t[i]) return false;
  }
  return true;
}

}  // namespace

// SymmetricKernel ----------------------------------------------------------

SymmetricKernel::SymmetricKernel(int order) : order_(order) {
  if (order < 0) throw Error(Errc::kOrderMismatch, "negative kernel order");
}

SymmetricKernel SymmetricKernel::scalar(double c) {
  SymmetricKernel k(0);
  k.set({}, c);
  return k;
}

void SymmetricKernel::set(const std::vector<int>& indices, double value) {
  if (static_cast<int>(indices.size()) != order_) {
    throw Error(Errc::kOrderMismatch, "tuple length differs from kernel order");
  }
  if (!strictly_increasing(indices)) {
    throw Error(Errc::kInvalidInput, "kernel keys must be strictly increasing");
  }
  if (!indices.empty() && indices.front() < 0) {
    throw Error(Errc::kIndexOutOfRange, "negative kernel index");
  }
  if (!std::isfinite(value)) throw Error(Errc::kInvalidInput, "non-finite kernel value");
  entries_[indices] = value;
}

double SymmetricKernel::at(const std::vector<int>& indices) const {
  auto it = entries_.find(indices);
  return it == entries_.end() ? 0.0 : it->second;
}

SymmetricKernel symmetrize(const std::map<std::vector<int>, double>& raw, int order) {
  if (order < 1) throw Error(Errc::kOrderMismatch, "symmetrize needs order >= 1");
  const double inv = 1.0 / factorial(order);
  std::map<std::vector<int>, double> acc;
  for (const auto& [tuple, value] : raw) {
    if (static_cast<int>(tuple.size()) != order) {
      throw Error(Errc::kOrderMismatch, "raw tuple length differs from order");
    }
    std::vector<int> sorted = tuple;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) continue;
    acc[sorted] += value * inv;
  }
  SymmetricKernel out(order);
  for (const auto& [tuple, value] : acc) out.set(tuple, value);
  return out;
}

RandomVariable multiple_integral(const SpacePtr& space, const SymmetricKernel& f) {
  RandomVariable out(space, 0.0);
  const int n = f.order();
  if (n > space->dimension()) return out;
  const double nfact = factorial(n);
  auto& v = out.mutable_values();
  for (const auto& [tuple, value] : f.entries()) {
    if (!tuple.empty() && tuple.back() > space->horizon()) {
      throw Error(Errc::kIndexOutOfRange, "kernel index beyond horizon");
    }
    const double c = nfact * value;
    for (std::size_t w = 0; w < v.size(); ++w) {
      double prod = c;
      for (int k : tuple) prod *= space->y(k, ((w >> k) & 1U) != 0);
      v[w] += prod;
    }
  }
  return out;
}

// ChaosExpansion -----------------------------------------------------------

ChaosExpansion::ChaosExpansion(SpacePtr space)
    : space_(std::move(space)), coeffs_(space_->size(), 0.0) {}

ChaosExpansion::ChaosExpansion(SpacePtr space, std::vector<double> dense_coeffs)
    : space_(std::move(space)), coeffs_(std::move(dense_coeffs)) {
  if (coeffs_.size() != space_->size()) {
    throw Error(Errc::kIndexOutOfRange, "coefficient table size differs from 2^{N+1}");
  }
}

double ChaosExpansion::coeff(SubsetMask a) const {
  if (a >= coeffs_.size()) throw Error(Errc::kIndexOutOfRange, "subset outside {0..N}");
  return coeffs_[a];
}

void ChaosExpansion::set(SubsetMask a, double value) {
  if (a >= coeffs_.size()) throw Error(Errc::kIndexOutOfRange, "subset outside {0..N}");
  coeffs_[a] = value;
}

std::vector<std::pair<SubsetMask, double>> ChaosExpansion::nonzero(double threshold) const {
  std::vector<std::pair<SubsetMask, double>> out;
  for (SubsetMask a = 0; a < coeffs_.size(); ++a) {
    if (std::abs(coeffs_[a]) > threshold) out.emplace_back(a, coeffs_[a]);
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    const int cx = std::popcount(x.first);
    const int cy = std::popcount(y.first);
    return cx != cy ? cx < cy : x.first < y.first;
  });
  return out;
}

ChaosExpansion walsh_decompose(const RandomVariable& f) {
  const BernoulliSpace& sp = *f.space();
  std::vector<double> c(f.values().begin(), f.values().end());
  for (int k = 0; k < sp.dimension(); ++k) {
    const std::size_t m = std::size_t{1} << k;
    const double p = sp.p(k), q = sp.q(k), s = sp.sqrt_pq(k);
    for (std::size_t w = 0; w < c.size(); ++w) {
      if (w & m) continue;
      const double down = c[w];
      const double up = c[w | m];
      c[w] = q * down + p * up;
      c[w | m] = s * (up - down);
    }
  }
  return ChaosExpansion(f.space(), std::move(c));
}

RandomVariable walsh_reconstruct(const ChaosExpansion& e) {
  const BernoulliSpace& sp = *e.space();
  std::vector<double> v = e.coeffs();
  for (int k = 0; k < sp.dimension(); ++k) {
    const std::size_t m = std::size_t{1} << k;
    const double yp = sp.y_plus(k), ym = sp.y_minus(k);
    for (std::size_t w = 0; w < v.size(); ++w) {
      if (w & m) continue;
      const double c0 = v[w];
      const double c1 = v[w | m];
      v[w] = c0 + ym * c1;
      v[w | m] = c0 + yp * c1;
    }
  }
  return RandomVariable(e.space(), std::move(v));
}

ChaosExpansion chaos_truncate(const ChaosExpansion& e, int n) {
  if (n < kInitialTime || n > e.space()->horizon()) {
    throw Error(Errc::kTimeIndexOutOfRange, "truncation time " + std::to_string(n));
  }
  const SubsetMask keep = (SubsetMask{1} << (n + 1)) - 1;
  ChaosExpansion out(e.space());
  for (SubsetMask a = 0; a < e.coeffs().size(); ++a) {
    if ((a & ~keep) == 0) out.set(a, e.coeffs()[a]);
  }
  return out;
}

SymmetricKernel kernel_of_order(const ChaosExpansion& e, int n) {
  if (n < 0 || n > e.space()->dimension()) {
    throw Error(Errc::kOrderMismatch, "order " + std::to_string(n) + " outside [0, N+1]");
  }
  SymmetricKernel k(n);
  const double inv = 1.0 / factorial(n);
  for (SubsetMask a = 0; a < e.coeffs().size(); ++a) {
    if (std::popcount(a) == n && e.coeffs()[a] != 0.0) k.set(subset_indices(a), e.coeffs()[a] * inv);
  }
  return k;
}

ChaosExpansion expansion_from_kernels(const SpacePtr& space,
                                      const std::vector<SymmetricKernel>& kernels) {
  ChaosExpansion out(space);
  std::vector<bool> seen(static_cast<std::size_t>(space->dimension()) + 1, false);
  for (const auto& k : kernels) {
    if (k.order() > space->dimension()) continue;  // J_n vanishes for n > N + 1
    if (seen[static_cast<std::size_t>(k.order())]) {
      throw Error(Errc::kOrderMismatch, "duplicate kernel order " + std::to_string(k.order()));
    }
    seen[static_cast<std::size_t>(k.order())] = true;
    const double nfact = factorial(k.order());
    for (const auto& [tuple, value] : k.entries()) {
      if (!tuple.empty() && tuple.back() > space->horizon()) {
        throw Error(Errc::kIndexOutOfRange, "kernel index beyond horizon");
      }
      out.set(subset_mask(tuple), nfact * value);
    }
  }
  return out;
}

// Krawtchouk ---------------------------------------------------------------

int interpolation_degree(const std::vector<double>& table, double rel_tol) {
  double scale = 0.0;
  for (double v : table) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return -1;
  int degree = 0;
  std::vector<double> diff = table;
  double amplification = 1.0;
  for (int d = 1; d < static_cast<int>(table.size()); ++d) {
    for (std::size_t i = 0; i + 1 < diff.size(); ++i) diff[i] = diff[i + 1] - diff[i];
    diff.pop_back();
    amplification *= 2.0;
    const double thresh = rel_tol * scale * amplification;
    if (std::any_of(diff.begin(), diff.end(), [&](double v) { return std::abs(v) > thresh; })) {
      degree = d;
    }
  }
  return degree;
}

KrawtchoukResult krawtchouk_check(const SpacePtr& space, int n, double tol) {
  if (!space->constant_p()) throw Error(Errc::kNonConstantP, "Krawtchouk check needs constant p");
  if (n < 1) throw Error(Errc::kOrderMismatch, "order must be >= 1");
  const int dim = space->dimension();

  SymmetricKernel ones(n);
  if (n <= dim) {
    // Enumerate all n-subsets of {0..N}.
    for (SubsetMask a = 0; a < space->size(); ++a) {
      if (std::popcount(a) == n) ones.set(subset_indices(a), 1.0);
    }
  }
  RandomVariable value = multiple_integral(space, ones);

  std::vector<double> table(static_cast<std::size_t>(dim) + 1, 0.0);
  std::vector<bool> filled(table.size(), false);
  double spread = 0.0;
  for (std::size_t w = 0; w < value.size(); ++w) {
    const auto s = static_cast<std::size_t>(std::popcount(w));
    if (!filled[s]) {
      table[s] = value[w];
      filled[s] = true;
    } else {
      spread = std::max(spread, std::abs(value[w] - table[s]));
    }
  }
  const bool measurable = spread <= tol * std::max(1.0, value.max_abs());
  return KrawtchoukResult{std::move(value), table, measurable, spread, interpolation_degree(table)};
}

}  // namespace dmc
