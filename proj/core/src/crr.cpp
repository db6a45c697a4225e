#include "dmc/crr.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dmc/identities.hpp"
#include "dmc/malliavin.hpp"

namespace dmc {

namespace {

std::vector<double> broadcast(const std::vector<double>& v, int horizon, const char* name) {
  const auto n = static_cast<std::size_t>(horizon) + 1;
  if (v.size() == n) return v;
  if (v.size() == 1) return std::vector<double>(n, v.front());
  throw Error(Errc::kInvalidInput, std::string(name) + " needs 1 or N+1 entries");
}

// Predictability of eta and zeta holds exactly in theory; the tolerance
// absorbs rounding from the differences of large prices.
constexpr double kStrategyTol = 1e-9;

}  // namespace

CrrModel::CrrModel(CrrParams params, int max_horizon) : horizon_(params.horizon) {
  if (horizon_ < 0) throw Error(Errc::kInvalidInput, "negative horizon");
  if (horizon_ > max_horizon) {
    throw Error(Errc::kHorizonTooLarge, "N = " + std::to_string(horizon_));
  }
  r_ = broadcast(params.r, horizon_, "r");
  a_ = broadcast(params.a, horizon_, "a");
  b_ = broadcast(params.b, horizon_, "b");
  if (!(params.s0 > 0.0) || !std::isfinite(params.s0) || !(params.a0 > 0.0) ||
      !std::isfinite(params.a0)) {
    throw Error(Errc::kInvalidPrice, "initial prices must be positive");
  }
  s0_ = params.s0;
  a0_ = params.a0;
  std::vector<double> p(r_.size());
  for (std::size_t k = 0; k < r_.size(); ++k) {
    const double r = r_[k], a = a_[k], b = b_[k];
    if (!(std::isfinite(r) && std::isfinite(a) && std::isfinite(b)) || !(-1.0 < a && a < r && r < b)) {
      throw Error(Errc::kArbitrageViolation,
                  "period " + std::to_string(k) + " needs -1 < a < r < b");
    }
    p[k] = (r - a) / (b - a);
    // One-step martingale condition for S under P*.
    const double drift = p[k] * (1.0 + b) + (1.0 - p[k]) * (1.0 + a) - (1.0 + r);
    if (std::abs(drift) > 1e-12 * (1.0 + std::abs(b) + std::abs(a))) {
      throw Error(Errc::kArbitrageViolation, "risk-neutral drift mismatch");
    }
  }
  space_ = new_space(horizon_, std::move(p), max_horizon);
}

void CrrModel::check_time(int n) const {
  if (n < kInitialTime || n > horizon_) {
    throw Error(Errc::kTimeIndexOutOfRange, "time " + std::to_string(n));
  }
}

RandomVariable CrrModel::stock_price(int n) const {
  check_time(n);
  RandomVariable s(space_, s0_);
  auto& v = s.mutable_values();
  for (std::size_t w = 0; w < v.size(); ++w) {
    for (int k = 0; k <= n; ++k) {
      v[w] *= ((w >> k) & 1U) ? 1.0 + b_[static_cast<std::size_t>(k)] : 1.0 + a_[static_cast<std::size_t>(k)];
    }
  }
  return s;
}

RandomVariable CrrModel::discounted_price(int n) const {
  return stock_price(n) * discount(0, n);
}

double CrrModel::bond_price(int n) const {
  check_time(n);
  return a0_ / discount(0, n);
}

double CrrModel::discount(int from, int to) const {
  double d = 1.0;
  for (int k = std::max(from, 0); k <= std::min(to, horizon_); ++k) {
    d /= 1.0 + r_[static_cast<std::size_t>(k)];
  }
  return d;
}

CrrModel build_model(const CrrParams& params) { return CrrModel(params); }

double price_claim(const CrrModel& model, const RandomVariable& f) {
  if (!(*f.space() == *model.space())) throw Error(Errc::kSpaceMismatch, "claim space");
  return expectation(f) * model.discount(0, model.horizon());
}

HedgingStrategy hedge(const CrrModel& model, const RandomVariable& f) {
  if (!(*f.space() == *model.space())) throw Error(Errc::kSpaceMismatch, "claim space");
  const SpacePtr& sp = model.space();
  const int n_max = model.horizon();
  std::vector<RandomVariable> eta, zeta, value, disc;
  const double v_init = price_claim(model, f);
  value.emplace_back(sp, v_init);
  disc.emplace_back(sp, v_init);
  RandomVariable s_prev = model.stock_price(kInitialTime);
  for (int n = 0; n <= n_max; ++n) {
    const RandomVariable s_n = model.stock_price(n);
    const double scale = model.discount(n + 1, n_max) /
                         (sp->sqrt_pq(n) * (model.b(n) - model.a(n)));
    RandomVariable e = conditional_expectation(gradient(f, n), n - 1) * scale;
    e *= s_prev.map([](double s) { return 1.0 / s; });
    const RandomVariable cond = conditional_expectation(f, n);
    const RandomVariable v_n = cond * model.discount(n + 1, n_max);
    RandomVariable z = (v_n - e * s_n) * (1.0 / model.bond_price(n));
    value.push_back(z * model.bond_price(n) + e * s_n);
    disc.push_back(cond * model.discount(0, n_max));
    eta.push_back(std::move(e));
    zeta.push_back(std::move(z));
    s_prev = s_n;
  }
  return HedgingStrategy{ProcessRV(std::move(eta), Measurability::kPredictable, kStrategyTol),
                         ProcessRV(std::move(zeta), Measurability::kPredictable, kStrategyTol),
                         0.0,
                         v_init / model.bond_price(kInitialTime),
                         std::move(value),
                         std::move(disc)};
}

double self_financing_residual(const CrrModel& model, const HedgingStrategy& h) {
  const SpacePtr& sp = model.space();
  double worst = 0.0;
  RandomVariable eta_prev(sp, h.eta_initial);
  RandomVariable zeta_prev(sp, h.zeta_initial);
  for (int n = kInitialTime; n < model.horizon(); ++n) {
    const auto& eta_next = h.eta[static_cast<std::size_t>(n + 1)];
    const auto& zeta_next = h.zeta[static_cast<std::size_t>(n + 1)];
    const RandomVariable lhs = (zeta_next - zeta_prev) * model.bond_price(n) +
                               (eta_next - eta_prev) * model.stock_price(n);
    worst = std::max(worst, lhs.max_abs());
    eta_prev = eta_next;
    zeta_prev = zeta_next;
  }
  return worst;
}

double replication_error(const HedgingStrategy& h, const RandomVariable& f) {
  return max_abs_diff(h.value.back(), f);
}

double gains_decomposition_residual(const CrrModel& model, const HedgingStrategy& h) {
  const SpacePtr& sp = model.space();
  RandomVariable gains(sp, h.discounted_value.front()[0]);
  RandomVariable s_prev = model.discounted_price(kInitialTime);
  double worst = 0.0;
  for (int n = 0; n <= model.horizon(); ++n) {
    const RandomVariable s_n = model.discounted_price(n);
    gains += h.eta[static_cast<std::size_t>(n)] * (s_n - s_prev);
    // The portfolio value discounted to time 0.
    const RandomVariable v_tilde = h.value[static_cast<std::size_t>(n) + 1] * model.discount(0, n);
    worst = std::max(worst, max_abs_diff(v_tilde, gains));
    s_prev = s_n;
  }
  return worst;
}

RandomVariable payoff(const CrrModel& model, PayoffKind kind, double strike) {
  if (!std::isfinite(strike) || strike < 0.0) {
    throw Error(Errc::kInvalidStrike, "strike " + std::to_string(strike));
  }
  const RandomVariable s = model.stock_price(model.horizon());
  if (kind == PayoffKind::kCall) {
    return s.map([strike](double x) { return std::max(x - strike, 0.0); });
  }
  return s.map([strike](double x) { return std::max(strike - x, 0.0); });
}

RandomVariable payoff_table(const CrrModel& model, std::vector<double> values) {
  if (values.size() != model.space()->size()) {
    throw Error(Errc::kInvalidInput, "payoff table needs 2^{N+1} values");
  }
  return RandomVariable(model.space(), std::move(values));
}

double change_of_variable_residual(const std::vector<RandomVariable>& m, const PathFunction& f) {
  const double defect = martingale_defect(m);
  double scale = 1.0;
  for (const auto& x : m) scale = std::max(scale, x.max_abs());
  if (defect > 1e-10 * scale) {
    throw Error(Errc::kNotAMartingale, "defect " + std::to_string(defect));
  }
  const SpacePtr& sp = m.front().space();
  std::vector<RandomVariable> fm;
  fm.reserve(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    const int n = static_cast<int>(i) - 1;
    fm.push_back(m[i].map([&](double x) {
      const double v = f(x, n);
      if (!std::isfinite(v)) {
        throw Error(Errc::kUndefinedFunctionValue,
                    "f(" + std::to_string(x) + ", " + std::to_string(n) + ")");
      }
      return v;
    }));
  }
  RandomVariable rhs = fm.front();
  double worst = 0.0;
  for (int k = 0; k < sp->dimension(); ++k) {
    const auto& cur = fm[static_cast<std::size_t>(k) + 1];
    const auto& prev = fm[static_cast<std::size_t>(k)];
    rhs += gradient(cur, k) * y_rv(sp, k);
    rhs += conditional_expectation(cur - prev, k - 1);
    worst = std::max(worst, max_abs_diff(cur, rhs));
  }
  return worst;
}

}  // namespace dmc
