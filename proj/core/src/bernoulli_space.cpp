#include "dmc/bernoulli_space.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

namespace dmc {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::kHorizonTooLarge: return "HorizonTooLarge";
    case Errc::kProbabilityOutOfRange: return "ProbabilityOutOfRange";
    case Errc::kIndexOutOfRange: return "IndexOutOfRange";
    case Errc::kTimeIndexOutOfRange: return "TimeIndexOutOfRange";
    case Errc::kNotPredictable: return "NotPredictable";
    case Errc::kSpaceMismatch: return "SpaceMismatch";
    case Errc::kOrderMismatch: return "OrderMismatch";
    case Errc::kNonConstantP: return "NonConstantP";
    case Errc::kNegativeTime: return "NegativeTime";
    case Errc::kNotAMartingale: return "NotAMartingale";
    case Errc::kNonPositiveInput: return "NonPositiveInput";
    case Errc::kDegenerateGradient: return "DegenerateGradient";
    case Errc::kArbitrageViolation: return "ArbitrageViolation";
    case Errc::kInvalidPrice: return "InvalidPrice";
    case Errc::kInvalidStrike: return "InvalidStrike";
    case Errc::kUndefinedFunctionValue: return "UndefinedFunctionValue";
    case Errc::kInvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

BernoulliSpace::BernoulliSpace(int horizon, std::vector<double> p, int max_horizon)
    : horizon_(horizon), p_(std::move(p)) {
  if (horizon < 0 || horizon > max_horizon) {
    throw Error(Errc::kHorizonTooLarge, "horizon " + std::to_string(horizon) +
                                            " outside [0, " + std::to_string(max_horizon) + "]");
  }
  if (p_.size() != static_cast<std::size_t>(horizon + 1)) {
    throw Error(Errc::kProbabilityOutOfRange,
                "expected " + std::to_string(horizon + 1) + " probabilities, got " +
                    std::to_string(p_.size()));
  }
  coords_.reserve(p_.size());
  for (std::size_t k = 0; k < p_.size(); ++k) {
    const double pk = p_[k];
    // Negated form also rejects NaN.
    if (!(pk >= kProbabilityGuard && pk <= 1.0 - kProbabilityGuard)) {
      throw Error(Errc::kProbabilityOutOfRange,
                  "p[" + std::to_string(k) + "] = " + std::to_string(pk));
    }
    const double qk = 1.0 - pk;
    const double s = std::sqrt(pk * qk);
    coords_.push_back(Coord{pk, qk, (qk - pk) / s, s, std::sqrt(qk / pk), -std::sqrt(pk / qk)});
  }

  weights_.assign(size(), 0.0);
  weights_[0] = 1.0;
  for (int k = 0; k < dimension(); ++k) {
    const std::size_t half = std::size_t{1} << k;
    for (std::size_t i = 0; i < half; ++i) {
      weights_[i | half] = weights_[i] * coords_[k].p;
      weights_[i] *= coords_[k].q;
    }
  }
}

const BernoulliSpace::Coord& BernoulliSpace::coord(int k) const {
  if (k < 0 || k > horizon_) {
    throw Error(Errc::kIndexOutOfRange, "coordinate " + std::to_string(k));
  }
  return coords_[static_cast<std::size_t>(k)];
}

double BernoulliSpace::probability(OutcomeIndex w) const {
  if (!contains(w)) {
    throw Error(Errc::kIndexOutOfRange, "outcome " + std::to_string(w.value()));
  }
  return weights_[w.value()];
}

bool BernoulliSpace::constant_p(double tol) const {
  return std::all_of(p_.begin(), p_.end(),
                     [&](double v) { return std::abs(v - p_.front()) <= tol; });
}

SpacePtr new_space(int horizon, std::vector<double> p, int max_horizon) {
  return std::make_shared<const BernoulliSpace>(horizon, std::move(p), max_horizon);
}

SpacePtr new_uniform_space(int horizon, double p, int max_horizon) {
  if (horizon < 0 || horizon > max_horizon) {
    throw Error(Errc::kHorizonTooLarge, "horizon " + std::to_string(horizon));
  }
  return new_space(horizon, std::vector<double>(static_cast<std::size_t>(horizon + 1), p),
                   max_horizon);
}

double outcome_probability(const BernoulliSpace& space, OutcomeIndex w) {
  return space.probability(w);
}

// RandomVariable -----------------------------------------------------------

RandomVariable::RandomVariable(SpacePtr space, std::vector<double> values)
    : space_(std::move(space)), values_(std::move(values)) {
  if (!space_) throw Error(Errc::kInvalidInput, "random variable without a space");
  if (values_.size() != space_->size()) {
    throw Error(Errc::kIndexOutOfRange, "expected " + std::to_string(space_->size()) +
                                            " values, got " + std::to_string(values_.size()));
  }
}

RandomVariable::RandomVariable(SpacePtr space, double c)
    : space_(std::move(space)), values_(space_ ? space_->size() : 0, c) {
  if (!space_) throw Error(Errc::kInvalidInput, "random variable without a space");
}

RandomVariable RandomVariable::from_function(SpacePtr space,
                                             const std::function<double(OutcomeIndex)>& f) {
  std::vector<double> v(space->size());
  for (std::size_t w = 0; w < v.size(); ++w) v[w] = f(OutcomeIndex(w));
  return RandomVariable(std::move(space), std::move(v));
}

double RandomVariable::at(OutcomeIndex w) const {
  if (!space_->contains(w)) {
    throw Error(Errc::kIndexOutOfRange, "outcome " + std::to_string(w.value()));
  }
  return values_[w.value()];
}

double RandomVariable::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double RandomVariable::min() const { return *std::min_element(values_.begin(), values_.end()); }
double RandomVariable::max() const { return *std::max_element(values_.begin(), values_.end()); }

RandomVariable RandomVariable::map(const std::function<double(double)>& f) const {
  RandomVariable out = *this;
  for (double& v : out.values_) v = f(v);
  return out;
}

void RandomVariable::check_same_space(const RandomVariable& o) const {
  if (space_ != o.space_ && !(*space_ == *o.space_)) {
    throw Error(Errc::kSpaceMismatch, "random variables live on different spaces");
  }
}

RandomVariable& RandomVariable::operator+=(const RandomVariable& o) {
  check_same_space(o);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
  return *this;
}

RandomVariable& RandomVariable::operator-=(const RandomVariable& o) {
  check_same_space(o);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
  return *this;
}

RandomVariable& RandomVariable::operator*=(const RandomVariable& o) {
  check_same_space(o);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] *= o.values_[i];
  return *this;
}

RandomVariable& RandomVariable::operator*=(double c) {
  for (double& v : values_) v *= c;
  return *this;
}

RandomVariable& RandomVariable::operator+=(double c) {
  for (double& v : values_) v += c;
  return *this;
}

double max_abs_diff(const RandomVariable& a, const RandomVariable& b) {
  if (a.size() != b.size()) throw Error(Errc::kSpaceMismatch, "size mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

bool independent_of_bits_from(const RandomVariable& f, int first_bit, double tol) {
  const int dim = f.space()->dimension();
  if (first_bit >= dim) return true;
  const double scaled = tol * std::max(1.0, f.max_abs());
  const std::uint64_t low_mask = (std::uint64_t{1} << std::max(first_bit, 0)) - 1;
  for (std::size_t w = 0; w < f.size(); ++w) {
    // Compare against the representative with all checked bits cleared.
    if (std::abs(f[w] - f[w & low_mask]) > scaled) return false;
  }
  return true;
}

// ProcessRV ---------------------------------------------------------------

namespace {

void check_process_shape(const std::vector<RandomVariable>& entries) {
  if (entries.empty()) throw Error(Errc::kInvalidInput, "empty process");
  const auto& space = entries.front().space();
  if (entries.size() != static_cast<std::size_t>(space->dimension())) {
    throw Error(Errc::kIndexOutOfRange, "process length must equal N + 1");
  }
  for (const auto& e : entries) {
    if (e.space() != space && !(*e.space() == *space)) {
      throw Error(Errc::kSpaceMismatch, "process entries live on different spaces");
    }
  }
}

bool entries_independent(const std::vector<RandomVariable>& entries, int offset, double tol) {
  for (std::size_t k = 0; k < entries.size(); ++k) {
    if (!independent_of_bits_from(entries[k], static_cast<int>(k) + offset, tol)) return false;
  }
  return true;
}

}  // namespace

ProcessRV::ProcessRV(std::vector<RandomVariable> entries, Measurability tag, double tol)
    : entries_(std::move(entries)), tag_(tag) {
  check_process_shape(entries_);
  if (tag_ == Measurability::kPredictable && !entries_independent(entries_, 0, tol)) {
    throw Error(Errc::kNotPredictable, "u_k depends on bits >= k");
  }
  if (tag_ == Measurability::kAdapted && !entries_independent(entries_, 1, tol)) {
    throw Error(Errc::kNotPredictable, "u_k depends on bits > k");
  }
}

ProcessRV ProcessRV::zero(SpacePtr space, Measurability tag) {
  std::vector<RandomVariable> e(static_cast<std::size_t>(space->dimension()),
                                RandomVariable(space, 0.0));
  return ProcessRV(std::move(e), tag);
}

bool is_predictable(const ProcessRV& u, double tol) { return entries_independent(u.entries(), 0, tol); }
bool is_adapted(const ProcessRV& u, double tol) { return entries_independent(u.entries(), 1, tol); }

// Operations ----------------------------------------------------------------

double expectation(const RandomVariable& f) {
  const auto w = f.space()->probabilities();
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * w[i];
  return s;
}

RandomVariable conditional_expectation(const RandomVariable& f, int n) {
  const BernoulliSpace& sp = *f.space();
  if (n < kInitialTime || n > sp.horizon()) {
    throw Error(Errc::kTimeIndexOutOfRange, "conditioning time " + std::to_string(n));
  }
  RandomVariable out = f;
  auto& v = out.mutable_values();
  // Average out bits N, N-1, ..., n+1, one at a time.
  for (int k = sp.horizon(); k > n; --k) {
    const std::size_t m = std::size_t{1} << k;
    const double pk = sp.p(k);
    const double qk = sp.q(k);
    for (std::size_t w = 0; w < v.size(); ++w) {
      if (w & m) continue;
      const double avg = qk * v[w] + pk * v[w | m];
      v[w] = avg;
      v[w | m] = avg;
    }
  }
  return out;
}

RandomVariable y_rv(const SpacePtr& space, int k) {
  const double yp = space->y_plus(k);
  const double ym = space->y_minus(k);
  return RandomVariable::from_function(space, [&](OutcomeIndex w) { return w.up(k) ? yp : ym; });
}

RandomVariable x_rv(const SpacePtr& space, int k) {
  if (k < 0 || k > space->horizon()) throw Error(Errc::kIndexOutOfRange, "coordinate " + std::to_string(k));
  return RandomVariable::from_function(space, [&](OutcomeIndex w) { return double(w.x(k)); });
}

RandomVariable s_rv(const SpacePtr& space, int n) {
  if (n < kInitialTime || n > space->horizon()) {
    throw Error(Errc::kIndexOutOfRange, "time " + std::to_string(n));
  }
  const std::uint64_t mask = (std::uint64_t{1} << (n + 1)) - 1;
  return RandomVariable::from_function(space, [&](OutcomeIndex w) {
    return static_cast<double>(std::popcount(w.value() & mask));
  });
}

RandomVariable y_product(const SpacePtr& space, std::uint64_t subset) {
  if (subset >= space->size()) {
    throw Error(Errc::kIndexOutOfRange, "subset mask outside {0..N}");
  }
  RandomVariable out(space, 1.0);
  for (int k = 0; k < space->dimension(); ++k) {
    if ((subset >> k) & 1U) out *= y_rv(space, k);
  }
  return out;
}

RandomVariable integral(const ProcessRV& u) {
  if (u.tag() != Measurability::kPredictable) {
    throw Error(Errc::kNotPredictable, "J(u) requires a process tagged predictable");
  }
  return integral_partial(u, u.space()->horizon());
}

RandomVariable integral_partial(const ProcessRV& u, int k) {
  const SpacePtr& sp = u.space();
  if (u.tag() != Measurability::kPredictable) {
    throw Error(Errc::kNotPredictable, "J(u) requires a process tagged predictable");
  }
  if (k < kInitialTime || k > sp->horizon()) {
    throw Error(Errc::kTimeIndexOutOfRange, "truncation time " + std::to_string(k));
  }
  RandomVariable out(sp, 0.0);
  auto& v = out.mutable_values();
  for (int i = 0; i <= k; ++i) {
    const auto& ui = u[static_cast<std::size_t>(i)];
    const double yp = sp->y_plus(i);
    const double ym = sp->y_minus(i);
    for (std::size_t w = 0; w < v.size(); ++w) v[w] += ui[w] * (((w >> i) & 1U) ? yp : ym);
  }
  return out;
}

RandomVariable inner_product(const ProcessRV& u, const ProcessRV& v) {
  RandomVariable out(u.space(), 0.0);
  for (std::size_t k = 0; k < u.length(); ++k) out += u[k] * v[k];
  return out;
}

}  // namespace dmc
