#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "dmc/bernoulli_space.hpp"
#include "dmc/chaos.hpp"
#include "dmc/crr.hpp"
#include "dmc/identities.hpp"
#include "dmc/inequalities.hpp"
#include "dmc/io.hpp"
#include "dmc/malliavin.hpp"

namespace dmc::cli {

namespace {

using io::format_double;

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(Errc::kInvalidInput, "cannot write " + path);
  f << text;
}

std::string prefix_string(std::size_t w, int n) {
  std::string s;
  for (int k = 0; k <= n; ++k) s += ((w >> k) & 1U) ? '+' : '-';
  return s;
}

struct Record {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string error;
};

class Audit {
 public:
  explicit Audit(double tol) : tol_(tol) {}

  /// lhs == rhs up to tol * max(1, |lhs|, |rhs|).
  void equal(const std::string& name, double lhs, double rhs) {
    const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
    add(name, lhs, rhs, lhs - rhs, tol_ * scale);
  }

  /// lhs <= rhs; the residual is the violation max(0, lhs - rhs).
  void at_most(const std::string& name, double lhs, double rhs) {
    const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
    add(name, lhs, rhs, std::max(0.0, lhs - rhs), tol_ * scale);
  }

  /// Pointwise equality, reported at the worst outcome.
  void pointwise(const std::string& name, const RandomVariable& a, const RandomVariable& b) {
    std::size_t worst = 0;
    double diff = -1.0;
    for (std::size_t w = 0; w < a.size(); ++w) {
      const double d = std::abs(a[w] - b[w]);
      if (d > diff) {
        diff = d;
        worst = w;
      }
    }
    const double scale = std::max({1.0, a.max_abs(), b.max_abs()});
    add(name, a[worst], b[worst], a[worst] - b[worst], tol_ * scale);
  }

  void failure(const std::string& name, const std::string& message) {
    Record r;
    r.name = name;
    r.error = message;
    r.lhs = r.rhs = r.residual = std::nan("");
    r.tolerance = tol_;
    records_.push_back(std::move(r));
  }

  bool all_pass() const {
    return std::all_of(records_.begin(), records_.end(), [](const Record& r) { return r.pass; });
  }

  std::string json() const {
    io::JsonWriter w;
    w.begin_object().key("records").begin_array();
    int passed = 0;
    for (const auto& r : records_) {
      w.begin_object();
      w.key("name").value(r.name);
      w.key("lhs").value(r.lhs);
      w.key("rhs").value(r.rhs);
      w.key("residual").value(r.residual);
      w.key("tolerance").value(r.tolerance);
      w.key("pass").value(r.pass);
      if (!r.error.empty()) w.key("error").value(r.error);
      w.end_object();
      passed += r.pass ? 1 : 0;
    }
    w.end_array();
    w.key("summary").begin_object();
    w.key("total").value(static_cast<int>(records_.size()));
    w.key("passed").value(passed);
    w.key("failed").value(static_cast<int>(records_.size()) - passed);
    w.end_object().end_object();
    return w.str();
  }

 private:
  void add(const std::string& name, double lhs, double rhs, double residual, double tolerance) {
    records_.push_back({name, lhs, rhs, residual, tolerance, std::abs(residual) <= tolerance, {}});
  }

  double tol_;
  std::vector<Record> records_;
};

ProcessRV mixed_process(const RandomVariable& f, const RandomVariable& g) {
  std::vector<RandomVariable> u;
  for (int k = 0; k < f.space()->dimension(); ++k) u.push_back(f * gradient(g, k));
  return ProcessRV(std::move(u));
}

void suite_clark(Audit& a, const RandomVariable& f) {
  const ClarkDecomposition c = clark(f);
  a.pointwise("clark.reconstruction", f, c.reconstruct());
  const double mean = c.mean;
  a.equal("clark.energy", expectation(f * f),
          mean * mean + expectation(inner_product(c.integrand, c.integrand)));
  const PoincareSides ps = poincare_sides(f);
  a.at_most("clark.poincare", ps.variance, ps.energy);
}

void suite_adjoint(Audit& a, const RandomVariable& f, const RandomVariable& g) {
  const ProcessRV u = mixed_process(g, f);
  const RandomVariable du = inner_product(gradient_all(f).as_process(), u);
  a.equal("adjoint.duality", expectation(du), expectation(f * divergence(u)));
}

void suite_isometry(Audit& a, const RandomVariable& f, const RandomVariable& g) {
  const ProcessRV u = mixed_process(g, f);
  const IsometrySides s = skorohod_isometry_sides(u);
  a.equal("isometry.skorohod", s.lhs, s.rhs);
  a.pointwise("isometry.divergence_forms", divergence(u), divergence_pointwise(u));
  const ProcessRV v = clark(f).integrand;
  const RandomVariable jv = integral(v);
  a.equal("isometry.ito", expectation(jv * jv), expectation(inner_product(v, v)));
}

void suite_semigroup(Audit& a, const RandomVariable& f) {
  // The kernel form is quadratic in the number of outcomes.
  if (f.space()->horizon() <= 10) {
    const std::pair<double, const char*> times[] = {{0.1, "0.1"}, {1.0, "1"}, {10.0, "10"}};
    for (const auto& [t, label] : times) {
      a.pointwise(std::string("semigroup.kernel_t") + label, semigroup(f, t), semigroup_kernel(f, t));
    }
  }
  a.equal("semigroup.mean", expectation(semigroup(f, 1.0)), expectation(f));
  const IsometrySides c = semigroup_process_contraction_check(gradient_all(f).as_process(), 1.0);
  a.at_most("semigroup.contraction", c.lhs, c.rhs);
}

void suite_covariance(Audit& a, const RandomVariable& f, const RandomVariable& g) {
  const double direct = covariance_direct(f, g);
  a.equal("covariance.clark", covariance_clark(f, g), direct);
  a.equal("covariance.semigroup", covariance_semigroup(f, g), direct);
  for (int n = 0; n <= 3; ++n) {
    a.equal("covariance.iterated_n" + std::to_string(n), covariance_iterated(f, g, n), direct);
  }
}

void suite_lsi(Audit& a, const RandomVariable& f) {
  LsiReport r{};
  try {
    r = lsi_report(f);
  } catch (const Error& e) {
    a.failure("lsi", e.what());
    return;
  }
  a.at_most("lsi.modified", r.entropy, r.rhs_modified);
  a.at_most("lsi.l1", r.entropy, r.rhs_l1);
  a.at_most("lsi.optimal", r.entropy, r.rhs_optimal);
  a.at_most("lsi.sharp", r.entropy, r.rhs_sharp);
  a.at_most("lsi.sharp_vs_optimal", r.rhs_sharp, r.rhs_optimal);
  a.at_most("lsi.sharp_vs_modified", r.rhs_sharp, r.rhs_modified);
}

void suite_deviation(Audit& a, const RandomVariable& f) {
  const DeviationReport r = deviation_report(f, 20);
  auto worst = [&](const std::vector<double>& bound, const std::string& name) {
    std::size_t at = 0;
    double gap = -1e300;
    for (std::size_t i = 0; i < r.x.size(); ++i) {
      if (r.exact[i] - bound[i] > gap) {
        gap = r.exact[i] - bound[i];
        at = i;
      }
    }
    a.at_most(name, r.exact[at], bound[at]);
  };
  worst(r.poisson_type, "deviation.poisson_type");
  worst(r.poisson_weak, "deviation.poisson_weak");
  worst(r.gaussian, "deviation.gaussian");
}

void suite_sandwich(Audit& a, const RandomVariable& f) {
  const double mean = expectation(f);
  const double var = expectation(f * f) - mean * mean;
  for (int n = 1; n <= 3; ++n) {
    const VarianceBounds b = variance_sandwich(f, n);
    a.at_most("sandwich.n" + std::to_string(n) + ".lower", b.lower, var);
    a.at_most("sandwich.n" + std::to_string(n) + ".upper", var, b.upper);
  }
}

template <class Fn>
int guarded(std::ostream& err, Fn&& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
}

}  // namespace

const std::vector<std::string>& audit_suites() {
  static const std::vector<std::string> names = {"clark",      "adjoint", "isometry",  "semigroup",
                                                 "covariance", "lsi",     "deviation", "sandwich"};
  return names;
}

int cmd_hedge(const HedgeOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const CrrModel model(io::parse_model(io::read_file(opt.model_path)));
    RandomVariable f(model.space(), 0.0);
    if (opt.payoff == "call") {
      f = payoff(model, PayoffKind::kCall, opt.strike);
    } else if (opt.payoff == "put") {
      f = payoff(model, PayoffKind::kPut, opt.strike);
    } else {
      f = payoff_table(model, io::parse_values(io::read_file(opt.payoff)));
    }
    const HedgingStrategy h = hedge(model, f);
    const double price = price_claim(model, f);
    const double rep = replication_error(h, f);
    const double sf = self_financing_residual(model, h);

    if (!opt.out_path.empty()) {
      std::string csv = "n,outcome_prefix,S,V,eta,zeta\n";
      for (int n = kInitialTime; n <= model.horizon(); ++n) {
        const RandomVariable s = model.stock_price(n);
        const auto& v = h.value[static_cast<std::size_t>(n + 1)];
        const std::size_t nodes = std::size_t{1} << (n + 1);
        for (std::size_t w = 0; w < nodes; ++w) {
          const double eta = n < 0 ? h.eta_initial : h.eta[static_cast<std::size_t>(n)][w];
          const double zeta = n < 0 ? h.zeta_initial : h.zeta[static_cast<std::size_t>(n)][w];
          csv += std::to_string(n) + "," + prefix_string(w, n) + "," + format_double(s[w]) + "," +
                 format_double(v[w]) + "," + format_double(eta) + "," + format_double(zeta) + "\n";
        }
      }
      emit(opt.out_path, csv, out);
    }

    io::JsonWriter w;
    w.begin_object();
    w.key("price").value(price);
    w.key("replication_error").value(rep);
    w.key("self_financing_error").value(sf);
    w.end_object();
    out << w.str();
    const double scale = std::max(1.0, f.max_abs());
    if (rep > opt.tolerance * scale || sf > opt.tolerance * scale) {
      err << "contract violation: replication or self-financing residual above tolerance\n";
      return kExitContract;
    }
    return kExitOk;
  });
}

int cmd_decompose(const DecomposeOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const SpacePtr space = io::parse_space(io::read_file(opt.space_path));
    const std::string text = io::read_file(opt.rv_path);
    if (opt.reconstruct) {
      const RandomVariable f = walsh_reconstruct(io::parse_chaos(space, text));
      io::JsonWriter w;
      w.begin_array();
      for (double v : f.values()) w.value(v);
      w.end_array();
      emit(opt.out_path, w.str(), out);
    } else {
      const RandomVariable f = io::parse_rv(space, text);
      emit(opt.out_path, io::chaos_json(walsh_decompose(f)), out);
    }
    return kExitOk;
  });
}

int cmd_audit(const AuditOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (opt.rv_paths.empty() || opt.rv_paths.size() > 2) {
      throw Error(Errc::kInvalidInput, "audit takes one or two --rv files");
    }
    std::vector<std::string> suites = opt.suites.empty() ? audit_suites() : opt.suites;
    for (const auto& s : suites) {
      if (std::find(audit_suites().begin(), audit_suites().end(), s) == audit_suites().end()) {
        throw Error(Errc::kInvalidInput, "unknown suite " + s);
      }
    }
    const SpacePtr space = io::parse_space(io::read_file(opt.space_path));
    const RandomVariable f = io::parse_rv(space, io::read_file(opt.rv_paths.front()));
    const RandomVariable g =
        opt.rv_paths.size() == 2 ? io::parse_rv(space, io::read_file(opt.rv_paths.back())) : f;

    Audit a(opt.tolerance);
    const std::map<std::string, std::function<void()>> table = {
        {"clark", [&] { suite_clark(a, f); }},
        {"adjoint", [&] { suite_adjoint(a, f, g); }},
        {"isometry", [&] { suite_isometry(a, f, g); }},
        {"semigroup", [&] { suite_semigroup(a, f); }},
        {"covariance", [&] { suite_covariance(a, f, g); }},
        {"lsi", [&] { suite_lsi(a, f); }},
        {"deviation", [&] { suite_deviation(a, f); }},
        {"sandwich", [&] { suite_sandwich(a, f); }},
    };
    // Report order follows the canonical suite list, not the flag order.
    for (const auto& name : audit_suites()) {
      if (std::find(suites.begin(), suites.end(), name) != suites.end()) table.at(name)();
    }
    emit(opt.out_path, a.json(), out);
    return a.all_pass() ? kExitOk : kExitContract;
  });
}

int cmd_figure1(const Figure1Options& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto rows = figure1_table();
    std::string csv = "p,entropy,rhs_modified,rhs_l1,rhs_optimal,rhs_sharp\n";
    bool ordered = true;
    constexpr double slack = 1e-12;
    for (const auto& r : rows) {
      csv += format_double(r.p) + "," + format_double(r.entropy) + "," + format_double(r.rhs_modified) +
             "," + format_double(r.rhs_l1) + "," + format_double(r.rhs_optimal) + "," +
             format_double(r.rhs_sharp) + "\n";
      ordered = ordered && r.entropy <= r.rhs_sharp + slack && r.rhs_sharp <= r.rhs_optimal + slack &&
                r.entropy <= r.rhs_l1 + slack && r.entropy <= r.rhs_modified + slack;
    }
    emit(opt.out_path, csv, out);
    if (!ordered) {
      err << "contract violation: figure1 ordering fails\n";
      return kExitContract;
    }
    return kExitOk;
  });
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Discrete stochastic analysis on Bernoulli spaces"};
  app.require_subcommand(1);

  HedgeOptions hedge_opt;
  auto* hedge_cmd = app.add_subcommand("hedge", "Price and hedge a claim in a CRR model");
  hedge_cmd->add_option("--model", hedge_opt.model_path, "Model JSON")->required();
  hedge_cmd->add_option("--payoff", hedge_opt.payoff, "call, put, or a JSON array file");
  hedge_cmd->add_option("--strike", hedge_opt.strike, "Strike for call/put");
  hedge_cmd->add_option("--out", hedge_opt.out_path, "Hedge CSV output");
  hedge_cmd->add_option("--tolerance", hedge_opt.tolerance, "Contract tolerance");

  DecomposeOptions dec_opt;
  auto* dec_cmd = app.add_subcommand("decompose", "Walsh/chaos decomposition of a random variable");
  dec_cmd->add_option("--space", dec_opt.space_path, "Space JSON")->required();
  dec_cmd->add_option("--rv", dec_opt.rv_path, "Values JSON (chaos JSON with --reconstruct)")->required();
  dec_cmd->add_option("--out", dec_opt.out_path, "Output path (default stdout)");
  dec_cmd->add_flag("--reconstruct", dec_opt.reconstruct, "Rebuild values from chaos JSON");

  AuditOptions audit_opt;
  auto* audit_cmd = app.add_subcommand("audit", "Check identities and inequalities on inputs");
  audit_cmd->add_option("--space", audit_opt.space_path, "Space JSON")->required();
  audit_cmd->add_option("--rv", audit_opt.rv_paths, "F values JSON, optionally G second")->required();
  audit_cmd->add_option("--suite", audit_opt.suites, "Suites to run (default all)");
  audit_cmd->add_option("--out", audit_opt.out_path, "Report path (default stdout)");
  audit_cmd->add_option("--tolerance", audit_opt.tolerance, "Tolerance");

  Figure1Options fig_opt;
  auto* fig_cmd = app.add_subcommand("figure1", "Entropy and LSI bounds for the two-point function");
  fig_cmd->add_option("--out", fig_opt.out_path, "CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  if (*hedge_cmd) return cmd_hedge(hedge_opt, out, err);
  if (*dec_cmd) return cmd_decompose(dec_opt, out, err);
  if (*audit_cmd) return cmd_audit(audit_opt, out, err);
  return cmd_figure1(fig_opt, out, err);
}

}  // namespace dmc::cli
