#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dmc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitContract = 3;

struct HedgeOptions {
  std::string model_path;
  std::string payoff = "call";  // call, put, or a path to a JSON array of payoff values
  double strike = 0.0;
  std::string out_path;  // hedge CSV; empty means none. The JSON summary always goes to `out`.
  double tolerance = 1e-10;
};

struct DecomposeOptions {
  std::string space_path;
  std::string rv_path;
  std::string out_path;  // empty or "-" means stdout
  bool reconstruct = false;  // rv file holds chaos JSON; emit values
};

struct AuditOptions {
  std::string space_path;
  std::vector<std::string> rv_paths;  // F, and optionally G
  std::vector<std::string> suites;    // empty means all
  std::string out_path;
  double tolerance = 1e-10;
};

struct Figure1Options {
  std::string out_path;
};

// Each command writes its primary output to the --out file (or `out` when
// none is given) and diagnostics to `err`. Return values are exit codes.
int cmd_hedge(const HedgeOptions& opt, std::ostream& out, std::ostream& err);
int cmd_decompose(const DecomposeOptions& opt, std::ostream& out, std::ostream& err);
int cmd_audit(const AuditOptions& opt, std::ostream& out, std::ostream& err);
int cmd_figure1(const Figure1Options& opt, std::ostream& out, std::ostream& err);

const std::vector<std::string>& audit_suites();

int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace dmc::cli
