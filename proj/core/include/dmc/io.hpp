#pragma once

// JSON ingestion and deterministic text emitters.

#include <iosfwd>
#include <string>
#include <vector>

#include "dmc/bernoulli_space.hpp"
#include "dmc/chaos.hpp"
#include "dmc/crr.hpp"

namespace dmc::io {

/// {"N": int, "p": [real, ...]} (a single p is broadcast). Errors surface as
/// kInvalidInput or the space constructor's codes.
SpacePtr parse_space(const std::string& json_text);
/// {"N": int, "r": [..], "a": [..], "b": [..], "S0": real, "A0": real}.
CrrParams parse_model(const std::string& json_text);
/// A JSON array of reals.
std::vector<double> parse_values(const std::string& json_text);
RandomVariable parse_rv(const SpacePtr& space, const std::string& json_text);

/// Reads a whole file; throws kInvalidInput if it cannot be opened.
std::string read_file(const std::string& path);

/// "%.17g" rendering; non-finite values become null.
std::string format_double(double v);

/// {"coeffs": [{"subset": [...], "value": x}, ...]} sorted by subset size then mask.
/// Coefficients with |a| <= 1e-12 max(1, max|a|) are dropped.
std::string chaos_json(const ChaosExpansion& e);

/// Inverse of chaos_json: missing subsets have coefficient 0.
ChaosExpansion parse_chaos(const SpacePtr& space, const std::string& json_text);

/// Minimal ordered JSON object builder used by the CLI reports.
class JsonWriter {
 public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(const std::string& k);
  JsonWriter& value(double v);
  JsonWriter& value(int v);
  JsonWriter& value(bool v);
  JsonWriter& value(const std::string& v);
  JsonWriter& null();
  std::string str() const { return out_ + "\n"; }

 private:
  void separate();
  std::string out_;
  std::vector<bool> first_;
  bool after_key_ = false;
};

std::string json_escape(const std::string& s);

}  // namespace dmc::io
