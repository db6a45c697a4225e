#include "dmc/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace dmc::io {

using nlohmann::json;

namespace {

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(Errc::kInvalidInput, std::string("malformed JSON: ") + e.what());
  }
}

const json& field(const json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) {
    throw Error(Errc::kInvalidInput, std::string("missing field \"") + name + "\"");
  }
  return j.at(name);
}

double as_real(const json& j, const char* what) {
  if (!j.is_number()) throw Error(Errc::kInvalidInput, std::string(what) + " must be a number");
  return j.get<double>();
}

int as_int(const json& j, const char* what) {
  if (!j.is_number_integer()) {
    throw Error(Errc::kInvalidInput, std::string(what) + " must be an integer");
  }
  return j.get<int>();
}

std::vector<double> as_reals(const json& j, const char* what) {
  if (j.is_number()) return {j.get<double>()};
  if (!j.is_array()) throw Error(Errc::kInvalidInput, std::string(what) + " must be an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& x : j) out.push_back(as_real(x, what));
  return out;
}

}  // namespace

SpacePtr parse_space(const std::string& json_text) {
  const json j = parse(json_text);
  const int n = as_int(field(j, "N"), "N");
  if (n < 0) throw Error(Errc::kInvalidInput, "N must be >= 0");
  std::vector<double> p = as_reals(field(j, "p"), "p");
  if (p.size() == 1) p.assign(static_cast<std::size_t>(n) + 1, p.front());
  return new_space(n, std::move(p));
}

CrrParams parse_model(const std::string& json_text) {
  const json j = parse(json_text);
  CrrParams params;
  params.horizon = as_int(field(j, "N"), "N");
  params.r = as_reals(field(j, "r"), "r");
  params.a = as_reals(field(j, "a"), "a");
  params.b = as_reals(field(j, "b"), "b");
  params.s0 = as_real(field(j, "S0"), "S0");
  params.a0 = as_real(field(j, "A0"), "A0");
  return params;
}

std::vector<double> parse_values(const std::string& json_text) {
  const json j = parse(json_text);
  if (!j.is_array()) throw Error(Errc::kInvalidInput, "random variable must be a JSON array");
  return as_reals(j, "value");
}

RandomVariable parse_rv(const SpacePtr& space, const std::string& json_text) {
  std::vector<double> v = parse_values(json_text);
  if (v.size() != space->size()) {
    throw Error(Errc::kInvalidInput, "expected " + std::to_string(space->size()) + " values, got " +
                                         std::to_string(v.size()));
  }
  return RandomVariable(space, std::move(v));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kInvalidInput, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  if (v == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

std::string chaos_json(const ChaosExpansion& e) {
  double top = 0.0;
  for (double c : e.coeffs()) top = std::max(top, std::abs(c));
  const double threshold = 1e-12 * std::max(1.0, top);
  JsonWriter w;
  w.begin_object().key("coeffs").begin_array();
  for (const auto& [mask, value] : e.nonzero(threshold)) {
    w.begin_object().key("subset").begin_array();
    for (int k : subset_indices(mask)) w.value(k);
    w.end_array().key("value").value(value).end_object();
  }
  w.end_array().end_object();
  return w.str();
}

ChaosExpansion parse_chaos(const SpacePtr& space, const std::string& json_text) {
  const json j = parse(json_text);
  const json& coeffs = field(j, "coeffs");
  if (!coeffs.is_array()) throw Error(Errc::kInvalidInput, "coeffs must be an array");
  ChaosExpansion e(space);
  for (const auto& c : coeffs) {
    const json& subset = field(c, "subset");
    if (!subset.is_array()) throw Error(Errc::kInvalidInput, "subset must be an array");
    std::vector<int> idx;
    for (const auto& k : subset) idx.push_back(as_int(k, "subset index"));
    SubsetMask mask = 0;
    for (int k : idx) {
      if (k < 0 || k > space->horizon()) {
        throw Error(Errc::kInvalidInput, "subset index " + std::to_string(k) + " outside {0..N}");
      }
      const SubsetMask bit = SubsetMask{1} << k;
      if (mask & bit) throw Error(Errc::kInvalidInput, "repeated subset index " + std::to_string(k));
      mask |= bit;
    }
    e.set(mask, as_real(field(c, "value"), "value"));
  }
  return e;
}

// JsonWriter -----------------------------------------------------------------

void JsonWriter::separate() {
  if (after_key_) {
    after_key_ = false;
    return;
  }
  if (!first_.empty()) {
    if (!first_.back()) out_ += ",";
    first_.back() = false;
  }
}

JsonWriter& JsonWriter::begin_object() {
  separate();
  out_ += "{";
  first_.push_back(true);
  return *this;
}

JsonWriter& JsonWriter::end_object() {
  first_.pop_back();
  out_ += "}";
  return *this;
}

JsonWriter& JsonWriter::begin_array() {
  separate();
  out_ += "[";
  first_.push_back(true);
  return *this;
}

JsonWriter& JsonWriter::end_array() {
  first_.pop_back();
  out_ += "]";
  return *this;
}

JsonWriter& JsonWriter::key(const std::string& k) {
  separate();
  out_ += "\"" + json_escape(k) + "\":";
  after_key_ = true;
  return *this;
}

JsonWriter& JsonWriter::value(double v) {
  separate();
  out_ += format_double(v);
  return *this;
}

JsonWriter& JsonWriter::value(int v) {
  separate();
  out_ += std::to_string(v);
  return *this;
}

JsonWriter& JsonWriter::value(bool v) {
  separate();
  out_ += v ? "true" : "false";
  return *this;
}

JsonWriter& JsonWriter::value(const std::string& v) {
  separate();
  out_ += "\"" + json_escape(v) + "\"";
  return *this;
}

JsonWriter& JsonWriter::null() {
  separate();
  out_ += "null";
  return *this;
}

}  // namespace dmc::io
