#include "fracplate/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace fracplate {

bool Tolerance::accepts(double value) const {
  if (std::isnan(value)) return false;
  return kind == Kind::AtMost ? value <= bound : value >= bound;
}

double VerificationReport::metric(const std::string& key) const {
  auto it = metrics.find(key);
  if (it == metrics.end()) throw std::out_of_range("no metric named " + key);
  return it->second;
}

std::map<std::string, bool> VerificationReport::verdicts() const {
  std::map<std::string, bool> out;
  for (const auto& [key, tol] : tolerances) {
    auto it = metrics.find(key);
    out[key] = it != metrics.end() && tol.accepts(it->second);
  }
  return out;
}

bool VerificationReport::passed() const {
  for (const auto& [key, ok] : verdicts()) {
    if (!ok) return false;
  }
  return true;
}

nlohmann::json VerificationReport::to_json() const {
  nlohmann::json j;
  j["name"] = name;
  j["inputs"] = inputs;
  j["metrics"] = metrics;
  nlohmann::json tol = nlohmann::json::object();
  for (const auto& [key, t] : tolerances) {
    tol[key] = {{"kind", t.kind == Tolerance::Kind::AtMost ? "at_most" : "at_least"}, {"bound", t.bound}};
  }
  j["tolerances"] = tol;
  j["verdicts"] = verdicts();
  j["passed"] = passed();
  if (!columns.empty()) {
    j["columns"] = columns;
    j["rows"] = rows;
  }
  if (!notes.empty()) j["notes"] = notes;
  if (!extra.is_null()) j["details"] = extra;
  return j;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "NaN";
  if (std::isinf(x)) return x > 0 ? "Infinity" : "-Infinity";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

void write_string(std::ostringstream& os, const std::string& s) {
  // Delegate escaping to nlohmann so strings match its conventions.
  os << nlohmann::json(s).dump();
}

void write(std::ostringstream& os, const nlohmann::json& v, int indent, int depth) {
  const std::string pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
  const std::string close_pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
  const char* nl = indent > 0 ? "\n" : "";
  const char* sep = indent > 0 ? ": " : ":";
  switch (v.type()) {
    case nlohmann::json::value_t::object: {
      if (v.empty()) {
        os << "{}";
        return;
      }
      os << '{' << nl;
      bool first = true;
      // nlohmann's default object type is an ordered std::map, so iteration is sorted.
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) os << ',' << nl;
        first = false;
        os << pad;
        write_string(os, it.key());
        os << sep;
        write(os, it.value(), indent, depth + 1);
      }
      os << nl << close_pad << '}';
      return;
    }
    case nlohmann::json::value_t::array: {
      if (v.empty()) {
        os << "[]";
        return;
      }
      // Arrays of scalars stay on one line to keep tables compact.
      bool scalar = true;
      for (const auto& e : v) scalar = scalar && !e.is_structured();
      if (scalar) {
        os << '[';
        for (std::size_t i = 0; i < v.size(); ++i) {
          if (i) os << (indent > 0 ? ", " : ",");
          write(os, v[i], indent, depth + 1);
        }
        os << ']';
        return;
      }
      os << '[' << nl;
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << ',' << nl;
        os << pad;
        write(os, v[i], indent, depth + 1);
      }
      os << nl << close_pad << ']';
      return;
    }
    case nlohmann::json::value_t::number_float: {
      const double d = v.get<double>();
      // JSON has no NaN/Infinity literals; emit them as strings.
      if (!std::isfinite(d)) {
        write_string(os, format_double(d));
      } else {
        os << format_double(d);
      }
      return;
    }
    case nlohmann::json::value_t::string:
      write_string(os, v.get<std::string>());
      return;
    default:
      os << v.dump();
      return;
  }
}

}  // namespace

std::string canonical_json(const nlohmann::json& value, int indent) {
  std::ostringstream os;
  write(os, value, indent, 0);
  return os.str();
}

}  // namespace fracplate
