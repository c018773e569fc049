#pragma once

// Uniform check reporting: every verifier in the library emits a CheckSet so
// the CLI can serialize results the same way everywhere.

#include <kpb/rational.hpp>

#include <json.hpp>

#include <string>
#include <vector>

namespace kpb {

struct CheckItem {
  std::string name;
  double lhs = 0;
  double rhs = 0;
  double tolerance = 0;
  double slack = 0;  // how far inside the requirement the value sits
  bool pass = false;
};

struct CheckSet {
  std::vector<CheckItem> items;

  bool all_pass() const {
    for (const auto& c : items)
      if (!c.pass) return false;
    return true;
  }

  // lhs <= rhs + tol
  void check_le(const std::string& name, double lhs, double rhs, double tol) {
    items.push_back({name, lhs, rhs, tol, rhs + tol - lhs, lhs <= rhs + tol});
  }
  // |lhs - rhs| <= tol
  void check_eq(const std::string& name, double lhs, double rhs, double tol) {
    double dev = std::abs(lhs - rhs);
    items.push_back({name, lhs, rhs, tol, tol - dev, dev <= tol});
  }
  // Exact comparisons for the rational paths; values reported as doubles.
  void check_le_exact(const std::string& name, const Rational& lhs, const Rational& rhs,
                      const Rational& tol) {
    Rational slack = rhs + tol - lhs;
    items.push_back({name, to_double(lhs), to_double(rhs), to_double(tol), to_double(slack),
                     lhs <= rhs + tol});
  }
  void check_eq_exact(const std::string& name, const Rational& lhs, const Rational& rhs,
                      const Rational& tol) {
    Rational dev = lhs >= rhs ? lhs - rhs : rhs - lhs;
    items.push_back({name, to_double(lhs), to_double(rhs), to_double(tol),
                     to_double(tol - dev), dev <= tol});
  }
  void check_true(const std::string& name, bool pass) {
    items.push_back({name, pass ? 1.0 : 0.0, 1.0, 0.0, 0.0, pass});
  }

  void merge(const CheckSet& other) {
    items.insert(items.end(), other.items.begin(), other.items.end());
  }
};

inline nlohmann::json to_json(const CheckSet& set) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& c : set.items) {
    out.push_back({{"name", c.name},
                   {"lhs", c.lhs},
                   {"rhs", c.rhs},
                   {"tolerance", c.tolerance},
                   {"slack", c.slack},
                   {"pass", c.pass}});
  }
  return out;
}

}  // namespace kpb
