#pragma once

#include <algorithm>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

namespace lsys {

/// One line of a verification report.
struct Check {
  std::string name;
  bool pass = true;
  double residual = 0.0;
  double bound = 0.0;
  bool numeric = false;
  std::string detail;
};

class Report {
 public:
  explicit Report(std::string title = {}) : title_(std::move(title)) {}

  void add(std::string name, bool pass, std::string detail = {}) {
    Check c;
    c.name = std::move(name);
    c.pass = pass;
    c.detail = std::move(detail);
    checks_.push_back(std::move(c));
  }

  // Passes when residual <= bound.
  void add_residual(std::string name, double residual, double bound, std::string detail = {}) {
    Check c;
    c.name = std::move(name);
    c.pass = residual <= bound;
    c.residual = residual;
    c.bound = bound;
    c.numeric = true;
    c.detail = std::move(detail);
    checks_.push_back(std::move(c));
  }

  void add_check(Check c) { checks_.push_back(std::move(c)); }

  void merge(const Report& other, const std::string& prefix = {}) {
    for (auto c : other.checks_) {
      if (!prefix.empty()) c.name = prefix + "." + c.name;
      checks_.push_back(std::move(c));
    }
  }

  bool ok() const {
    return std::all_of(checks_.begin(), checks_.end(), [](const Check& c) { return c.pass; });
  }

  const Check* find(const std::string& name) const {
    for (const auto& c : checks_)
      if (c.name == name) return &c;
    return nullptr;
  }

  double max_residual(const std::string& name_prefix = {}) const {
    double m = 0.0;
    for (const auto& c : checks_)
      if (c.numeric && c.name.compare(0, name_prefix.size(), name_prefix) == 0) m = std::max(m, c.residual);
    return m;
  }

  const std::string& title() const { return title_; }
  const std::vector<Check>& checks() const { return checks_; }

 private:
  std::string title_;
  std::vector<Check> checks_;
};

inline std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

}  // namespace lsys
