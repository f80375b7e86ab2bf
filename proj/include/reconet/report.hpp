#pragma once

#include <string>
#include <vector>

#include "reconet/errors.hpp"

namespace reconet {

// One failed axiom together with the vertices/arcs that witness the failure.
struct Violation {
  std::string axiom;
  std::vector<std::string> witnesses;
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

// Collects every violation instead of stopping at the first one.
struct Report {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  void add(std::string axiom, std::vector<std::string> witnesses, std::string message) {
    violations.push_back({std::move(axiom), std::move(witnesses), std::move(message)});
  }
  bool has(const std::string& axiom) const {
    for (const auto& v : violations)
      if (v.axiom == axiom) return true;
    return false;
  }
  std::string to_string() const;

  friend bool operator==(const Report&, const Report&) = default;
};

using AxiomReport = Report;

// Thrown by validators when a structure does not satisfy its defining axioms.
class ValidationError : public Error {
 public:
  explicit ValidationError(Report report)
      : Error(report.to_string()), report_(std::move(report)) {}
  const Report& report() const { return report_; }

 private:
  Report report_;
};

}  // namespace reconet
