#pragma once

// The acceptance suite: numbered criteria, each made of one or more checks.
// Shared by `nhjacobi verify` and the acceptance test binary.

#include <optional>
#include <string>
#include <vector>

#include "nhjacobi/io.hpp"

namespace nhj {

enum class CheckKind {
  Bound,   // pass iff measured <= tol; --tol overrides tol
  Verdict  // structural yes/no; measured is informative only
};

struct CheckResult {
  int criterion = 0;
  std::string name;
  std::vector<std::string> models;
  CheckKind kind = CheckKind::Bound;
  std::optional<double> measured;  // empty for wall-clock checks
  double tol = 0.0;
  bool pass = false;
  std::string note;
};

struct AcceptanceOptions {
  std::optional<std::string> model;
  std::optional<double> tol;
};

inline constexpr int kCriterionCount = 12;

std::string criterion_title(int criterion);

std::vector<CheckResult> run_acceptance(const AcceptanceOptions& options = {});

// Criteria 1..12 filtered to a single criterion.
std::vector<CheckResult> run_criterion(int criterion, const AcceptanceOptions& options = {});

Json acceptance_json(const std::vector<CheckResult>& results, const AcceptanceOptions& options);

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace nhj
