// Runs every acceptance criterion and prints one line per criterion, with the
// individual checks indented below it. Exit status is nonzero on any failure.

#include <fmt/format.h>

#include "nhjacobi/acceptance.hpp"

int main() {
  bool ok = true;
  for (int c = 1; c <= nhj::kCriterionCount; ++c) {
    const auto results = nhj::run_criterion(c);
    const bool pass = !results.empty() && nhj::all_passed(results);
    ok = ok && pass;
    fmt::print("criterion {:2}: {} {}\n", c, pass ? "PASS" : "FAIL", nhj::criterion_title(c));
    for (const auto& r : results) {
      const std::string measured = r.measured ? fmt::format("{:.3e}", *r.measured) : "-";
      const std::string bound =
          r.kind == nhj::CheckKind::Bound ? fmt::format(" <= {:.0e}", r.tol) : std::string();
      fmt::print("    [{}] {} ({}) {}{}{}\n", r.pass ? "ok" : "FAIL", r.name, fmt::join(r.models, ","),
                 measured, bound, r.note.empty() ? "" : "  # " + r.note);
    }
    std::fflush(stdout);
  }
  return ok ? 0 : 1;
}
