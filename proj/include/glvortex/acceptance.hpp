#pragma once

// End-to-end acceptance checks at desk scale (disk grids, eps ladder
// 0.2, 0.1, 0.05, 0.025). Shared minimisations are computed once.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace glvortex {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  /// Lattice spacing of the degree-one disk ladder.
  double fine_h = 1.0 / 128.0;
  /// Lattice spacing of every other solve.
  double coarse_h = 1.0 / 64.0;
  /// Criterion ids to run; empty runs all 13.
  std::vector<int> only;
  std::uint64_t seed = 0;
};

/// Runs the selected criteria, printing one PASS/FAIL line per criterion to `log`.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts, std::ostream& log);

}  // namespace glvortex
