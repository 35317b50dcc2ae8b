// Acceptance suite; exits non-zero if any criterion fails.

#include <iostream>

#include "glvortex/acceptance.hpp"

int main() {
  const auto results = glvortex::run_acceptance({}, std::cout);
  int failed = 0;
  for (const auto& r : results) failed += r.pass ? 0 : 1;
  std::cout << (results.size() - failed) << "/" << results.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
