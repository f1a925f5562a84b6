#include <iostream>

#include "shockfit/harness/acceptance.hpp"

int main() {
  const auto results = shockfit::harness::run_acceptance(std::cout);
  int failed = 0;
  for (const auto& r : results)
    if (!r.pass) ++failed;
  if (failed > 0) {
    std::cout << failed << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all " << results.size() << " criteria passed\n";
  return 0;
}
