#include <iostream>

#include "photocorr/selftest.hpp"

int main() {
  photocorr::AcceptanceOptions options;
  options.scale = 1.0;
  options.threads = 1;
  bool all = true;
  for (int id = 1; id <= 7; ++id) {
    const auto result = photocorr::run_criterion(id, options);
    photocorr::print_result(result, std::cout, true);
    std::cout.flush();
    all = all && result.passed;
  }
  std::cout << (all ? "all acceptance criteria passed" : "acceptance criteria FAILED") << '\n';
  return all ? 0 : 1;
}
