#include <cstdio>

#include "nlstrain/acceptance.hpp"

int main() {
  int failed = 0;
  nlstrain::run_acceptance([&](const nlstrain::CriterionResult& result) {
    std::printf("%s\n", nlstrain::format_result(result).c_str());
    std::fflush(stdout);
    if (!result.pass) ++failed;
  });
  std::printf("%d criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
