// Runs the acceptance checklist and prints one PASS/FAIL line per criterion.
// Usage: relay_acceptance [seed]

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "relay/acceptance.hpp"

int main(int argc, char** argv) {
  relay::acceptance::SuiteOptions options;
  if (argc > 1) options.seed = std::strtoull(argv[1], nullptr, 10);

  int failed = 0;
  for (const auto& check : relay::acceptance::checklist()) {
    const auto result = check.run(options);
    std::printf("%s  criterion %2d  %-32s %7.2fs\n", result.passed ? "PASS" : "FAIL", result.id,
                check.title.c_str(), result.seconds);
    for (const auto& m : result.measurements) {
      std::printf("        %-4s %-40s value=%.10g target=%.10g tol=%.3g\n", m.ok ? "ok" : "BAD",
                  m.name.c_str(), m.value, m.target, m.tolerance);
    }
    failed += result.passed ? 0 : 1;
  }
  std::printf("%d of %zu criteria failed\n", failed, relay::acceptance::checklist().size());
  return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
