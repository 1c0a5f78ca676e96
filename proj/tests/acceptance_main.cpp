// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <cstdio>
#include <filesystem>

#include "fraczeta/acceptance.hpp"

int main(int argc, char** argv) {
  namespace acc = fraczeta::acceptance;
  const std::filesystem::path scratch =
      argc > 1 ? std::filesystem::path(argv[1]) : std::filesystem::temp_directory_path() / "fraczeta_acceptance";
  const acc::Fixtures fx;
  const auto results = acc::run_acceptance(fx, scratch);
  int failed = 0;
  for (const auto& r : results) {
    std::printf("%s\n", acc::format_line(r).c_str());
    failed += r.passed ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(results.size()) - failed, results.size());
  std::filesystem::remove_all(scratch);
  return failed == 0 ? 0 : 1;
}
