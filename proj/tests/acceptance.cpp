// Runs the full acceptance suite and prints one PASS/FAIL line per
// criterion with its measurements.

#include <cstdio>
#include <cstdlib>

#include "axon/verify.hpp"

int main(int argc, char** argv) {
  axon::VerifyOptions opt;
  if (argc > 1) opt.seed = std::strtoull(argv[1], nullptr, 10);
  const auto report = axon::run_verification(opt);
  std::fputs(report.text().c_str(), stdout);
  return report.all_pass() ? 0 : 1;
}
