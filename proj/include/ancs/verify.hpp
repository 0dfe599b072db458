#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ancs {

struct CheckResult {
  std::string suite;
  std::string name;
  double deviation = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

// power_series, specfun, an_core, families, deformed_binomial, helstrom, cli.
std::vector<std::string> verify_suites();

// Runs one suite or "all". Throws InvalidArgument on an unknown suite name.
std::vector<CheckResult> run_verify(std::string_view suite);

}  // namespace ancs
