#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "bundle_lab_cli/output.hpp"

namespace bundle_lab::cli {

struct CheckResult {
  bool passed = false;
  std::string detail;
};

struct Check {
  std::string module;
  std::string name;
  std::function<CheckResult()> run;
};

/// Invariant checks across all modules at small truncations.
std::vector<Check> verify_suite();

/// Runs every check, reporting progress per check; returns the result object
/// ({checks, passed, failed}).
Json run_verify(std::ostream& progress);

}  // namespace bundle_lab::cli
