#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include "bundle_lab_cli/config.hpp"
#include "bundle_lab_cli/output.hpp"

namespace bundle_lab::cli {

inline constexpr int kExitConfig = 64;
inline constexpr int kExitComputation = 70;

struct Outcome {
  int exit_code = 0;
  Json document;                              // contents of result.json
  std::string summary;                        // one line, no newline
  std::map<std::string, std::string> files;   // other artifacts by file name
};

/// Runs the command without touching the file system. ConfigError escapes
/// for invalid inputs; other errors escape as computation failures.
Outcome execute(const RunConfig& config, std::ostream& progress);

/// execute, then writes result.json and the artifacts into the output
/// directory and the summary line to `summary`. Computation errors produce a
/// failure document and status 70; ConfigError still escapes.
int run(const RunConfig& config, std::ostream& summary, std::ostream& progress);

/// Failure document for a command.
Json error_document(const RunConfig& config, const std::string& type, const std::string& message);

}  // namespace bundle_lab::cli
