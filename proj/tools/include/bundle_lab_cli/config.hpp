#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bundle_lab/common.hpp"

namespace bundle_lab::cli {

/// Invalid configuration (exit status 64). Line and column are 1-based and
/// zero when the problem does not come from a config file.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what, int line = 0, int column = 0);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_ = 0;
  int column_ = 0;
};

struct KeySpec {
  std::string name;     // config key, e.g. n_max
  std::string section;  // config section, e.g. truncation
  std::string flag;     // command-line flag, e.g. --n-max
  std::string help;
};

/// Every key accepted in a config file or as a flag.
const std::vector<KeySpec>& key_table();
const KeySpec* find_key(std::string_view name);

struct CommandSpec {
  std::string name;
  std::string help;
  /// Keys the command reads with their defaults; an empty default marks a
  /// required key.
  std::vector<std::pair<std::string, std::string>> keys;
};

const std::vector<CommandSpec>& command_table();
const CommandSpec* find_command(std::string_view name);

/// Key-value pairs of a config file: `[section]` headers, `key = value`
/// lines, `#` comments, values optionally in double quotes. A key may also
/// appear before any section header.
struct ConfigFile {
  std::map<std::string, std::string> values;
  std::optional<std::string> command;
};

ConfigFile parse_config(std::string_view text);
ConfigFile load_config(const std::string& path);

/// Resolved settings of one run: command defaults, then the config file, then
/// flags.
class RunConfig {
 public:
  RunConfig(std::string command, std::map<std::string, std::string> values);

  static RunConfig resolve(const std::string& command, const ConfigFile& file,
                           const std::map<std::string, std::string>& flags);

  const std::string& command() const { return command_; }
  const std::map<std::string, std::string>& values() const { return values_; }

  bool has(const std::string& key) const;
  std::string str(const std::string& key) const;
  double real(const std::string& key) const;
  std::size_t count(const std::string& key) const;
  std::complex<double> complex(const std::string& key) const;
  bool flag(const std::string& key) const;
  /// Comma-separated reals.
  std::vector<double> reals(const std::string& key) const;

 private:
  std::string command_;
  std::map<std::string, std::string> values_;
};

}  // namespace bundle_lab::cli
