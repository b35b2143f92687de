#include "bundle_lab_cli/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "bundle_lab/series.hpp"

namespace bundle_lab::cli {

ConfigError::ConfigError(const std::string& what, int line, int column)
    : Error(line > 0 ? what + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")" : what),
      line_(line),
      column_(column) {}

const std::vector<KeySpec>& key_table() {
  static const std::vector<KeySpec> keys = {
      {"command", "run", "", "subcommand to run when none is given on the command line"},
      {"out", "run", "--out", "output directory"},
      {"weights", "input", "--weights", "weight preset id, e.g. bergman:alpha=1"},
      {"fn", "input", "--fn", "function expression"},
      {"f1", "input", "--f1", "first function expression"},
      {"f2", "input", "--f2", "second function expression"},
      {"blaschke", "input", "--blaschke", "Blaschke product expression, e.g. blaschke(0;0,0.5)"},
      {"K", "truncation", "--K", "truncation order (rows)"},
      {"n_max", "truncation", "--n-max", "largest power index"},
      {"norm", "truncation", "--norm", "frame normalization: raw, beta or inverse"},
      {"bounds", "grid", "--bounds", "re_min,re_max,im_min,im_max"},
      {"res", "grid", "--res", "grid resolution per axis"},
      {"t", "probe", "--t", "Moebius parameter in (0,1)"},
      {"omega0", "decompose", "--omega0", "base point (default: automatic)"},
      {"radius", "decompose", "--radius", "sampling radius for the outer factor"},
      {"samples", "decompose", "--samples", "samples on the circle (power of two)"},
      {"test_points", "decompose", "--test-points", "held-out residual points"},
      {"seed", "decompose", "--seed", "seed for the held-out points"},
      {"emit_matrix", "output", "--emit-matrix", "also write the intertwiner as x.csv"},
  };
  return keys;
}

const KeySpec* find_key(std::string_view name) {
  const auto& t = key_table();
  auto it = std::find_if(t.begin(), t.end(), [&](const KeySpec& k) { return k.name == name; });
  return it == t.end() ? nullptr : &*it;
}

const std::vector<CommandSpec>& command_table() {
  static const std::vector<CommandSpec> cmds = {
      {"weights-classify", "growth class, power law and dual of a weight sequence",
       {{"weights", "bergman:alpha=1"}, {"K", "10000"}}},
      {"gram", "Gram matrix of the frame of a Blaschke product",
       {{"weights", "hardy"}, {"blaschke", "blaschke(0;0,0.5)"}, {"K", "256"}, {"n_max", "40"}, {"norm", "raw"}}},
      {"riesz", "Riesz bounds of the beta-normalized frame, with doubling",
       {{"weights", "bergman:alpha=1"}, {"blaschke", "blaschke(0;0,0.5)"}, {"K", "512"}, {"n_max", "100"}}},
      {"index-map", "Fredholm index map of h(T) with SVG rendering",
       {{"fn", "poly(2,1,1)"}, {"bounds", "-1,5,-3,3"}, {"res", "400"}}},
      {"decompose", "maximal factorization f = h o B",
       {{"fn", ""}, {"omega0", "auto"}, {"radius", "0.9"}, {"samples", "1024"}, {"test_points", "200"},
        {"seed", "20240531"}}},
      {"jordan", "decomposition plus similarity certificate for h o B",
       {{"fn", ""}, {"weights", "bergman:alpha=1"}, {"K", "512"}, {"n_max", "100"}, {"omega0", "auto"},
        {"emit_matrix", "false"}}},
      {"similar", "similarity verdict for two push-forward bundles",
       {{"f1", ""}, {"f2", ""}, {"weights", "bergman:alpha=1"}, {"K", "512"}, {"n_max", "100"}}},
      {"kaplansky", "single and doubled similarity verdicts",
       {{"f1", ""}, {"f2", ""}, {"weights", "bergman:alpha=1"}, {"K", "512"}, {"n_max", "100"}}},
      {"douglas", "intertwiner of M_B with the sum of copies of M_z",
       {{"weights", "bergman:alpha=1"}, {"blaschke", "blaschke(0;0,0.5)"}, {"K", "512"}, {"n_max", "100"},
        {"emit_matrix", "false"}}},
      {"counterexample", "column-norm profile and intertwiner conditioning for a Moebius map",
       {{"weights", "reciprocal:nln"}, {"t", "0.5"}, {"n_max", "800"}}},
      {"verify", "run the invariant suite", {}},
  };
  return cmds;
}

const CommandSpec* find_command(std::string_view name) {
  const auto& t = command_table();
  auto it = std::find_if(t.begin(), t.end(), [&](const CommandSpec& c) { return c.name == name; });
  return it == t.end() ? nullptr : &*it;
}

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

bool is_key_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '-';
}

}  // namespace

ConfigFile parse_config(std::string_view text) {
  ConfigFile out;
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    const std::string_view line = text.substr(pos, eol - pos);
    ++line_no;
    pos = eol + 1;
    auto col = [&](std::size_t i) { return static_cast<int>(i) + 1; };

    std::size_t i = 0;
    while (i < line.size() && is_space(line[i])) ++i;
    if (i == line.size() || line[i] == '#') {
      if (eol == text.size()) break;
      continue;
    }
    if (line[i] == '[') {
      const std::size_t close = line.find(']', i);
      if (close == std::string_view::npos) throw ConfigError("unterminated section header", line_no, col(i));
      section = std::string(line.substr(i + 1, close - i - 1));
      const auto& keys = key_table();
      if (std::none_of(keys.begin(), keys.end(), [&](const KeySpec& k) { return k.section == section; }))
        throw ConfigError("unknown section [" + section + "]", line_no, col(i + 1));
      std::size_t j = close + 1;
      while (j < line.size() && is_space(line[j])) ++j;
      if (j < line.size() && line[j] != '#') throw ConfigError("unexpected text after section header", line_no, col(j));
      if (eol == text.size()) break;
      continue;
    }

    const std::size_t key_start = i;
    while (i < line.size() && is_key_char(line[i])) ++i;
    if (i == key_start) throw ConfigError("expected a key", line_no, col(i));
    const std::string key(line.substr(key_start, i - key_start));
    const KeySpec* spec = find_key(key);
    if (!spec) throw ConfigError("unknown key '" + key + "'", line_no, col(key_start));
    if (!section.empty() && spec->section != section)
      throw ConfigError("key '" + key + "' belongs to section [" + spec->section + "], not [" + section + "]", line_no,
                        col(key_start));
    while (i < line.size() && is_space(line[i])) ++i;
    if (i == line.size() || line[i] != '=') throw ConfigError("expected '=' after key '" + key + "'", line_no, col(i));
    ++i;
    while (i < line.size() && is_space(line[i])) ++i;

    std::string value;
    if (i < line.size() && line[i] == '"') {
      const std::size_t open = i++;
      bool closed = false;
      for (; i < line.size(); ++i) {
        if (line[i] == '\\' && i + 1 < line.size()) {
          value += line[++i];
        } else if (line[i] == '"') {
          closed = true;
          ++i;
          break;
        } else {
          value += line[i];
        }
      }
      if (!closed) throw ConfigError("unterminated quoted value", line_no, col(open));
      while (i < line.size() && is_space(line[i])) ++i;
      if (i < line.size() && line[i] != '#') throw ConfigError("unexpected text after quoted value", line_no, col(i));
    } else {
      // A '#' starts a comment only after whitespace, so expressions stay intact.
      std::size_t end = i;
      while (end < line.size() && !(line[end] == '#' && end > i && is_space(line[end - 1]))) ++end;
      value = std::string(line.substr(i, end - i));
      while (!value.empty() && is_space(value.back())) value.pop_back();
    }

    if (key == "command") {
      if (out.command) throw ConfigError("duplicate key 'command'", line_no, col(key_start));
      out.command = value;
    } else if (!out.values.emplace(key, value).second) {
      throw ConfigError("duplicate key '" + key + "'", line_no, col(key_start));
    }
    if (eol == text.size()) break;
  }
  return out;
}

ConfigFile load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

RunConfig::RunConfig(std::string command, std::map<std::string, std::string> values)
    : command_(std::move(command)), values_(std::move(values)) {}

RunConfig RunConfig::resolve(const std::string& command, const ConfigFile& file,
                             const std::map<std::string, std::string>& flags) {
  const CommandSpec* spec = find_command(command);
  if (!spec) throw ConfigError("unknown command '" + command + "'");
  std::map<std::string, std::string> v;
  v["out"] = "bundle-lab-out";
  for (const auto& [k, d] : spec->keys) v[k] = d;
  // Keys outside the command's set are accepted in files (configs may be
  // shared between commands) but not recorded.
  for (const auto& [k, val] : file.values)
    if (v.count(k)) v[k] = val;
  for (const auto& [k, val] : flags) {
    if (!v.count(k)) throw ConfigError("option for '" + k + "' does not apply to " + command);
    v[k] = val;
  }
  for (const auto& [k, val] : v)
    if (val.empty()) {
      const KeySpec* ks = find_key(k);
      throw ConfigError(command + " needs " + (ks && !ks->flag.empty() ? ks->flag : k));
    }
  return RunConfig(command, std::move(v));
}

bool RunConfig::has(const std::string& key) const { return values_.count(key) > 0; }

std::string RunConfig::str(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing key '" + key + "'");
  return it->second;
}

double RunConfig::real(const std::string& key) const {
  const std::string s = str(key);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE)
    throw ConfigError("'" + key + "' must be a real number, got '" + s + "'");
  return v;
}

std::size_t RunConfig::count(const std::string& key) const {
  const std::string s = str(key);
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }) || s.size() > 12)
    throw ConfigError("'" + key + "' must be a nonnegative integer, got '" + s + "'");
  return static_cast<std::size_t>(std::stoull(s));
}

std::complex<double> RunConfig::complex(const std::string& key) const {
  const std::string s = str(key);
  try {
    return parse_complex(s);
  } catch (const Error&) {
    throw ConfigError("'" + key + "' must be a complex number, got '" + s + "'");
  }
}

bool RunConfig::flag(const std::string& key) const {
  const std::string s = str(key);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError("'" + key + "' must be true or false, got '" + s + "'");
}

std::vector<double> RunConfig::reals(const std::string& key) const {
  const std::string s = str(key);
  std::vector<double> out;
  std::size_t p = 0;
  while (p <= s.size()) {
    const std::size_t q = std::min(s.find(',', p), s.size());
    std::string item = s.substr(p, q - p);
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (item.empty() || end != item.c_str() + item.size())
      throw ConfigError("'" + key + "' must be comma-separated reals, got '" + s + "'");
    out.push_back(v);
    p = q + 1;
  }
  return out;
}

}  // namespace bundle_lab::cli
