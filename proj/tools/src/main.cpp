#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "bundle_lab/version.hpp"
#include "bundle_lab_cli/commands.hpp"

using namespace bundle_lab::cli;

int main(int argc, char** argv) {
  CLI::App app{"bundle-lab: similarity of push-forward bundles over weighted Hardy spaces"};
  app.set_version_flag("--version", std::string(bundle_lab::kVersion));
  std::string config_path;
  app.add_option("--config", config_path, "config file (sections, key = value); flags override it");
  app.require_subcommand(0, 1);

  // Flag values per subcommand, keyed by config key.
  std::map<std::string, std::map<std::string, std::string>> flag_values;
  std::map<std::string, std::map<std::string, CLI::Option*>> flag_options;
  for (const auto& cmd : command_table()) {
    CLI::App* sub = app.add_subcommand(cmd.name, cmd.help);
    sub->add_option("--config", config_path, "config file");
    auto& values = flag_values[cmd.name];
    std::vector<std::pair<std::string, std::string>> keys{{"out", ""}};
    for (const auto& kd : cmd.keys) keys.push_back(kd);
    for (const auto& [k, d] : keys) {
      const KeySpec* ks = find_key(k);
      // Boolean keys are switches; --name=false still works.
      flag_options[cmd.name][k] = d == "false" ? sub->add_flag(ks->flag + "{true}", values[k], ks->help)
                                               : sub->add_option(ks->flag, values[k], ks->help);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    ConfigFile file;
    if (!config_path.empty()) file = load_config(config_path);
    std::string command;
    if (!app.get_subcommands().empty()) {
      command = app.get_subcommands().front()->get_name();
    } else if (file.command) {
      command = *file.command;
    } else {
      std::cerr << app.help();
      return kExitConfig;
    }
    std::map<std::string, std::string> flags;
    if (flag_options.count(command))
      for (const auto& [k, opt] : flag_options[command])
        if (opt->count() > 0) flags[k] = flag_values[command][k];
    const RunConfig config = RunConfig::resolve(command, file, flags);
    return run(config, std::cout, std::cerr);
  } catch (const ConfigError& e) {
    std::cerr << "bundle-lab: configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "bundle-lab: " << e.what() << "\n";
    return kExitComputation;
  }
}
