#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "irscoex/config.hpp"

// irscoex run <config-file>
// irscoex preset <fig3|fig4|fig5|fig6|validate> --out <dir> [--seed k] [--slots n]
// exit codes: 0 success, 1 config error, 2 runtime error

int main(int argc, char** argv) {
  CLI::App app{"multi-operator reflector coexistence simulator"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run_cmd = app.add_subcommand("run", "run a config-file experiment");
  run_cmd->add_option("config", config_path, "experiment config file")->required();

  std::string preset_name, out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> slots;
  auto* preset_cmd = app.add_subcommand("preset", "run a built-in preset");
  preset_cmd->add_option("name", preset_name, "one of fig3, fig4, fig5, fig6, validate")
      ->required();
  preset_cmd->add_option("--out", out_dir, "output directory")->required();
  preset_cmd->add_option("--seed", seed, "override the preset's seed");
  preset_cmd->add_option("--slots", slots, "override the preset's slot count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*run_cmd) {
      const irscoex::ExperimentSpec spec = irscoex::load_config_file(config_path);
      if (!spec.preset.empty())
        return irscoex::run_preset(spec.preset, spec.output, std::nullopt, std::nullopt,
                                   std::cout);
      irscoex::run_experiment(spec, std::cout);
      return 0;
    }
    return irscoex::run_preset(preset_name, out_dir, seed, slots, std::cout);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
