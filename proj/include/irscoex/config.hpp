#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "irscoex/sim.hpp"

// Config-file front end and experiment orchestration. Configs are flat INI
// sections ([geometry], [system], [scheme], [sweep]); all dB values convert
// to linear here and nowhere else. Output is CSV only.

namespace irscoex {

struct ExperimentSpec {
  std::string name = "experiment";
  sim::SystemConfig base;
  std::string sweep_axis;  // empty: single campaign
  std::vector<double> sweep_values;
  std::string output = "results.csv";
  std::string preset;  // when set, fully determines the experiment (output may
                       // name the target directory; all other keys rejected)
};

// throws std::invalid_argument naming the offending key and constraint
ExperimentSpec parse_config(const std::string& text);
ExperimentSpec load_config_file(const std::string& path);

// inverse of parse_config: parse_config(render(spec)) reproduces spec
std::string render(const ExperimentSpec& spec);

// formats one numeric cell (%.12g); NaN or infinity throws std::runtime_error
std::string csv_num(double v);

// runs the campaigns of a spec and writes spec.output; returns rows written
int run_experiment(const ExperimentSpec& spec, std::ostream& log);

// figure-reproduction and validation presets (fixed seeds, overridable slot
// counts); returns a process exit code (0 ok, 2 validation failure)
const std::vector<std::string>& preset_names();
bool is_preset(const std::string& name);
int run_preset(const std::string& name, const std::string& out_dir,
               std::optional<std::uint64_t> seed, std::optional<int> slots, std::ostream& log);

}  // namespace irscoex
