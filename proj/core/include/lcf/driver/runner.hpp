#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "lcf/driver/scenario.hpp"

namespace lcf::driver {

/// Command-line overrides applied on top of a scenario file.
struct RunOverrides {
  std::optional<double> tolerance;
  std::optional<int> max_cycles;
  std::optional<std::filesystem::path> output_dir;
};

void apply_overrides(Scenario& sc, const RunOverrides& ov);

/// Runs the scenario and writes `<name>_history.csv` and `<name>_cycles.csv`
/// (plus snapshots for fem runs) into its output directory. Returns the
/// written files.
std::vector<std::filesystem::path> run_scenario(const Scenario& sc);

}  // namespace lcf::driver
