#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include "lcf/driver/protocol.hpp"
#include "lcf/material.hpp"

namespace lcf::driver {

/// Raw sectioned key = value document. '#' and ';' start comments.
class IniDocument {
 public:
  static IniDocument parse(std::istream& in, const std::string& origin = "<input>");
  static IniDocument load(const std::filesystem::path& path);

  bool has(const std::string& section, const std::string& key) const;
  std::optional<std::string> get(const std::string& section, const std::string& key) const;
  const std::map<std::string, std::map<std::string, std::string>>& sections() const { return sections_; }

 private:
  std::map<std::string, std::map<std::string, std::string>> sections_;
};

enum class RunMode { matpoint, fem };

/// Finite-element part of a scenario.
struct FemSection {
  std::filesystem::path mesh;
  int load_axis = 1;          // axis of the grip faces
  double amplitude = 0.05;    // mm, first cycle
  double amplitude_step = 0.0;  // mm added per cycle
  int steps_per_load = 10;
  int release_substeps = 10;
  int snapshot_every = 0;     // 0 = none
  int cod_node_a = -1;
  int cod_node_b = -1;
  bool mean_dilatation = false;  // B-bar elements
};

struct Scenario {
  std::string name = "run";
  RunMode mode = RunMode::matpoint;
  MaterialParams material;
  CycleProtocol protocol;
  FemSection fem;
  double tolerance = 1e-8;
  int max_iterations = 50;
  std::filesystem::path output_dir = ".";
  std::filesystem::path source;  // file the scenario came from, if any
};

/// Builds a validated scenario. Recognised sections: [run], [material],
/// [damage], [protocol], [fem], [solver], [output]. Unknown sections or keys
/// are errors. Relative paths resolve against `base_dir`.
Scenario scenario_from_ini(const IniDocument& doc, const std::filesystem::path& base_dir = ".");
Scenario load_scenario(const std::filesystem::path& path);

}  // namespace lcf::driver
