// lcf: command-line driver for material-point and finite-element runs.

#include <algorithm>
#include <exception>
#include <filesystem>
#include <future>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "lcf/driver/runner.hpp"
#include "lcf/error.hpp"
#include "lcf/fem/notched_plate.hpp"

namespace fs = std::filesystem;
using namespace lcf;

namespace {

struct CommonFlags {
  double tol = 0.0;
  int max_cycles = 0;
  std::string output_dir;

  driver::RunOverrides overrides() const {
    driver::RunOverrides ov;
    if (tol > 0.0) ov.tolerance = tol;
    if (max_cycles > 0) ov.max_cycles = max_cycles;
    if (!output_dir.empty()) ov.output_dir = output_dir;
    return ov;
  }
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--tol", f.tol, "Return-mapping tolerance relative to sigma0")->check(CLI::PositiveNumber);
  cmd->add_option("--max-cycles", f.max_cycles, "Stop after this many cycles")->check(CLI::PositiveNumber);
  cmd->add_option("--output-dir", f.output_dir, "Directory for CSV output");
}

int run_one(const fs::path& file, driver::RunMode expected, bool check_mode, const CommonFlags& flags) {
  auto sc = driver::load_scenario(file);
  if (check_mode && sc.mode != expected)
    throw Error(file.string() + ": scenario mode does not match the subcommand");
  driver::apply_overrides(sc, flags.overrides());
  for (const auto& p : driver::run_scenario(sc)) std::cout << p.string() << '\n';
  return 0;
}

int sweep(const fs::path& dir, const CommonFlags& flags, unsigned jobs) {
  if (!fs::is_directory(dir)) throw Error(dir.string() + " is not a directory");
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".ini") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw Error("no .ini scenarios in " + dir.string());

  struct Outcome {
    std::vector<fs::path> written;
    std::string error;
  };
  const auto task = [&flags](fs::path f) {
    Outcome o;
    try {
      auto sc = driver::load_scenario(f);
      driver::apply_overrides(sc, flags.overrides());
      o.written = driver::run_scenario(sc);
    } catch (const std::exception& e) {
      o.error = e.what();
    }
    return o;
  };

  int failures = 0;
  for (std::size_t start = 0; start < files.size(); start += jobs) {
    std::vector<std::future<Outcome>> running;
    for (std::size_t i = start; i < std::min(files.size(), start + jobs); ++i)
      running.push_back(std::async(std::launch::async, task, files[i]));
    for (std::size_t i = 0; i < running.size(); ++i) {
      const auto o = running[i].get();
      const auto& f = files[start + i];
      if (o.error.empty()) {
        std::cout << "ok    " << f.string() << '\n';
      } else {
        std::cerr << "FAIL  " << f.string() << ": " << o.error << '\n';
        ++failures;
      }
    }
  }
  return failures ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cyclic plastic-damage simulations: material point and nonlocal finite elements"};
  app.require_subcommand(1);

  CommonFlags mp_flags, fem_flags, sweep_flags;
  std::string mp_file, fem_file, sweep_dir;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());

  auto* mp = app.add_subcommand("matpoint", "Uniaxial-stress material point under a strain-controlled protocol");
  mp->add_option("scenario", mp_file, "Scenario file")->required()->check(CLI::ExistingFile);
  add_common(mp, mp_flags);

  auto* fe = app.add_subcommand("fem", "Grip-controlled cyclic run of a hexahedral mesh");
  fe->add_option("scenario", fem_file, "Scenario file")->required()->check(CLI::ExistingFile);
  add_common(fe, fem_flags);

  auto* sw = app.add_subcommand("sweep", "Run every .ini scenario in a directory concurrently");
  sw->add_option("directory", sweep_dir, "Directory with scenario files")->required()->check(CLI::ExistingDirectory);
  sw->add_option("--jobs,-j", jobs, "Concurrent runs")->check(CLI::PositiveNumber);
  add_common(sw, sweep_flags);

  fem::NotchedPlateSpec plate;
  std::string mesh_out;
  auto* me = app.add_subcommand("mesh", "Write a structured edge-notched plate mesh");
  me->add_option("output", mesh_out, "Mesh file to write")->required();
  me->add_option("--size", plate.element_size, "Element size, mm")->check(CLI::PositiveNumber);
  me->add_option("--width", plate.width, "Plate width, mm")->check(CLI::PositiveNumber);
  me->add_option("--height", plate.height, "Plate height, mm")->check(CLI::PositiveNumber);
  me->add_option("--thickness", plate.thickness, "Plate thickness, mm")->check(CLI::PositiveNumber);
  me->add_option("--notch-depth", plate.notch_depth, "Notch depth, mm")->check(CLI::NonNegativeNumber);
  me->add_option("--notch-height", plate.notch_height, "Notch height, mm")->check(CLI::NonNegativeNumber);
  me->add_option("--layers", plate.layers, "Elements through the thickness")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*mp) return run_one(mp_file, driver::RunMode::matpoint, true, mp_flags);
    if (*fe) return run_one(fem_file, driver::RunMode::fem, true, fem_flags);
    if (*sw) return sweep(sweep_dir, sweep_flags, jobs);
    if (*me) {
      fem::write_mesh(fs::path(mesh_out), fem::make_notched_plate(plate));
      std::cout << mesh_out << '\n';
      return 0;
    }
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << " (last residual " << e.last_residual() << ")\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
