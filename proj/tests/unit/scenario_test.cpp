#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "lcf/driver/runner.hpp"
#include "lcf/driver/scenario.hpp"
#include "lcf/error.hpp"

using namespace lcf;
using namespace lcf::driver;
namespace fs = std::filesystem;

namespace {

Scenario parse(const std::string& text, const fs::path& base = ".") {
  std::istringstream in(text);
  return scenario_from_ini(IniDocument::parse(in), base);
}

std::string error_of(const std::string& text) {
  try {
    parse(text);
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(Ini, SectionsCommentsAndWhitespace) {
  std::istringstream in("# leading comment\n[a]\n  x = 1   ; trailing\n\ny=two words\n[b]\nz = 3\n");
  const auto doc = IniDocument::parse(in);
  EXPECT_EQ(doc.get("a", "x"), "1");
  EXPECT_EQ(doc.get("a", "y"), "two words");
  EXPECT_EQ(doc.get("b", "z"), "3");
  EXPECT_FALSE(doc.get("b", "x"));
}

TEST(Ini, SyntaxErrorsCarryLineNumbers) {
  const auto fails = [](const std::string& text, const std::string& fragment) {
    std::istringstream in(text);
    try {
      IniDocument::parse(in, "cfg");
    } catch (const Error& e) {
      EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
      return;
    }
    ADD_FAILURE() << "accepted: " << text;
  };
  fails("x = 1\n", "cfg:1");
  fails("[a]\nnot a pair\n", "cfg:2");
  fails("[a\n", "cfg:1");
  fails("[a]\nx = 1\nx = 2\n", "duplicate");
}

TEST(Scenario, PresetWithOverrides) {
  const auto sc = parse(
      "[run]\nmode = matpoint\nname = db\n"
      "[material]\npreset = dogbone\nsigma0 = 210\nbackstress = 2500 25, 60000 550, 100 1\n"
      "[damage]\nunilateral = 0.9 0.1 0.01 5 6\nm = -15000\n"
      "[protocol]\namplitude = 0.01\ncycles = 12\npoints_per_quarter = 8\n"
      "[solver]\ntol = 1e-9\n");
  EXPECT_EQ(sc.name, "db");
  EXPECT_EQ(sc.mode, RunMode::matpoint);
  EXPECT_EQ(sc.material.plasticity.iso.sigma0, 210.0);
  EXPECT_EQ(sc.material.plasticity.iso.sigmaInf, 230.0);
  ASSERT_EQ(sc.material.plasticity.kinematic.size(), 3u);
  EXPECT_EQ(sc.material.plasticity.kinematic[2].b, 1.0);
  EXPECT_EQ(sc.material.damage.unilateral.k3, 6.0);
  EXPECT_EQ(sc.material.damage.unilateral.w_min, kIntegrityFloor);
  EXPECT_EQ(sc.material.damage.isotropic.k3, 50.0);
  EXPECT_EQ(sc.material.activation.m, -15000.0);
  EXPECT_EQ(sc.protocol.cycles, 12);
  EXPECT_EQ(sc.tolerance, 1e-9);
}

TEST(Scenario, DemoPresetsHaveNoDamage) {
  const auto sc = parse("[material]\npreset = demo_prager\n");
  EXPECT_FALSE(sc.material.damage_enabled);
  EXPECT_EQ(sc.material.plasticity.kinematic.at(0).h, 7500.0);
}

TEST(Scenario, RejectsUnknownNamesAndBadValues) {
  EXPECT_NE(error_of("[materail]\nE = 1\n").find("unknown section"), std::string::npos);
  EXPECT_NE(error_of("[material]\nYoung = 1\n").find("unknown key"), std::string::npos);
  EXPECT_NE(error_of("[material]\nE = abc\n").find("expected a number"), std::string::npos);
  EXPECT_NE(error_of("[material]\npreset = steel\n").find("unknown preset"), std::string::npos);
  EXPECT_NE(error_of("[run]\nmode = both\n").find("matpoint or fem"), std::string::npos);
  EXPECT_NE(error_of("[material]\npreset = dogbone\nnu = 0.6\n").find("invalid scenario"), std::string::npos);
  EXPECT_NE(error_of("[protocol]\npoints_per_quarter = 2\n").find("invalid scenario"), std::string::npos);
  EXPECT_NE(error_of("[run]\nmode = fem\n").find("mesh"), std::string::npos);
  EXPECT_NE(error_of("[material]\nbackstress = 1 2 3\n").find("pairs"), std::string::npos);
}

TEST(Scenario, RelativePathsResolveAgainstFile) {
  const auto sc = parse("[run]\nmode = fem\n[material]\npreset = compact_tension\n[fem]\nmesh = meshes/a.mesh\n"
                        "cod_nodes = 4 9\nload_axis = y\nmean_dilatation = true\n[output]\ndirectory = out\n",
                        "/data/cases");
  EXPECT_EQ(sc.fem.mesh, fs::path("/data/cases/meshes/a.mesh"));
  EXPECT_EQ(sc.output_dir, fs::path("/data/cases/out"));
  EXPECT_EQ(sc.fem.cod_node_a, 4);
  EXPECT_EQ(sc.fem.cod_node_b, 9);
  EXPECT_EQ(sc.fem.load_axis, 1);
  EXPECT_TRUE(sc.fem.mean_dilatation);
}

TEST(Scenario, LoadUsesFileStemAsDefaultName) {
  const auto dir = fs::temp_directory_path() / "lcf_scenario_test";
  fs::create_directories(dir);
  const auto file = dir / "elastic_cycle.ini";
  std::ofstream(file) << "[material]\npreset = dogbone\n[protocol]\namplitude = 0.001\n";
  const auto sc = load_scenario(file);
  EXPECT_EQ(sc.name, "elastic_cycle");
  EXPECT_EQ(sc.source, file);
  EXPECT_THROW(load_scenario(dir / "missing.ini"), Error);
}

TEST(Overrides, Apply) {
  auto sc = parse("[material]\npreset = dogbone\n[protocol]\ncycles = 50\n");
  RunOverrides ov;
  ov.tolerance = 1e-10;
  ov.max_cycles = 7;
  ov.output_dir = "/tmp/x";
  apply_overrides(sc, ov);
  EXPECT_EQ(sc.tolerance, 1e-10);
  EXPECT_EQ(sc.protocol.cycles, 7);
  EXPECT_EQ(sc.output_dir, fs::path("/tmp/x"));
  ov = {};
  ov.max_cycles = 0;
  EXPECT_THROW(apply_overrides(sc, ov), Error);
}

TEST(Runner, MatpointScenarioIsDeterministic) {
  const auto dir = fs::temp_directory_path() / "lcf_runner_test";
  fs::remove_all(dir);
  auto sc = parse("[run]\nname = det\n[material]\npreset = dogbone\n[protocol]\namplitude = 0.015\ncycles = 3\n");
  std::string first;
  for (int run = 0; run < 2; ++run) {
    sc.output_dir = dir / std::to_string(run);
    const auto files = run_scenario(sc);
    ASSERT_EQ(files.size(), 2u);
    std::ifstream in(files[0], std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    if (run == 0)
      first = s.str();
    else
      EXPECT_EQ(first, s.str());
  }
  EXPECT_TRUE(fs::exists(dir / "0" / "det_cycles.csv"));
}
