#include "lcf/driver/scenario.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "lcf/error.hpp"

namespace lcf::driver {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& text, const std::string& where) {
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw Error(where + ": expected a number, got '" + text + "'");
  return v;
}

int parse_int(const std::string& text, const std::string& where) {
  int v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw Error(where + ": expected an integer, got '" + text + "'");
  return v;
}

std::vector<double> parse_list(const std::string& text, const std::string& where) {
  std::vector<double> out;
  std::string cleaned = text;
  for (char& c : cleaned)
    if (c == ',') c = ' ';
  std::istringstream ss(cleaned);
  for (std::string tok; ss >> tok;) out.push_back(parse_double(tok, where));
  return out;
}

bool parse_bool(const std::string& text, const std::string& where) {
  if (text == "on" || text == "true" || text == "yes" || text == "1") return true;
  if (text == "off" || text == "false" || text == "no" || text == "0") return false;
  throw Error(where + ": expected on/off, got '" + text + "'");
}

TrilinearLaw parse_law(const std::string& text, const std::string& where) {
  const auto v = parse_list(text, where);
  if (v.size() != 5 && v.size() != 6) throw Error(where + ": expected 'w1 w2 k1 k2 k3 [w_min]'");
  return {v[0], v[1], v[2], v[3], v[4], v.size() == 6 ? v[5] : kIntegrityFloor};
}

MaterialParams preset(const std::string& name, const std::string& where) {
  if (name == "dogbone") return presets::dogbone();
  if (name == "compact_tension") return presets::compact_tension();
  MaterialParams m;
  m.damage_enabled = false;
  if (name == "demo_none") {
    m.plasticity = presets::kinematic_demo(presets::DemoHardening::none);
  } else if (name == "demo_prager") {
    m.plasticity = presets::kinematic_demo(presets::DemoHardening::prager);
  } else if (name == "demo_af") {
    m.plasticity = presets::kinematic_demo(presets::DemoHardening::armstrong_frederick);
  } else {
    throw Error(where + ": unknown preset '" + name + "'");
  }
  return m;
}

int parse_axis(const std::string& text, const std::string& where) {
  if (text == "x") return 0;
  if (text == "y") return 1;
  if (text == "z") return 2;
  throw Error(where + ": expected x, y or z");
}

}  // namespace

IniDocument IniDocument::parse(std::istream& in, const std::string& origin) {
  IniDocument doc;
  std::string section;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto where = origin + ":" + std::to_string(lineno);
    if (const auto c = line.find_first_of("#;"); c != std::string::npos) line.erase(c);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw Error(where + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) throw Error(where + ": empty section name");
      doc.sections_[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(where + ": expected 'key = value'");
    if (section.empty()) throw Error(where + ": key outside of a section");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw Error(where + ": empty key");
    auto& sec = doc.sections_[section];
    if (sec.count(key)) throw Error(where + ": duplicate key '" + key + "' in [" + section + "]");
    sec[key] = value;
  }
  return doc;
}

IniDocument IniDocument::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open scenario " + path.string());
  return parse(in, path.string());
}

bool IniDocument::has(const std::string& section, const std::string& key) const {
  const auto it = sections_.find(section);
  return it != sections_.end() && it->second.count(key);
}

std::optional<std::string> IniDocument::get(const std::string& section, const std::string& key) const {
  const auto it = sections_.find(section);
  if (it == sections_.end()) return std::nullopt;
  const auto kv = it->second.find(key);
  if (kv == it->second.end()) return std::nullopt;
  return kv->second;
}

Scenario scenario_from_ini(const IniDocument& doc, const std::filesystem::path& base_dir) {
  using Handler = std::function<void(const std::string&, const std::string&)>;
  Scenario sc;

  // The preset must be applied before individual overrides.
  if (const auto p = doc.get("material", "preset")) sc.material = preset(*p, "[material] preset");

  auto& pl = sc.material.plasticity;
  std::map<std::string, std::map<std::string, Handler>> handlers;
  handlers["run"] = {
      {"name", [&](const std::string& v, const std::string&) { sc.name = v; }},
      {"mode",
       [&](const std::string& v, const std::string& w) {
         if (v == "matpoint")
           sc.mode = RunMode::matpoint;
         else if (v == "fem")
           sc.mode = RunMode::fem;
         else
           throw Error(w + ": mode must be matpoint or fem");
       }},
  };
  handlers["material"] = {
      {"preset", [](const std::string&, const std::string&) {}},
      {"E", [&](const std::string& v, const std::string& w) { pl.elastic.E = parse_double(v, w); }},
      {"nu", [&](const std::string& v, const std::string& w) { pl.elastic.nu = parse_double(v, w); }},
      {"sigma0", [&](const std::string& v, const std::string& w) { pl.iso.sigma0 = parse_double(v, w); }},
      {"sigma_inf", [&](const std::string& v, const std::string& w) { pl.iso.sigmaInf = parse_double(v, w); }},
      {"a", [&](const std::string& v, const std::string& w) { pl.iso.a = parse_double(v, w); }},
      {"backstress",
       [&](const std::string& v, const std::string& w) {
         const auto vals = parse_list(v, w);
         if (vals.size() % 2) throw Error(w + ": backstress needs h b pairs");
         pl.kinematic.clear();
         for (std::size_t i = 0; i < vals.size(); i += 2) pl.kinematic.push_back({vals[i], vals[i + 1]});
       }},
      {"ell", [&](const std::string& v, const std::string& w) { sc.material.ell = parse_double(v, w); }},
  };
  handlers["damage"] = {
      {"enabled",
       [&](const std::string& v, const std::string& w) { sc.material.damage_enabled = parse_bool(v, w); }},
      {"isotropic", [&](const std::string& v, const std::string& w) { sc.material.damage.isotropic = parse_law(v, w); }},
      {"unilateral",
       [&](const std::string& v, const std::string& w) { sc.material.damage.unilateral = parse_law(v, w); }},
      {"alpha", [&](const std::string& v, const std::string& w) { sc.material.activation.alpha = parse_double(v, w); }},
      {"m", [&](const std::string& v, const std::string& w) { sc.material.activation.m = parse_double(v, w); }},
  };
  handlers["protocol"] = {
      {"amplitude", [&](const std::string& v, const std::string& w) { sc.protocol.amplitude = parse_double(v, w); }},
      {"ratio", [&](const std::string& v, const std::string& w) { sc.protocol.ratio = parse_double(v, w); }},
      {"cycles", [&](const std::string& v, const std::string& w) { sc.protocol.cycles = parse_int(v, w); }},
      {"points_per_quarter",
       [&](const std::string& v, const std::string& w) { sc.protocol.points_per_quarter = parse_int(v, w); }},
      {"strain_rate", [&](const std::string& v, const std::string& w) { sc.protocol.strain_rate = parse_double(v, w); }},
  };
  handlers["fem"] = {
      {"mesh", [&](const std::string& v, const std::string&) { sc.fem.mesh = base_dir / v; }},
      {"load_axis", [&](const std::string& v, const std::string& w) { sc.fem.load_axis = parse_axis(v, w); }},
      {"amplitude", [&](const std::string& v, const std::string& w) { sc.fem.amplitude = parse_double(v, w); }},
      {"amplitude_step", [&](const std::string& v, const std::string& w) { sc.fem.amplitude_step = parse_double(v, w); }},
      {"steps_per_load", [&](const std::string& v, const std::string& w) { sc.fem.steps_per_load = parse_int(v, w); }},
      {"release_substeps",
       [&](const std::string& v, const std::string& w) { sc.fem.release_substeps = parse_int(v, w); }},
      {"snapshot_every", [&](const std::string& v, const std::string& w) { sc.fem.snapshot_every = parse_int(v, w); }},
      {"mean_dilatation",
       [&](const std::string& v, const std::string& w) { sc.fem.mean_dilatation = parse_bool(v, w); }},
      {"cod_nodes",
       [&](const std::string& v, const std::string& w) {
         const auto vals = parse_list(v, w);
         if (vals.size() != 2) throw Error(w + ": cod_nodes needs two node ids");
         sc.fem.cod_node_a = static_cast<int>(vals[0]);
         sc.fem.cod_node_b = static_cast<int>(vals[1]);
       }},
  };
  handlers["solver"] = {
      {"tol", [&](const std::string& v, const std::string& w) { sc.tolerance = parse_double(v, w); }},
      {"max_iter", [&](const std::string& v, const std::string& w) { sc.max_iterations = parse_int(v, w); }},
  };
  handlers["output"] = {
      {"directory", [&](const std::string& v, const std::string&) { sc.output_dir = base_dir / v; }},
  };

  for (const auto& [section, keys] : doc.sections()) {
    const auto h = handlers.find(section);
    if (h == handlers.end()) throw Error("unknown section [" + section + "]");
    for (const auto& [key, value] : keys) {
      const auto k = h->second.find(key);
      if (k == h->second.end()) throw Error("unknown key '" + key + "' in [" + section + "]");
      k->second(value, "[" + section + "] " + key);
    }
  }

  if (sc.mode == RunMode::fem && sc.fem.mesh.empty()) throw Error("fem mode needs [fem] mesh");
  if (!(sc.tolerance > 0.0)) throw Error("[solver] tol must be positive");
  if (sc.max_iterations < 1) throw Error("[solver] max_iter must be >= 1");
  if (sc.fem.steps_per_load < 1 || sc.fem.release_substeps < 1)
    throw Error("[fem] steps_per_load and release_substeps must be >= 1");
  try {
    sc.material.validate();
    sc.protocol.validate();
  } catch (const ContractViolation& e) {
    throw Error(std::string("invalid scenario: ") + e.what());
  }
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  const auto doc = IniDocument::load(path);
  auto sc = scenario_from_ini(doc, path.parent_path());
  sc.source = path;
  if (!doc.has("run", "name")) sc.name = path.stem().string();
  return sc;
}

}  // namespace lcf::driver
