#include "lcf/fem/mesh.hpp"

#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "lcf/error.hpp"
#include "lcf/fem/hex8.hpp"

namespace lcf::fem {

namespace {

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& tok, std::size_t line) {
  double v = 0.0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
    throw Error("mesh line " + std::to_string(line) + ": bad number '" + tok + "'");
  return v;
}

long parse_int(const std::string& tok, std::size_t line) {
  long v = 0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
    throw Error("mesh line " + std::to_string(line) + ": bad integer '" + tok + "'");
  return v;
}

std::vector<std::string> tokens(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  for (std::string t; ss >> t;) out.push_back(t);
  return out;
}

}  // namespace

std::array<Vec3, 8> Mesh::element_coords(std::size_t e) const {
  std::array<Vec3, 8> x;
  for (std::size_t a = 0; a < 8; ++a) x[a] = nodes[static_cast<std::size_t>(elements[e][a])];
  return x;
}

void Mesh::validate() const {
  if (material.size() != elements.size()) throw Error("mesh: material tags do not match element count");
  for (std::size_t e = 0; e < elements.size(); ++e) {
    for (int n : elements[e])
      if (n < 0 || static_cast<std::size_t>(n) >= nodes.size())
        throw Error("mesh: element " + std::to_string(e) + " references missing node " + std::to_string(n));
    const auto x = element_coords(e);
    for (const auto& gp : gauss_points()) shape_eval(x, gp, static_cast<long>(e));
  }
}

int Mesh::nearest_node(const Vec3& p) const {
  int best = -1;
  double dist = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double d = (nodes[i] - p).squaredNorm();
    if (d < dist) {
      dist = d;
      best = static_cast<int>(i);
    }
  }
  return best;
}

std::vector<int> Mesh::nodes_on_plane(int axis, double value, double tol) const {
  std::vector<int> out;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (std::abs(nodes[i][axis] - value) <= tol) out.push_back(static_cast<int>(i));
  return out;
}

std::pair<Vec3, Vec3> Mesh::bounds() const {
  Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
  Vec3 hi = -lo;
  for (const auto& x : nodes) {
    lo = lo.cwiseMin(x);
    hi = hi.cwiseMax(x);
  }
  return {lo, hi};
}

Mesh read_mesh(std::istream& in) {
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(in, line)) throw Error("mesh: empty input");
  const auto head = tokens(line);
  if (head.size() != 4 || head[0] != "nodes" || head[2] != "elements")
    throw Error("mesh line 1: expected 'nodes N elements M'");
  const long n = parse_int(head[1], lineno);
  const long m = parse_int(head[3], lineno);
  if (n < 0 || m < 0) throw Error("mesh line 1: negative counts");

  Mesh mesh;
  mesh.nodes.reserve(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) {
    ++lineno;
    if (!std::getline(in, line)) throw Error("mesh: unexpected end of file in node block");
    const auto t = tokens(line);
    if (t.size() != 4) throw Error("mesh line " + std::to_string(lineno) + ": expected 'id x y z'");
    if (parse_int(t[0], lineno) != i) throw Error("mesh line " + std::to_string(lineno) + ": node ids must be 0..N-1 in order");
    mesh.nodes.emplace_back(parse_double(t[1], lineno), parse_double(t[2], lineno), parse_double(t[3], lineno));
  }
  mesh.elements.reserve(static_cast<std::size_t>(m));
  for (long e = 0; e < m; ++e) {
    ++lineno;
    if (!std::getline(in, line)) throw Error("mesh: unexpected end of file in element block");
    const auto t = tokens(line);
    if (t.size() != 10) throw Error("mesh line " + std::to_string(lineno) + ": expected 'id n1..n8 material'");
    if (parse_int(t[0], lineno) != e) throw Error("mesh line " + std::to_string(lineno) + ": element ids must be 0..M-1 in order");
    std::array<int, 8> conn{};
    for (std::size_t a = 0; a < 8; ++a) {
      const long id = parse_int(t[a + 1], lineno);
      if (id < 0 || id >= n) throw Error("mesh line " + std::to_string(lineno) + ": node " + std::to_string(id) + " out of range");
      conn[a] = static_cast<int>(id);
    }
    mesh.elements.push_back(conn);
    mesh.material.push_back(static_cast<int>(parse_int(t[9], lineno)));
  }
  return mesh;
}

Mesh read_mesh(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open mesh file " + path.string());
  try {
    return read_mesh(in);
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

void write_mesh(std::ostream& out, const Mesh& mesh) {
  out << "nodes " << mesh.nodes.size() << " elements " << mesh.elements.size() << '\n';
  for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
    const auto& x = mesh.nodes[i];
    out << i << ' ' << shortest(x[0]) << ' ' << shortest(x[1]) << ' ' << shortest(x[2]) << '\n';
  }
  for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
    out << e;
    for (int n : mesh.elements[e]) out << ' ' << n;
    out << ' ' << mesh.material[e] << '\n';
  }
}

void write_mesh(const std::filesystem::path& path, const Mesh& mesh) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write mesh file " + path.string());
  write_mesh(out, mesh);
  if (!out) throw Error("write failed for mesh file " + path.string());
}

}  // namespace lcf::fem
