#include "lcf/fem/notched_plate.hpp"

#include <cmath>

#include "lcf/error.hpp"

namespace lcf::fem {

Mesh make_notched_plate(const NotchedPlateSpec& spec) {
  if (!(spec.element_size > 0.0) || spec.layers < 1) throw ContractViolation("notched plate: bad discretisation");
  const int nx = static_cast<int>(std::lround(spec.width / spec.element_size));
  const int ny = static_cast<int>(std::lround(spec.height / spec.element_size));
  const int nz = spec.layers;
  if (nx < 1 || ny < 1) throw ContractViolation("notched plate: element size larger than the plate");
  const double hx = spec.width / nx;
  const double hy = spec.height / ny;
  const double hz = spec.thickness / nz;
  const double y_mid = 0.5 * spec.height;

  const auto grid = [&](int i, int j, int k) { return (k * (ny + 1) + j) * (nx + 1) + i; };
  std::vector<int> remap(static_cast<std::size_t>((nx + 1) * (ny + 1) * (nz + 1)), -1);

  Mesh mesh;
  std::vector<std::array<int, 8>> raw;
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const double xc = (i + 0.5) * hx;
        const double yc = (j + 0.5) * hy;
        if (xc < spec.notch_depth && std::abs(yc - y_mid) < 0.5 * spec.notch_height) continue;
        raw.push_back({grid(i, j, k), grid(i + 1, j, k), grid(i + 1, j + 1, k), grid(i, j + 1, k),
                       grid(i, j, k + 1), grid(i + 1, j, k + 1), grid(i + 1, j + 1, k + 1), grid(i, j + 1, k + 1)});
      }

  for (auto& conn : raw) {
    for (int& n : conn) {
      auto& id = remap[static_cast<std::size_t>(n)];
      if (id < 0) {
        id = static_cast<int>(mesh.nodes.size());
        const int i = n % (nx + 1);
        const int j = (n / (nx + 1)) % (ny + 1);
        const int k = n / ((nx + 1) * (ny + 1));
        mesh.nodes.emplace_back(i * hx, j * hy, k * hz);
      }
      n = id;
    }
    mesh.elements.push_back(conn);
    mesh.material.push_back(0);
  }
  return mesh;
}

}  // namespace lcf::fem
