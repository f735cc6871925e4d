#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "lcf/tensor.hpp"

namespace lcf::fem {

/// Hexahedral mesh. Element nodes follow the usual right-handed ordering:
/// bottom face (z- in local coordinates) counter-clockwise, then top face.
struct Mesh {
  std::vector<Vec3> nodes;                    // mm
  std::vector<std::array<int, 8>> elements;
  std::vector<int> material;                  // one tag per element

  std::size_t num_nodes() const { return nodes.size(); }
  std::size_t num_elements() const { return elements.size(); }
  std::size_t num_dofs() const { return 3 * nodes.size(); }

  std::array<Vec3, 8> element_coords(std::size_t e) const;

  /// Checks connectivity ranges and that every Gauss point has a positive
  /// Jacobian determinant.
  void validate() const;

  /// Index of the node closest to `p`.
  int nearest_node(const Vec3& p) const;
  /// Nodes whose `axis` coordinate equals `value` within `tol`.
  std::vector<int> nodes_on_plane(int axis, double value, double tol = 1e-9) const;
  /// Axis-aligned bounding box (min, max).
  std::pair<Vec3, Vec3> bounds() const;
};

// Plain-text format:
//   nodes N elements M
//   id x y z            (N lines, ids 0..N-1)
//   id n1 .. n8 tag     (M lines, ids 0..M-1)
// Coordinates are written in shortest round-trip form, so write(read(x))
// reproduces any file this writer produced byte for byte.
Mesh read_mesh(std::istream& in);
Mesh read_mesh(const std::filesystem::path& path);
void write_mesh(std::ostream& out, const Mesh& mesh);
void write_mesh(const std::filesystem::path& path, const Mesh& mesh);

}  // namespace lcf::fem
