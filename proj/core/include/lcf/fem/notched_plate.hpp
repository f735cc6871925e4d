#pragma once

#include "lcf/fem/mesh.hpp"

namespace lcf::fem {

/// Structured plate [0, width] x [0, height] x [0, thickness] with a
/// rectangular edge notch cut from x = 0, centred at mid-height. Notch
/// dimensions must be multiples of the element size for the cut to be exact.
struct NotchedPlateSpec {
  double width = 10.0;        // x, mm
  double height = 20.0;       // y, mm (loading direction)
  double thickness = 1.0;     // z, mm
  double notch_depth = 3.0;   // along x from the free edge
  double notch_height = 2.0;  // along y
  double element_size = 1.0;  // in-plane
  int layers = 1;             // elements through the thickness
};

Mesh make_notched_plate(const NotchedPlateSpec& spec);

}  // namespace lcf::fem
