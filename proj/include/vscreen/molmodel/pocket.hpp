//
// Project vscreen - Copyright 2026 the vscreen authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vscreen/molmodel/elements.hpp"

namespace vscreen {

struct ProteinAtom {
  Element element = Element::C;
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
};

/// A rigid binding-site description: a scalar steric field sampled on a
/// regular grid plus the protein atoms the field was derived from. The grid
/// is stored x-fastest, i.e. value(ix, iy, iz) lives at index
/// ix + dims[0] * (iy + dims[1] * iz).
struct Pocket {
  std::string id;
  Eigen::Vector3d origin = Eigen::Vector3d::Zero();
  double spacing = 0.5;
  std::array<int, 3> dims{0, 0, 0};
  std::vector<double> values;
  std::vector<ProteinAtom> protein_atoms;

  std::size_t value_index(int ix, int iy, int iz) const {
    return static_cast<std::size_t>(ix) +
           static_cast<std::size_t>(dims[0]) *
               (static_cast<std::size_t>(iy) +
                static_cast<std::size_t>(dims[1]) * static_cast<std::size_t>(iz));
  }

  double value_at(int ix, int iy, int iz) const {
    return values[value_index(ix, iy, iz)];
  }

  /// Position of the voxel node (ix, iy, iz).
  Eigen::Vector3d node_position(int ix, int iy, int iz) const {
    return origin + spacing * Eigen::Vector3d(ix, iy, iz);
  }

  /// Geometric center of the grid box.
  Eigen::Vector3d box_center() const {
    return origin + 0.5 * spacing *
                        Eigen::Vector3d(dims[0] - 1, dims[1] - 1, dims[2] - 1);
  }
};

}  // namespace vscreen
