//
// Project vscreen - Copyright 2026 the vscreen authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "vscreen/dockengine/grid.hpp"

#include <cmath>
#include <limits>

#include "vscreen/error.hpp"

namespace vscreen {

Pocket build_pocket(const std::vector<ProteinAtom> &protein,
                    const std::string &id, const Eigen::Vector3d &center,
                    double radius, double spacing) {
  if (radius <= 0.0) throw InvalidArgument("pocket radius must be positive");
  if (spacing < 0.25 || spacing > 1.0)
    throw InvalidArgument("pocket spacing must lie in [0.25, 1.0]");

  std::vector<Eigen::Vector3d> heavy;
  for (const ProteinAtom &atom : protein)
    if (is_heavy_element(atom.element)) heavy.push_back(atom.position);
  if (heavy.empty()) throw InvalidArgument("protein has no heavy atoms");

  Pocket pocket;
  pocket.id = id;
  pocket.spacing = spacing;
  pocket.origin = center - Eigen::Vector3d::Constant(radius);
  const int steps = static_cast<int>(std::ceil(2.0 * radius / spacing));
  pocket.dims = {steps + 1, steps + 1, steps + 1};
  pocket.protein_atoms = protein;
  pocket.values.resize(static_cast<std::size_t>(pocket.dims[0]) *
                       pocket.dims[1] * pocket.dims[2]);

  for (int iz = 0; iz < pocket.dims[2]; ++iz) {
    for (int iy = 0; iy < pocket.dims[1]; ++iy) {
      for (int ix = 0; ix < pocket.dims[0]; ++ix) {
        const Eigen::Vector3d node = pocket.node_position(ix, iy, iz);
        double d2 = std::numeric_limits<double>::infinity();
        for (const Eigen::Vector3d &p : heavy)
          d2 = std::min(d2, (node - p).squaredNorm());
        const double d = std::sqrt(d2);

        double value = 0.0;
        if (d < kClashDistance) {
          value = kClashValue;
        } else if (d <= kContactDistance && (node - center).norm() <= radius) {
          value = kContactValue;
        }
        pocket.values[pocket.value_index(ix, iy, iz)] = value;
      }
    }
  }
  return pocket;
}

double pocket_field_value(const Pocket &pocket, const Eigen::Vector3d &point) {
  const Eigen::Vector3d local = (point - pocket.origin) / pocket.spacing;
  const double max_x = static_cast<double>(pocket.dims[0] - 1);
  const double max_y = static_cast<double>(pocket.dims[1] - 1);
  const double max_z = static_cast<double>(pocket.dims[2] - 1);
  if (local.x() < 0.0 || local.y() < 0.0 || local.z() < 0.0 ||
      local.x() > max_x || local.y() > max_y || local.z() > max_z)
    return kClashValue;

  // Cell index, clamped so a point on the far face uses the last cell
  // with fractional coordinate 1.
  int ix = std::min(static_cast<int>(local.x()), pocket.dims[0] - 2);
  int iy = std::min(static_cast<int>(local.y()), pocket.dims[1] - 2);
  int iz = std::min(static_cast<int>(local.z()), pocket.dims[2] - 2);
  ix = std::max(ix, 0);
  iy = std::max(iy, 0);
  iz = std::max(iz, 0);
  const double fx = local.x() - ix;
  const double fy = local.y() - iy;
  const double fz = local.z() - iz;

  double acc = 0.0;
  for (int cz = 0; cz < 2; ++cz) {
    for (int cy = 0; cy < 2; ++cy) {
      for (int cx = 0; cx < 2; ++cx) {
        const double weight = (cx ? fx : 1.0 - fx) * (cy ? fy : 1.0 - fy) *
                              (cz ? fz : 1.0 - fz);
        acc += weight * pocket.value_at(ix + cx, iy + cy, iz + cz);
      }
    }
  }
  return acc;
}

double geo_score(const Pocket &pocket, const Ligand &ligand,
                 const Conformation &conf, EvalCounter *counter) {
  double total = 0.0;
  std::uint64_t heavy = 0;
  for (std::size_t i = 0; i < ligand.atoms.size(); ++i) {
    if (!ligand.atoms[i].is_heavy) continue;
    total += pocket_field_value(pocket, conf.col(static_cast<Eigen::Index>(i)));
    ++heavy;
  }
  if (counter != nullptr) counter->scoring_evals += heavy;
  return total;
}

}  // namespace vscreen
