//
// Project vscreen - Copyright 2026 the vscreen authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <vector>

#include "vscreen/geometry/transform.hpp"
#include "vscreen/molmodel/ligand.hpp"
#include "vscreen/molmodel/pocket.hpp"

namespace vscreen {

/// Tally of atom-grid samples, used to check the cost model: every call
/// to geo_score adds the ligand's heavy-atom count.
struct EvalCounter {
  std::uint64_t scoring_evals = 0;
};

inline constexpr double kClashValue = -10.0;
inline constexpr double kContactValue = 1.0;
inline constexpr double kClashDistance = 1.5;   // Å
inline constexpr double kContactDistance = 4.0; // Å

/// Builds the steric field on a node grid covering the cube of half-width
/// radius around center. A node is a clash (-10) within 1.5 Å of any
/// protein heavy atom, a contact (+1) when its protein distance lies in
/// [1.5, 4.0] Å and it sits within radius of the center, and 0 otherwise.
///
/// Throws InvalidArgument when the protein has no heavy atoms, radius is
/// not positive, or spacing lies outside [0.25, 1.0] Å.
Pocket build_pocket(const std::vector<ProteinAtom> &protein,
                    const std::string &id, const Eigen::Vector3d &center,
                    double radius, double spacing);

/// Trilinear interpolation of the node values at one point; outside the
/// node box this is the clash value.
double pocket_field_value(const Pocket &pocket, const Eigen::Vector3d &point);

/// Sum over heavy atoms of the trilinearly interpolated field value at the
/// atom position; an atom outside the node box contributes the clash
/// value. Higher is better. When a counter is supplied it is incremented
/// by the heavy-atom count.
double geo_score(const Pocket &pocket, const Ligand &ligand,
                 const Conformation &conf, EvalCounter *counter = nullptr);

}  // namespace vscreen
