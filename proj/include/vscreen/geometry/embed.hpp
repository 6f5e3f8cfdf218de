//
// Project vscreen - Copyright 2026 the vscreen authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include "vscreen/geometry/transform.hpp"
#include "vscreen/molmodel/ligand.hpp"

namespace vscreen {

/// Table bond length in Å for a bonded element pair. Single bonds use
/// C-C 1.54, C-O 1.43, C-N 1.47, C-H 1.09 and 1.5 for anything else;
/// higher orders and aromatic bonds are scaled by 0.87.
double table_bond_length(Element a, Element b, BondOrder order);

/// Deterministic rule-based coordinate generation: breadth-first placement
/// from atom 0 with table bond lengths, idealized angles (109.5 degrees,
/// or 120 at atoms carrying a double or aromatic bond), staggered dihedral
/// slots in discovery order, and rings laid out as regular polygons (fused
/// rings share the anchor edge and plane).
///
/// Equal ligands give bit-identical coordinates. The geometry is a starting
/// point for the docking search, not an energy minimum.
Conformation embed_3d(const Ligand &ligand);

}  // namespace vscreen
