//
// Project vscreen - Copyright 2026 the vscreen authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include "vscreen/geometry/transform.hpp"
#include "vscreen/molmodel/ligand.hpp"
#include "vscreen/molmodel/pocket.hpp"

namespace vscreen {

/// Pairwise class-weighted contact score between ligand heavy atoms and
/// protein atoms. Each pair closer than 4.5 Å contributes
/// weight(class_i, class_j) * ramp(d), where ramp is 1 up to 3.5 Å and
/// falls linearly to 0 at 4.5 Å; pairs closer than 2.0 Å are additionally
/// penalized by 5.0 each. Higher is better. More expensive than the grid
/// field and deliberately ranked differently, which is why it is applied
/// only to the clustered survivors.
double chem_score(const Pocket &pocket, const Ligand &ligand,
                  const Conformation &conf);

/// Weight table: hydrophobic pairs 0.4, polar pairs 1.0, hydrophobic with
/// polar 0.1, anything involving an unclassified atom 0.05.
double chem_pair_weight(ChemClass a, ChemClass b);

}  // namespace vscreen
