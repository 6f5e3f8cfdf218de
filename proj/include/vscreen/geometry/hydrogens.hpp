//
// Project vscreen - Copyright 2026 the vscreen authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include "vscreen/molmodel/ligand.hpp"

namespace vscreen {

/// Appends implicit hydrogens until each heavy atom reaches its standard
/// valence (C 4, N 3, O 2, S 2, P 3, halogens 1). Aromatic bonds count 1.5
/// toward the used valence and the hydrogen count is rounded down, which
/// gives aromatic carbons in a plain ring exactly one hydrogen. Elements
/// without a conventional cap receive none.
///
/// Hydrogens are appended after all existing atoms, grouped by heavy atom
/// in index order, so the output is deterministic.
///
/// Throws InvalidArgument when a heavy atom with no aromatic bonds already
/// exceeds its standard valence.
Ligand add_hydrogens(Ligand ligand);

}  // namespace vscreen
