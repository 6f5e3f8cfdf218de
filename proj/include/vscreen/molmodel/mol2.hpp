//
// Project vscreen - Copyright 2026 the vscreen authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <string>
#include <string_view>

#include "vscreen/molmodel/ligand.hpp"

namespace vscreen {

/// Writes a ligand as TRIPOS Mol2 text covering the MOLECULE, ATOM and BOND
/// sections. Atom types are plain element symbols and coordinates are printed
/// with four decimal places.
std::string write_mol2(const Ligand &ligand);

/// Parses the Mol2 subset produced by write_mol2. Torsions are re-detected
/// from the bond graph since Mol2 does not carry them.
///
/// Throws ParseError on malformed section headers or when the declared
/// atom/bond counts disagree with the listed lines.
Ligand read_mol2(std::string_view text);

}  // namespace vscreen
