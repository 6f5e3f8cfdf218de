//
// Project vscreen - Copyright 2026 the vscreen authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "vscreen/geometry/hydrogens.hpp"

#include <cmath>

#include "vscreen/error.hpp"
#include "vscreen/molmodel/elements.hpp"

namespace vscreen {

namespace {

double order_weight(BondOrder order) {
  switch (order) {
  case BondOrder::Single:
    return 1.0;
  case BondOrder::Double:
    return 2.0;
  case BondOrder::Triple:
    return 3.0;
  case BondOrder::Aromatic:
    return 1.5;
  }
  return 1.0;
}

}  // namespace

Ligand add_hydrogens(Ligand ligand) {
  const std::size_t n_heavy_atoms = ligand.atoms.size();
  std::vector<double> used(n_heavy_atoms, 0.0);
  std::vector<bool> has_aromatic(n_heavy_atoms, false);
  for (const Bond &bond : ligand.bonds) {
    const double w = order_weight(bond.order);
    used[bond.a] += w;
    used[bond.b] += w;
    if (bond.order == BondOrder::Aromatic) {
      has_aromatic[bond.a] = true;
      has_aromatic[bond.b] = true;
    }
  }

  for (std::size_t i = 0; i < n_heavy_atoms; ++i) {
    const Atom &atom = ligand.atoms[i];
    if (!atom.is_heavy) continue;
    const int valence = standard_valence(atom.element);
    if (valence == 0) continue;

    const double free = static_cast<double>(valence) - used[i];
    if (free < 0.0 && !has_aromatic[i])
      throw InvalidArgument("valence of " +
                            std::string(element_symbol(atom.element)) +
                            " atom " + std::to_string(i) + " exceeds " +
                            std::to_string(valence));

    const int h_count = std::max(0, static_cast<int>(std::floor(free)));
    for (int h = 0; h < h_count; ++h) {
      const auto h_index = static_cast<std::uint16_t>(ligand.atoms.size());
      Atom hydrogen;
      hydrogen.element = Element::H;
      hydrogen.is_heavy = false;
      ligand.atoms.push_back(hydrogen);
      ligand.bonds.push_back(
          {static_cast<std::uint16_t>(i), h_index, BondOrder::Single});
    }
  }
  return ligand;
}

}  // namespace vscreen
