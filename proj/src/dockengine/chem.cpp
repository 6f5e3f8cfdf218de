//
// Project vscreen - Copyright 2026 the vscreen authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "vscreen/dockengine/chem.hpp"

namespace vscreen {

namespace {

constexpr double kCutoff = 4.5;       // Å, beyond this a pair contributes 0
constexpr double kPlateau = 3.5;      // Å, full weight up to here
constexpr double kClashCutoff = 2.0;  // Å
constexpr double kClashPenalty = 5.0;

double ramp(double d) {
  if (d <= kPlateau) return 1.0;
  return (kCutoff - d) / (kCutoff - kPlateau);
}

}  // namespace

double chem_pair_weight(ChemClass a, ChemClass b) {
  if (a == ChemClass::Other || b == ChemClass::Other) return 0.05;
  if (a == ChemClass::Hydrophobic && b == ChemClass::Hydrophobic) return 0.4;
  if (a == ChemClass::Polar && b == ChemClass::Polar) return 1.0;
  return 0.1;
}

double chem_score(const Pocket &pocket, const Ligand &ligand,
                  const Conformation &conf) {
  double total = 0.0;
  for (std::size_t i = 0; i < ligand.atoms.size(); ++i) {
    if (!ligand.atoms[i].is_heavy) continue;
    const ChemClass ci = chem_class(ligand.atoms[i].element);
    const Eigen::Vector3d x = conf.col(static_cast<Eigen::Index>(i));
    for (const ProteinAtom &p : pocket.protein_atoms) {
      const double d = (x - p.position).norm();
      if (d >= kCutoff) continue;
      total += chem_pair_weight(ci, chem_class(p.element)) * ramp(d);
      if (d < kClashCutoff) total -= kClashPenalty;
    }
  }
  return total;
}

}  // namespace vscreen
