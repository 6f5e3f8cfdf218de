//
// Project vscreen - Copyright 2026 the vscreen authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "vscreen/geometry/transform.hpp"

#include <cmath>

#include "vscreen/error.hpp"

namespace vscreen {

RigidTransform identity_transform() { return RigidTransform{}; }

RigidTransform compose(const RigidTransform &b, const RigidTransform &a) {
  RigidTransform out;
  out.rotation = (b.rotation * a.rotation).normalized();
  out.translation = b.rotation * a.translation + b.translation;
  return out;
}

RigidTransform inverse(const RigidTransform &t) {
  RigidTransform out;
  out.rotation = t.rotation.conjugate();
  out.translation = -(out.rotation * t.translation);
  return out;
}

Conformation apply_rigid(const Conformation &conf, const RigidTransform &t) {
  return (t.rotation.toRotationMatrix() * conf).colwise() + t.translation;
}

Conformation conformation_of(const Ligand &ligand) {
  Conformation conf(3, ligand.atoms.size());
  for (std::size_t i = 0; i < ligand.atoms.size(); ++i)
    conf.col(static_cast<Eigen::Index>(i)) = ligand.atoms[i].position;
  return conf;
}

Ligand with_conformation(Ligand ligand, const Conformation &conf) {
  if (conf.cols() != static_cast<Eigen::Index>(ligand.atoms.size()))
    throw InvalidArgument("conformation length does not match atom count");
  for (std::size_t i = 0; i < ligand.atoms.size(); ++i)
    ligand.atoms[i].position = conf.col(static_cast<Eigen::Index>(i));
  return ligand;
}

Eigen::Vector3d centroid(const Conformation &conf) {
  if (conf.cols() == 0) throw InvalidArgument("empty conformation");
  return conf.rowwise().mean();
}

Conformation apply_torsion(const Conformation &conf, const Ligand &ligand,
                           const TorsionalBond &torsion, double angle) {
  if (torsion.bond_index >= ligand.bonds.size())
    throw InvalidArgument("torsion bond index out of range");
  const Bond &bond = ligand.bonds[torsion.bond_index];
  const Eigen::Vector3d pivot = conf.col(bond.a);
  const Eigen::Vector3d axis = conf.col(bond.b) - pivot;
  const double norm = axis.norm();
  if (norm < 1e-9) throw InvalidArgument("degenerate torsion axis");

  const Eigen::AngleAxisd rot(angle, axis / norm);
  Conformation out = conf;
  for (std::uint16_t idx : torsion.right_set) {
    if (idx >= conf.cols()) throw InvalidArgument("torsion atom index out of range");
    out.col(idx) = rot * (conf.col(idx) - pivot) + pivot;
  }
  return out;
}

Conformation apply_torsions(const Conformation &base, const Ligand &ligand,
                            const std::vector<double> &angles) {
  if (angles.size() != ligand.torsions.size())
    throw InvalidArgument("torsion angle count does not match ligand");
  Conformation conf = base;
  for (std::size_t i = 0; i < angles.size(); ++i)
    conf = apply_torsion(conf, ligand, ligand.torsions[i], angles[i]);
  return conf;
}

double internal_distance_sum(const Conformation &conf) {
  const Eigen::Index n = conf.cols();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      sum += (conf.col(i) - conf.col(j)).norm();
  return sum;
}

double rmsd(const Conformation &a, const Conformation &b) {
  if (a.cols() != b.cols()) throw InvalidArgument("conformation length mismatch");
  if (a.cols() == 0) throw InvalidArgument("empty conformation");
  return std::sqrt((a - b).colwise().squaredNorm().sum() /
                   static_cast<double>(a.cols()));
}

double heavy_atom_rmsd(const Conformation &a, const Conformation &b,
                       const Ligand &ligand) {
  if (a.cols() != b.cols() ||
      a.cols() != static_cast<Eigen::Index>(ligand.atoms.size()))
    throw InvalidArgument("conformation length mismatch");
  double sum = 0.0;
  Eigen::Index heavy = 0;
  for (Eigen::Index i = 0; i < a.cols(); ++i) {
    if (!ligand.atoms[static_cast<std::size_t>(i)].is_heavy) continue;
    sum += (a.col(i) - b.col(i)).squaredNorm();
    ++heavy;
  }
  if (heavy == 0) throw InvalidArgument("no heavy atoms");
  return std::sqrt(sum / static_cast<double>(heavy));
}

}  // namespace vscreen
