//
// Project vscreen - Copyright 2026 the vscreen authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include "vscreen/molmodel/ligand.hpp"

namespace vscreen {

/// Atom positions in Å, one column per atom, parallel to Ligand.atoms.
using Conformation = Eigen::Matrix3Xd;

/// Rotation-then-translation placement of a rigid body.
struct RigidTransform {
  Eigen::Quaterniond rotation = Eigen::Quaterniond::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();
};

RigidTransform identity_transform();

/// b after a: apply(compose(b, a), x) == apply(b, apply(a, x)).
/// The composed quaternion is renormalized.
RigidTransform compose(const RigidTransform &b, const RigidTransform &a);

RigidTransform inverse(const RigidTransform &t);

Conformation apply_rigid(const Conformation &conf, const RigidTransform &t);

/// Extracts the stored positions of a ligand as a Conformation.
Conformation conformation_of(const Ligand &ligand);

/// Writes positions back onto a copy of the ligand.
Ligand with_conformation(Ligand ligand, const Conformation &conf);

/// Centroid over all atoms (columns).
Eigen::Vector3d centroid(const Conformation &conf);

/// Rotates the atoms in torsion.right_set by angle about the bond axis
/// a -> b (through both endpoints); left-side atoms stay fixed.
///
/// Throws InvalidArgument when the bond endpoints coincide (degenerate
/// axis) or the torsion indices are out of range.
Conformation apply_torsion(const Conformation &conf, const Ligand &ligand,
                           const TorsionalBond &torsion, double angle);

/// Applies every torsion angle in index order to the base conformation.
/// This is the canonical pose materialization: search code always starts
/// from the base so equal inputs give bit-identical coordinates.
Conformation apply_torsions(const Conformation &base, const Ligand &ligand,
                            const std::vector<double> &angles);

/// Σ over unordered atom pairs of the Euclidean distance.
double internal_distance_sum(const Conformation &conf);

/// In-frame root mean square deviation over all columns; no alignment is
/// performed. Throws InvalidArgument on length mismatch.
double rmsd(const Conformation &a, const Conformation &b);

/// rmsd restricted to the ligand's heavy atoms.
double heavy_atom_rmsd(const Conformation &a, const Conformation &b,
                       const Ligand &ligand);

}  // namespace vscreen
