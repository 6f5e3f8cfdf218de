//
// Project vscreen - Copyright 2026 the vscreen authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <string_view>

#include <Eigen/Dense>

#include "vscreen/molmodel/ligand.hpp"

namespace vscreen {

/// (n_heavy, n_rings, n_chains, n_heavy*n_rings, n_heavy*n_chains,
/// n_rings*n_chains). n_rings is the cyclomatic number, n_chains the
/// count of acyclic heavy-heavy bonds.
using FeatureVector = Eigen::Matrix<double, 6, 1>;

/// Parses the supported SMILES subset into a heavy-atom molecular graph.
/// Elements B,C,N,O,P,S,F,Cl,Br,I plus aromatic c,n,o,s; branches, ring
/// closure digits 1-9, bond symbols -,=,#,:. Positions are zero and the
/// torsion list empty. Throws ParseError (syntax, unsupported feature,
/// disconnected molecule).
Ligand parse_smiles(std::string_view text);

/// Cheap cost features computed from the parsed graph.
FeatureVector smiles_features(std::string_view text);

FeatureVector graph_features(const Ligand &ligand);

}  // namespace vscreen
