//
// Project vscreen - Copyright 2026 the vscreen authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vscreen/molmodel/elements.hpp"

namespace vscreen {

/// Bond order codes are part of the binary wire format; values are stable.
enum class BondOrder : std::uint8_t {
  Single = 1,
  Double = 2,
  Triple = 3,
  Aromatic = 4,
};

struct Atom {
  Element element = Element::C;
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  bool is_heavy = true;

  friend bool operator==(const Atom &a, const Atom &b) {
    return a.element == b.element && a.is_heavy == b.is_heavy &&
           a.position.x() == b.position.x() &&
           a.position.y() == b.position.y() &&
           a.position.z() == b.position.z();
  }
};

struct Bond {
  std::uint16_t a = 0;
  std::uint16_t b = 0;
  BondOrder order = BondOrder::Single;

  friend bool operator==(const Bond &, const Bond &) = default;
};

/// A rotatable bridge bond. left_set contains the bond's `a` side,
/// right_set the `b` side; the sets partition all atom indices and are
/// kept sorted ascending.
struct TorsionalBond {
  std::uint16_t bond_index = 0;
  std::vector<std::uint16_t> left_set;
  std::vector<std::uint16_t> right_set;

  friend bool operator==(const TorsionalBond &, const TorsionalBond &) = default;
};

struct Ligand {
  std::string name;  // SMILES text
  std::vector<Atom> atoms;
  std::vector<Bond> bonds;
  std::vector<TorsionalBond> torsions;

  std::size_t heavy_atom_count() const {
    std::size_t n = 0;
    for (const Atom &a : atoms) n += a.is_heavy ? 1 : 0;
    return n;
  }

  friend bool operator==(const Ligand &, const Ligand &) = default;
};

/// Adjacency as (neighbor atom, bond index) pairs, in bond-list order.
std::vector<std::vector<std::pair<std::uint16_t, std::uint16_t>>>
adjacency(const Ligand &ligand);

bool is_connected(const Ligand &ligand);

/// Per-bond flag: true when removing the bond disconnects the graph.
std::vector<bool> bridge_bonds(const Ligand &ligand);

/// Number of neighbors joined by a bond to heavy atoms only.
int heavy_degree(const Ligand &ligand, std::uint16_t atom);

/// Splits the atom set across a bridge bond. Throws InvalidArgument when
/// the bond is not a bridge.
TorsionalBond torsion_partition(const Ligand &ligand, std::uint16_t bond_index);

/// Fills the torsion list: single non-ring bonds between heavy atoms with
/// heavy degree >= 2 at both ends, ascending bond index.
Ligand detect_torsions(Ligand ligand);

}  // namespace vscreen
