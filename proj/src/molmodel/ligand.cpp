//
// Project vscreen - Copyright 2026 the vscreen authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "vscreen/molmodel/ligand.hpp"

#include <algorithm>
#include <stack>

#include "vscreen/error.hpp"

namespace vscreen {

std::vector<std::vector<std::pair<std::uint16_t, std::uint16_t>>>
adjacency(const Ligand &ligand) {
  std::vector<std::vector<std::pair<std::uint16_t, std::uint16_t>>> adj(
      ligand.atoms.size());
  for (std::uint16_t i = 0; i < ligand.bonds.size(); ++i) {
    const Bond &bond = ligand.bonds[i];
    adj[bond.a].emplace_back(bond.b, i);
    adj[bond.b].emplace_back(bond.a, i);
  }
  return adj;
}

namespace {

// BFS reachability, optionally treating one bond as removed.
std::vector<bool> reachable_from(
    const std::vector<std::vector<std::pair<std::uint16_t, std::uint16_t>>> &adj,
    std::uint16_t start, int skipped_bond) {
  std::vector<bool> seen(adj.size(), false);
  std::vector<std::uint16_t> queue{start};
  seen[start] = true;
  while (!queue.empty()) {
    std::uint16_t at = queue.back();
    queue.pop_back();
    for (auto [next, bond] : adj[at]) {
      if (static_cast<int>(bond) == skipped_bond || seen[next]) continue;
      seen[next] = true;
      queue.push_back(next);
    }
  }
  return seen;
}

}  // namespace

bool is_connected(const Ligand &ligand) {
  if (ligand.atoms.empty()) return false;
  auto adj = adjacency(ligand);
  auto seen = reachable_from(adj, 0, -1);
  return std::all_of(seen.begin(), seen.end(), [](bool s) { return s; });
}

std::vector<bool> bridge_bonds(const Ligand &ligand) {
  const std::size_t n = ligand.atoms.size();
  auto adj = adjacency(ligand);
  std::vector<bool> bridge(ligand.bonds.size(), false);
  std::vector<int> disc(n, -1), low(n, 0);
  int timer = 0;

  // Iterative low-link to keep deep chains off the call stack.
  struct Frame {
    std::uint16_t at;
    int in_bond;
    std::size_t next_edge;
  };
  for (std::uint16_t root = 0; root < n; ++root) {
    if (disc[root] != -1) continue;
    std::stack<Frame> stack;
    stack.push({root, -1, 0});
    disc[root] = low[root] = timer++;
    while (!stack.empty()) {
      Frame &frame = stack.top();
      if (frame.next_edge < adj[frame.at].size()) {
        auto [next, bond] = adj[frame.at][frame.next_edge++];
        if (static_cast<int>(bond) == frame.in_bond) continue;
        if (disc[next] == -1) {
          disc[next] = low[next] = timer++;
          stack.push({next, static_cast<int>(bond), 0});
        } else {
          low[frame.at] = std::min(low[frame.at], disc[next]);
        }
      } else {
        Frame done = frame;
        stack.pop();
        if (!stack.empty()) {
          Frame &parent = stack.top();
          low[parent.at] = std::min(low[parent.at], low[done.at]);
          if (low[done.at] > disc[parent.at])
            bridge[static_cast<std::size_t>(done.in_bond)] = true;
        }
      }
    }
  }
  return bridge;
}

int heavy_degree(const Ligand &ligand, std::uint16_t atom) {
  int degree = 0;
  for (const Bond &bond : ligand.bonds) {
    if (bond.a == atom && ligand.atoms[bond.b].is_heavy) ++degree;
    if (bond.b == atom && ligand.atoms[bond.a].is_heavy) ++degree;
  }
  return degree;
}

TorsionalBond torsion_partition(const Ligand &ligand, std::uint16_t bond_index) {
  if (bond_index >= ligand.bonds.size())
    throw InvalidArgument("torsion bond index out of range");
  const Bond &bond = ligand.bonds[bond_index];
  auto adj = adjacency(ligand);
  auto left_mask = reachable_from(adj, bond.a, bond_index);
  if (left_mask[bond.b])
    throw InvalidArgument("torsion bond is not a bridge");

  TorsionalBond torsion;
  torsion.bond_index = bond_index;
  for (std::uint16_t i = 0; i < ligand.atoms.size(); ++i)
    (left_mask[i] ? torsion.left_set : torsion.right_set).push_back(i);
  return torsion;
}

Ligand detect_torsions(Ligand ligand) {
  ligand.torsions.clear();
  auto bridges = bridge_bonds(ligand);
  for (std::uint16_t i = 0; i < ligand.bonds.size(); ++i) {
    const Bond &bond = ligand.bonds[i];
    if (bond.order != BondOrder::Single || !bridges[i]) continue;
    if (!ligand.atoms[bond.a].is_heavy || !ligand.atoms[bond.b].is_heavy)
      continue;
    if (heavy_degree(ligand, bond.a) < 2 || heavy_degree(ligand, bond.b) < 2)
      continue;
    ligand.torsions.push_back(torsion_partition(ligand, i));
  }
  return ligand;
}

}  // namespace vscreen
