//
// Project vscreen - Copyright 2026 the vscreen authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "vscreen/geometry/embed.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <set>

#include "vscreen/error.hpp"

namespace vscreen {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTetrahedral = 109.5 * kPi / 180.0;
constexpr double kTrigonal = 120.0 * kPi / 180.0;

// Dihedral slots, in discovery order, for successive children of one parent.
// The first table is used when the reference atom sits upstream of the
// parent (the usual case): anti first, then the two gauche positions. The
// second is used when the reference is itself a sibling, which already
// occupies dihedral zero; it has its own counter because the first children
// of such a parent are placed against a synthetic reference instead.
constexpr double kChildSlots[6] = {180.0, 60.0, 300.0, 120.0, 240.0, 0.0};
constexpr double kSiblingSlots[6] = {120.0, 240.0, 60.0, 300.0, 0.0, 180.0};

Eigen::Vector3d any_perpendicular(const Eigen::Vector3d &u) {
  const Eigen::Vector3d axis =
      std::abs(u.x()) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
  return u.cross(axis).normalized();
}

struct Cycle {
  std::vector<std::uint16_t> atoms;  // in traversal order around the ring
};

// Smallest cycle through each non-bridge bond, deduplicated by atom set.
std::vector<Cycle> find_rings(const Ligand &ligand,
                              const std::vector<std::vector<std::pair<std::uint16_t, std::uint16_t>>> &adj) {
  const std::vector<bool> bridges = bridge_bonds(ligand);
  std::vector<Cycle> rings;
  std::set<std::vector<std::uint16_t>> seen;

  for (std::size_t bond_idx = 0; bond_idx < ligand.bonds.size(); ++bond_idx) {
    if (bridges[bond_idx]) continue;
    const Bond &bond = ligand.bonds[bond_idx];

    // Shortest path a -> b avoiding the bond itself.
    std::vector<int> parent(ligand.atoms.size(), -2);
    std::queue<std::uint16_t> frontier;
    frontier.push(bond.a);
    parent[bond.a] = -1;
    while (!frontier.empty() && parent[bond.b] == -2) {
      const std::uint16_t at = frontier.front();
      frontier.pop();
      for (const auto &[nbr, bidx] : adj[at]) {
        if (bidx == bond_idx || parent[nbr] != -2) continue;
        parent[nbr] = at;
        frontier.push(nbr);
      }
    }
    if (parent[bond.b] == -2) continue;  // parallel-edge safety

    Cycle cycle;
    for (int at = bond.b; at != -1; at = parent[at])
      cycle.atoms.push_back(static_cast<std::uint16_t>(at));
    std::reverse(cycle.atoms.begin(), cycle.atoms.end());  // a ... b

    std::vector<std::uint16_t> key = cycle.atoms;
    std::sort(key.begin(), key.end());
    if (seen.insert(key).second) rings.push_back(std::move(cycle));
  }
  return rings;
}

class Embedder {
public:
  explicit Embedder(const Ligand &ligand)
      : lig_(ligand), adj_(adjacency(ligand)), rings_(find_rings(ligand, adj_)),
        pos_(3, ligand.atoms.size()), placed_(ligand.atoms.size(), false),
        parent_(ligand.atoms.size(), -1), slots_used_(ligand.atoms.size(), 0),
        sibling_slots_used_(ligand.atoms.size(), 0),
        atom_rings_(ligand.atoms.size()) {
    for (std::size_t r = 0; r < rings_.size(); ++r)
      for (std::uint16_t at : rings_[r].atoms) atom_rings_[at].push_back(r);
    ring_center_.resize(rings_.size());
    ring_normal_.resize(rings_.size());
    ring_placed_.assign(rings_.size(), false);
  }

  Conformation run() {
    if (lig_.atoms.empty()) return pos_;
    pos_.col(0).setZero();
    placed_[0] = true;
    std::queue<std::uint16_t> queue;
    queue.push(0);
    while (!queue.empty()) {
      const std::uint16_t at = queue.front();
      queue.pop();
      for (std::size_t r : atom_rings_[at])
        if (!ring_placed_[r]) place_ring(r, at, queue);
      for (const auto &[nbr, bidx] : adj_[at]) {
        if (placed_[nbr]) continue;
        place_child(at, nbr, bidx);
        queue.push(nbr);
      }
    }
    return pos_;
  }

private:
  double ideal_angle(std::uint16_t at) const {
    for (const auto &[nbr, bidx] : adj_[at]) {
      const BondOrder order = lig_.bonds[bidx].order;
      if (order == BondOrder::Double || order == BondOrder::Aromatic)
        return kTrigonal;
    }
    return kTetrahedral;
  }

  // Natural-extension placement: position a child of `p` at bond length
  // `len`, bond angle `theta` at `p` measured from the placed anchor `g`,
  // and dihedral `phi` about the g->p axis measured from the plane that
  // contains the reference point.
  Eigen::Vector3d extend(const Eigen::Vector3d &ref, const Eigen::Vector3d &g,
                         const Eigen::Vector3d &p, double len, double theta,
                         double phi) const {
    const Eigen::Vector3d u = (p - g).normalized();
    Eigen::Vector3d n = (g - ref).cross(u);
    if (n.squaredNorm() < 1e-12)
      n = any_perpendicular(u);
    else
      n.normalize();
    const Eigen::Vector3d m = n.cross(u);
    return p + len * (-std::cos(theta) * u +
                      std::sin(theta) * (std::cos(phi) * m + std::sin(phi) * n));
  }

  // When p and g are adjacent atoms of one ring, the dihedral reference
  // for p's substituents must be g's other cycle neighbor; a reference
  // taken from g's exocyclic parent can point the substituent into the
  // ring instead of out of it.
  int ring_ref(std::uint16_t p, std::uint16_t g) const {
    for (std::size_t r : atom_rings_[g]) {
      const auto &cycle = rings_[r].atoms;
      const auto it = std::find(cycle.begin(), cycle.end(), g);
      const std::size_t at = static_cast<std::size_t>(it - cycle.begin());
      const std::size_t k = cycle.size();
      const std::uint16_t next = cycle[(at + 1) % k];
      const std::uint16_t prev = cycle[(at + k - 1) % k];
      if (next == p && placed_[prev]) return prev;
      if (prev == p && placed_[next]) return next;
    }
    return -1;
  }

  void place_child(std::uint16_t p, std::uint16_t c, std::size_t bond_idx) {
    const Bond &bond = lig_.bonds[bond_idx];
    const double len = table_bond_length(lig_.atoms[bond.a].element,
                                         lig_.atoms[bond.b].element, bond.order);
    const double theta = ideal_angle(p);
    const int slot = slots_used_[p]++;

    // Anchor atom: the parent's own parent, or its first placed neighbor.
    int g = parent_[p];
    if (g < 0 || !placed_[static_cast<std::size_t>(g)]) {
      g = -1;
      for (const auto &[nbr, bidx] : adj_[p]) {
        (void)bidx;
        if (nbr != c && placed_[nbr]) {
          g = nbr;
          break;
        }
      }
    }

    if (g < 0) {
      // Nothing but the root is placed yet.
      if (slot == 0) {
        pos_.col(c) = pos_.col(p) + len * Eigen::Vector3d::UnitX();
      } else {
        pos_.col(c) = pos_.col(p) +
                      len * Eigen::Vector3d(std::cos(theta), std::sin(theta), 0.0);
      }
      placed_[c] = true;
      parent_[c] = p;
      return;
    }

    // Reference for the dihedral plane: walk one step further back, fall
    // back to another placed neighbor, then to a sibling, then synthesize.
    const auto gu = static_cast<std::uint16_t>(g);
    bool sibling_ref = false;
    Eigen::Vector3d ref;
    int ref_atom = ring_ref(p, gu);
    if (ref_atom < 0 && parent_[gu] >= 0 &&
        placed_[static_cast<std::size_t>(parent_[gu])] && parent_[gu] != p)
      ref_atom = parent_[gu];
    if (ref_atom < 0) {
      for (const auto &[nbr, bidx] : adj_[gu]) {
        (void)bidx;
        if (nbr != p && placed_[nbr]) {
          ref_atom = nbr;
          break;
        }
      }
    }
    if (ref_atom < 0) {
      for (const auto &[nbr, bidx] : adj_[p]) {
        (void)bidx;
        if (nbr != c && nbr != gu && placed_[nbr]) {
          ref_atom = nbr;
          sibling_ref = true;
          break;
        }
      }
    }
    if (ref_atom >= 0) {
      ref = pos_.col(ref_atom);
    } else {
      ref = pos_.col(gu) + any_perpendicular(pos_.col(p) - pos_.col(gu));
    }

    double phi;
    if (sibling_ref) {
      phi = kSiblingSlots[std::min(sibling_slots_used_[p]++, 5)] * kPi / 180.0;
    } else {
      phi = kChildSlots[std::min(slot, 5)] * kPi / 180.0;
    }
    pos_.col(c) = extend(ref, pos_.col(gu), pos_.col(p), len, theta, phi);
    placed_[c] = true;
    parent_[c] = p;
  }

  void place_ring(std::size_t ring_idx, std::uint16_t entry,
                  std::queue<std::uint16_t> &queue) {
    const Cycle &ring = rings_[ring_idx];
    const std::size_t k = ring.atoms.size();
    ring_placed_[ring_idx] = true;

    // Anchor on a placed edge when one exists (fused rings); otherwise
    // grow a fresh polygon from the entry atom.
    std::size_t edge_at = k;
    for (std::size_t j = 0; j < k; ++j) {
      const std::uint16_t u = ring.atoms[j];
      const std::uint16_t v = ring.atoms[(j + 1) % k];
      if (!placed_[u] || !placed_[v]) continue;
      if (edge_at == k) edge_at = j;
      if (u == entry || v == entry) {
        edge_at = j;
        break;
      }
    }

    std::vector<std::uint16_t> order(k);
    if (edge_at < k) {
      place_ring_on_edge(ring_idx, edge_at, order);
    } else {
      place_ring_fresh(ring_idx, entry, order);
    }

    for (std::size_t j = 1; j < k; ++j) {
      const std::uint16_t at = order[j];
      if (parent_[at] < 0 && at != 0) parent_[at] = order[j - 1];
    }
    for (std::size_t j = 0; j < k; ++j)
      if (placed_just_now_.count(order[j])) queue.push(order[j]);
    placed_just_now_.clear();
  }

  double mean_ring_bond_length(const Cycle &ring) const {
    const std::size_t k = ring.atoms.size();
    double total = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      const std::uint16_t u = ring.atoms[j];
      const std::uint16_t v = ring.atoms[(j + 1) % k];
      BondOrder order = BondOrder::Single;
      for (const auto &[nbr, bidx] : adj_[u])
        if (nbr == v) order = lig_.bonds[bidx].order;
      total += table_bond_length(lig_.atoms[u].element, lig_.atoms[v].element, order);
    }
    return total / static_cast<double>(k);
  }

  void place_ring_fresh(std::size_t ring_idx, std::uint16_t entry,
                        std::vector<std::uint16_t> &order) {
    const Cycle &ring = rings_[ring_idx];
    const std::size_t k = ring.atoms.size();

    // Rotate the stored cycle so the entry atom leads.
    const auto entry_it = std::find(ring.atoms.begin(), ring.atoms.end(), entry);
    const std::size_t shift =
        static_cast<std::size_t>(entry_it - ring.atoms.begin());
    for (std::size_t j = 0; j < k; ++j) order[j] = ring.atoms[(shift + j) % k];

    const double side = mean_ring_bond_length(ring);
    const double radius = side / (2.0 * std::sin(kPi / static_cast<double>(k)));

    Eigen::Vector3d e1 = Eigen::Vector3d::UnitX();
    if (parent_[entry] >= 0 && placed_[static_cast<std::size_t>(parent_[entry])]) {
      const Eigen::Vector3d away =
          pos_.col(entry) - pos_.col(parent_[entry]);
      if (away.squaredNorm() > 1e-12) e1 = away.normalized();
    }
    const Eigen::Vector3d e2 = any_perpendicular(e1);
    const Eigen::Vector3d center = pos_.col(entry) + radius * e1;

    for (std::size_t j = 0; j < k; ++j) {
      const std::uint16_t at = order[j];
      if (placed_[at]) continue;
      const double angle = kPi + 2.0 * kPi * static_cast<double>(j) /
                                      static_cast<double>(k);
      pos_.col(at) = center + radius * (std::cos(angle) * e1 + std::sin(angle) * e2);
      placed_[at] = true;
      placed_just_now_.insert(at);
    }
    ring_center_[ring_idx] = center;
    ring_normal_[ring_idx] = e1.cross(e2).normalized();
  }

  void place_ring_on_edge(std::size_t ring_idx, std::size_t edge_at,
                          std::vector<std::uint16_t> &order) {
    const Cycle &ring = rings_[ring_idx];
    const std::size_t k = ring.atoms.size();
    const std::uint16_t u = ring.atoms[edge_at];
    const std::uint16_t v = ring.atoms[(edge_at + 1) % k];

    // Walk from u the long way around so the sequence ends on v.
    for (std::size_t j = 0; j < k; ++j)
      order[j] = ring.atoms[(edge_at + k - j) % k];

    // Plane and far side: taken from the ring that placed the shared edge.
    Eigen::Vector3d normal = any_perpendicular(pos_.col(v) - pos_.col(u));
    Eigen::Vector3d prev_center =
        0.5 * (pos_.col(u) + pos_.col(v)) + any_perpendicular(pos_.col(v) - pos_.col(u));
    for (std::size_t r = 0; r < rings_.size(); ++r) {
      if (!ring_placed_[r] || r == ring_idx) continue;
      const auto &atoms = rings_[r].atoms;
      const bool has_u = std::find(atoms.begin(), atoms.end(), u) != atoms.end();
      const bool has_v = std::find(atoms.begin(), atoms.end(), v) != atoms.end();
      if (has_u && has_v) {
        normal = ring_normal_[r];
        prev_center = ring_center_[r];
        break;
      }
    }

    const Eigen::Vector3d mid = 0.5 * (pos_.col(u) + pos_.col(v));
    const Eigen::Vector3d axis = (pos_.col(v) - pos_.col(u)).normalized();
    const double side = (pos_.col(v) - pos_.col(u)).norm();
    const double radius = side / (2.0 * std::sin(kPi / static_cast<double>(k)));
    Eigen::Vector3d w = normal.cross(axis).normalized();
    if (w.dot(mid - prev_center) < 0.0) w = -w;
    const Eigen::Vector3d center = mid + radius * std::cos(kPi / static_cast<double>(k)) * w;

    const Eigen::Vector3d ex = (pos_.col(u) - center).normalized();
    Eigen::Vector3d ey = pos_.col(v) - center;
    ey -= ey.dot(ex) * ex;
    if (ey.squaredNorm() < 1e-12) ey = normal.cross(ex);
    ey = -ey.normalized();  // put v at angle -2*pi/k, i.e. position k-1

    for (std::size_t j = 1; j + 1 < k; ++j) {
      const std::uint16_t at = order[j];
      if (placed_[at]) continue;
      const double angle = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(k);
      pos_.col(at) = center + radius * (std::cos(angle) * ex + std::sin(angle) * ey);
      placed_[at] = true;
      placed_just_now_.insert(at);
    }
    ring_center_[ring_idx] = center;
    ring_normal_[ring_idx] = ex.cross(ey).normalized();
  }

  const Ligand &lig_;
  std::vector<std::vector<std::pair<std::uint16_t, std::uint16_t>>> adj_;
  std::vector<Cycle> rings_;
  Conformation pos_;
  std::vector<bool> placed_;
  std::vector<int> parent_;
  std::vector<int> slots_used_;
  std::vector<int> sibling_slots_used_;
  std::vector<std::vector<std::size_t>> atom_rings_;
  std::vector<Eigen::Vector3d> ring_center_;
  std::vector<Eigen::Vector3d> ring_normal_;
  std::vector<bool> ring_placed_;
  std::set<std::uint16_t> placed_just_now_;
};

}  // namespace

double table_bond_length(Element a, Element b, BondOrder order) {
  double length = 1.5;
  const auto pair_is = [&](Element x, Element y) {
    return (a == x && b == y) || (a == y && b == x);
  };
  if (pair_is(Element::C, Element::C))
    length = 1.54;
  else if (pair_is(Element::C, Element::O))
    length = 1.43;
  else if (pair_is(Element::C, Element::N))
    length = 1.47;
  else if (pair_is(Element::C, Element::H))
    length = 1.09;
  if (order != BondOrder::Single) length *= 0.87;
  return length;
}

Conformation embed_3d(const Ligand &ligand) {
  if (!ligand.atoms.empty() && !is_connected(ligand))
    throw InvalidArgument("cannot embed a disconnected graph");
  Embedder embedder(ligand);
  return embedder.run();
}

}  // namespace vscreen
