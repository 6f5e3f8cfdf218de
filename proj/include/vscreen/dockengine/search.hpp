//
// Project vscreen - Copyright 2026 the vscreen authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <vector>

#include "vscreen/dockengine/grid.hpp"
#include "vscreen/dockengine/pose.hpp"
#include "vscreen/molmodel/ligand.hpp"
#include "vscreen/molmodel/pocket.hpp"

namespace vscreen {

struct FlattenResult {
  Conformation conformation;
  std::vector<double> torsion_angles;  // absolute, radians
};

/// Spreads the ligand by coordinate ascent on the internal distance sum:
/// sweep the torsions in index order, trying 36 offsets of 10 degrees
/// each; a tie keeps the smallest offset, so an unimproved torsion stays
/// put. Stops after a sweep that changes nothing, or max_sweeps. Angles
/// are kept on the 10 degree lattice, which makes every evaluation and
/// therefore the whole pass bit-stable. Protein-independent.
FlattenResult flatten(const Ligand &ligand, const Conformation &base,
                      int max_sweeps = 20);

/// Unit axis i of the k-point spherical Fibonacci set.
Eigen::Vector3d fibonacci_axis(int i, int k);

/// Companion rotation angle for axis i: the golden-ratio fractional part
/// of i scaled to a full turn. Seed-free and machine-independent.
double fibonacci_rotation_angle(int i);

/// k deterministic starting poses: orientation i rotates by
/// fibonacci_rotation_angle(i) about fibonacci_axis(i, k), the ligand
/// centroid is translated to the pocket box center, and every pose starts
/// from the flattened torsion angles. Each pose carries its geo_score.
std::vector<Pose> initial_poses(const Pocket &pocket, const Ligand &ligand,
                                const Conformation &base,
                                const std::vector<double> &flat_angles, int k,
                                EvalCounter *counter = nullptr);

/// Steepest ascent on geo_score over the fixed neighborhood: +-step
/// translations along x, y, z; +-step rotations about x, y, z through the
/// pose centroid; +-step per torsion (12 + 2m neighbors). All steps halve
/// together when no neighbor improves; the search stops when the
/// translation step drops below config.min_translation or after
/// config.max_iterations neighborhood sweeps. Ties pick the first
/// neighbor in the order above. The returned score never drops below the
/// input score.
Pose local_search(const Pocket &pocket, const Ligand &ligand, Pose pose,
                  const ScoringConfig &config, EvalCounter *counter = nullptr);

/// Greedy leader clustering by heavy-atom RMSD: visit poses by descending
/// geo_score (ties keep input order); a pose joins the first cluster
/// whose leader is within threshold, else starts its own. Returns at most
/// `top` poses, leaders first (by descending geo_score), then the rest.
/// Throws InvalidArgument on empty input.
std::vector<Pose> cluster_and_select(const std::vector<Pose> &poses,
                                     const Ligand &ligand, double threshold,
                                     std::size_t top);

/// The full per-ligand pipeline: flatten, spawn config.restarts poses,
/// locally optimize each, cluster and keep config.rescored survivors,
/// re-score those with chem_score, and report the best. Pure function of
/// its inputs; repeated calls return bit-identical results.
DockResult dock_and_score(const Pocket &pocket, const Ligand &ligand,
                          const ScoringConfig &config = {});

/// Brute-force reference: maximum geo_score over a 0.25 Å translation
/// lattice (x fastest, then y, then z) crossed with 512 Fibonacci
/// orientations. Ties keep the earliest lattice point, then the earliest
/// orientation. Only meant for tests; refuses ligands with more than
/// 5 atoms or any torsion, and pockets wider than 16 Å per side.
Pose exhaustive_dock(const Pocket &pocket, const Ligand &ligand);

}  // namespace vscreen
