//
// Project vscreen - Copyright 2026 the vscreen authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "vscreen/geometry/transform.hpp"

namespace vscreen {

inline constexpr double kRadiansPerDegree = std::numbers::pi / 180.0;

/// One candidate placement of a ligand. The conformation is always the
/// canonical materialization apply_rigid(apply_torsions(base, angles),
/// transform), so equal (angles, transform) pairs reproduce it bit for bit.
struct Pose {
  RigidTransform transform;
  std::vector<double> torsion_angles;
  Conformation conformation;
  double geo_score = 0.0;
  std::optional<double> chem_score;
};

/// Search knobs. The defaults are the production settings; tests shrink
/// them to keep oracles affordable.
struct ScoringConfig {
  int restarts = 256;
  int rescored = 30;
  double rmsd_threshold = 3.0;  // Å, pose clustering

  // Steepest-ascent step schedule: every step halves together when no
  // neighbor improves, and the search stops once the translation step
  // falls below min_translation.
  double step_translation = 1.0;                     // Å
  double step_rotation = 20.0 * kRadiansPerDegree;   // radians
  double step_torsion = 20.0 * kRadiansPerDegree;    // radians
  double min_translation = 0.1;                      // Å
  int max_iterations = 200;

  int flatten_max_sweeps = 20;
};

struct DockResult {
  std::string smiles;
  double best_score = 0.0;
  Pose best_pose;
  std::uint64_t poses_evaluated = 0;
  std::uint64_t scoring_evals = 0;
};

}  // namespace vscreen
