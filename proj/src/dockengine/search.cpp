//
// Project vscreen - Copyright 2026 the vscreen authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "vscreen/dockengine/search.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "vscreen/dockengine/chem.hpp"
#include "vscreen/error.hpp"

namespace vscreen {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kGoldenRatio = 1.6180339887498948482;

}  // namespace

FlattenResult flatten(const Ligand &ligand, const Conformation &base,
                      int max_sweeps) {
  const std::size_t m = ligand.torsions.size();
  if (m == 0) return {base, {}};

  constexpr int kSteps = 36;
  constexpr double kStep = 2.0 * kPi / kSteps;

  // Angles live on the 10 degree lattice as integer indices, so repeated
  // sweeps evaluate bit-identical candidates and ties resolve exactly.
  std::vector<int> index(m, 0);
  const auto angles_of = [&](const std::vector<int> &idx) {
    std::vector<double> angles(m);
    for (std::size_t i = 0; i < m; ++i) angles[i] = idx[i] * kStep;
    return angles;
  };

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool changed = false;
    for (std::size_t t = 0; t < m; ++t) {
      std::vector<int> candidate = index;
      int best_offset = 0;
      double best = -std::numeric_limits<double>::infinity();
      for (int offset = 0; offset < kSteps; ++offset) {
        candidate[t] = (index[t] + offset) % kSteps;
        const double spread = internal_distance_sum(
            apply_torsions(base, ligand, angles_of(candidate)));
        if (spread > best) {
          best = spread;
          best_offset = offset;
        }
      }
      if (best_offset != 0) {
        index[t] = (index[t] + best_offset) % kSteps;
        changed = true;
      }
    }
    if (!changed) break;
  }

  const std::vector<double> angles = angles_of(index);
  return {apply_torsions(base, ligand, angles), angles};
}

Eigen::Vector3d fibonacci_axis(int i, int k) {
  // Golden angle, 2 pi (2 - golden ratio).
  constexpr double kGoldenAngle = 2.0 * kPi * (2.0 - kGoldenRatio);
  const double z = 1.0 - 2.0 * (i + 0.5) / static_cast<double>(k);
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  const double azimuth = std::fmod(i * kGoldenAngle, 2.0 * kPi);
  return {r * std::cos(azimuth), r * std::sin(azimuth), z};
}

double fibonacci_rotation_angle(int i) {
  return 2.0 * kPi * std::fmod(i * kGoldenRatio, 1.0);
}

std::vector<Pose> initial_poses(const Pocket &pocket, const Ligand &ligand,
                                const Conformation &base,
                                const std::vector<double> &flat_angles, int k,
                                EvalCounter *counter) {
  if (k < 1) throw InvalidArgument("restart count must be at least 1");
  const Conformation flat = apply_torsions(base, ligand, flat_angles);
  const Eigen::Vector3d flat_centroid = centroid(flat);
  const Eigen::Vector3d center = pocket.box_center();

  std::vector<Pose> poses;
  poses.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    Pose pose;
    pose.transform.rotation = Eigen::Quaterniond(
        Eigen::AngleAxisd(fibonacci_rotation_angle(i), fibonacci_axis(i, k)));
    pose.transform.translation =
        center - pose.transform.rotation * flat_centroid;
    pose.torsion_angles = flat_angles;
    pose.conformation = apply_rigid(flat, pose.transform);
    pose.geo_score = geo_score(pocket, ligand, pose.conformation, counter);
    poses.push_back(std::move(pose));
  }
  return poses;
}

Pose local_search(const Pocket &pocket, const Ligand &ligand, Pose pose,
                  const ScoringConfig &config, EvalCounter *counter) {
  const Conformation base = conformation_of(ligand);
  const std::size_t m = pose.torsion_angles.size();

  // Torsions change rarely; cache the torsioned-but-untransformed frame.
  Conformation torsioned = apply_torsions(base, ligand, pose.torsion_angles);

  double step_t = config.step_translation;
  double step_r = config.step_rotation;
  double step_q = config.step_torsion;

  for (int iter = 0;
       iter < config.max_iterations && step_t >= config.min_translation;
       ++iter) {
    const Eigen::Vector3d pivot = centroid(pose.conformation);

    double best_score = pose.geo_score;
    bool improved = false;
    RigidTransform best_transform;
    std::vector<double> best_angles;
    Conformation best_torsioned;
    Conformation best_conf;

    const auto consider = [&](const RigidTransform &transform,
                              const std::vector<double> *angles,
                              const Conformation &frame) {
      const Conformation conf = apply_rigid(frame, transform);
      const double score = geo_score(pocket, ligand, conf, counter);
      if (score > best_score) {
        best_score = score;
        improved = true;
        best_transform = transform;
        if (angles != nullptr) {
          best_angles = *angles;
          best_torsioned = frame;
        } else {
          best_angles.clear();
        }
        best_conf = conf;
      }
    };

    for (int axis = 0; axis < 3; ++axis) {
      for (const double sign : {1.0, -1.0}) {
        RigidTransform t = pose.transform;
        t.translation[axis] += sign * step_t;
        consider(t, nullptr, torsioned);
      }
    }
    for (int axis = 0; axis < 3; ++axis) {
      for (const double sign : {1.0, -1.0}) {
        RigidTransform spin;
        spin.rotation = Eigen::Quaterniond(Eigen::AngleAxisd(
            sign * step_r, Eigen::Vector3d::Unit(axis)));
        spin.translation = pivot - spin.rotation * pivot;
        consider(compose(spin, pose.transform), nullptr, torsioned);
      }
    }
    std::vector<double> angles = pose.torsion_angles;
    for (std::size_t t = 0; t < m; ++t) {
      for (const double sign : {1.0, -1.0}) {
        angles[t] = pose.torsion_angles[t] + sign * step_q;
        consider(pose.transform, &angles,
                 apply_torsions(base, ligand, angles));
      }
      angles[t] = pose.torsion_angles[t];
    }

    if (improved) {
      pose.transform = best_transform;
      if (!best_angles.empty()) {
        pose.torsion_angles = std::move(best_angles);
        torsioned = std::move(best_torsioned);
      }
      pose.conformation = std::move(best_conf);
      pose.geo_score = best_score;
    } else {
      step_t *= 0.5;
      step_r *= 0.5;
      step_q *= 0.5;
    }
  }
  return pose;
}

std::vector<Pose> cluster_and_select(const std::vector<Pose> &poses,
                                     const Ligand &ligand, double threshold,
                                     std::size_t top) {
  if (poses.empty()) throw InvalidArgument("cannot cluster an empty pose list");

  // Visit by descending geo_score; stable sort keeps restart order on ties.
  std::vector<std::size_t> visit(poses.size());
  std::iota(visit.begin(), visit.end(), 0);
  std::stable_sort(visit.begin(), visit.end(),
                   [&](std::size_t a, std::size_t b) {
                     return poses[a].geo_score > poses[b].geo_score;
                   });

  std::vector<std::size_t> leaders;
  std::vector<std::size_t> followers;
  for (const std::size_t idx : visit) {
    bool joined = false;
    for (const std::size_t leader : leaders) {
      if (heavy_atom_rmsd(poses[idx].conformation,
                          poses[leader].conformation, ligand) <= threshold) {
        joined = true;
        break;
      }
    }
    if (joined)
      followers.push_back(idx);
    else
      leaders.push_back(idx);
  }

  std::vector<Pose> out;
  out.reserve(std::min(top, poses.size()));
  for (const std::size_t idx : leaders) {
    if (out.size() == top) break;
    out.push_back(poses[idx]);
  }
  for (const std::size_t idx : followers) {
    if (out.size() == top) break;
    out.push_back(poses[idx]);
  }
  return out;
}

DockResult dock_and_score(const Pocket &pocket, const Ligand &ligand,
                          const ScoringConfig &config) {
  if (config.restarts < 1) throw InvalidArgument("restarts must be at least 1");
  if (config.rescored < 1) throw InvalidArgument("rescored must be at least 1");
  if (!(config.rmsd_threshold > 0.0))
    throw InvalidArgument("rmsd threshold must be positive");

  EvalCounter counter;
  const Conformation base = conformation_of(ligand);
  const FlattenResult flat = flatten(ligand, base, config.flatten_max_sweeps);

  std::vector<Pose> poses = initial_poses(
      pocket, ligand, base, flat.torsion_angles, config.restarts, &counter);
  for (Pose &pose : poses)
    pose = local_search(pocket, ligand, std::move(pose), config, &counter);

  std::vector<Pose> survivors =
      cluster_and_select(poses, ligand, config.rmsd_threshold,
                         static_cast<std::size_t>(config.rescored));

  std::size_t best = 0;
  double best_chem = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < survivors.size(); ++i) {
    survivors[i].chem_score =
        chem_score(pocket, ligand, survivors[i].conformation);
    if (*survivors[i].chem_score > best_chem) {
      best_chem = *survivors[i].chem_score;
      best = i;
    }
  }

  DockResult result;
  result.smiles = ligand.name;
  result.best_score = best_chem;
  result.best_pose = survivors[best];
  result.poses_evaluated = poses.size();
  result.scoring_evals = counter.scoring_evals;
  return result;
}

Pose exhaustive_dock(const Pocket &pocket, const Ligand &ligand) {
  if (ligand.atoms.size() > 5)
    throw InvalidArgument("exhaustive dock handles at most 5 atoms");
  if (!ligand.torsions.empty())
    throw InvalidArgument("exhaustive dock requires a rigid ligand");
  for (int axis = 0; axis < 3; ++axis) {
    const double extent = (pocket.dims[axis] - 1) * pocket.spacing;
    if (extent > 16.0 + 1e-9)
      throw InvalidArgument("exhaustive dock pocket side exceeds 16 A");
  }

  constexpr int kOrientations = 512;
  constexpr double kLatticeStep = 0.25;

  const Conformation base = conformation_of(ligand);
  const Eigen::Vector3d base_centroid = centroid(base);

  std::vector<Eigen::Quaterniond> rotations;
  std::vector<Eigen::Matrix3Xd> rotated_heavy;
  rotations.reserve(kOrientations);
  rotated_heavy.reserve(kOrientations);
  Eigen::Matrix3Xd centered_heavy(3, ligand.heavy_atom_count());
  {
    Eigen::Index col = 0;
    for (std::size_t i = 0; i < ligand.atoms.size(); ++i)
      if (ligand.atoms[i].is_heavy)
        centered_heavy.col(col++) =
            base.col(static_cast<Eigen::Index>(i)) - base_centroid;
  }
  for (int o = 0; o < kOrientations; ++o) {
    const Eigen::Quaterniond q(Eigen::AngleAxisd(
        fibonacci_rotation_angle(o), fibonacci_axis(o, kOrientations)));
    rotations.push_back(q);
    rotated_heavy.push_back(q.toRotationMatrix() * centered_heavy);
  }

  std::array<int, 3> lattice_counts;
  for (int axis = 0; axis < 3; ++axis) {
    const double extent = (pocket.dims[axis] - 1) * pocket.spacing;
    lattice_counts[axis] =
        static_cast<int>(std::floor(extent / kLatticeStep + 1e-9)) + 1;
  }

  double best_score = -std::numeric_limits<double>::infinity();
  Eigen::Vector3d best_point = pocket.origin;
  int best_orientation = 0;

  const Eigen::Index heavy_count = centered_heavy.cols();
  for (int iz = 0; iz < lattice_counts[2]; ++iz) {
    for (int iy = 0; iy < lattice_counts[1]; ++iy) {
      for (int ix = 0; ix < lattice_counts[0]; ++ix) {
        const Eigen::Vector3d point =
            pocket.origin +
            kLatticeStep * Eigen::Vector3d(ix, iy, iz);
        for (int o = 0; o < kOrientations; ++o) {
          double score = 0.0;
          for (Eigen::Index a = 0; a < heavy_count; ++a)
            score += pocket_field_value(pocket, rotated_heavy[o].col(a) + point);
          if (score > best_score) {
            best_score = score;
            best_point = point;
            best_orientation = o;
          }
        }
      }
    }
  }

  Pose pose;
  pose.transform.rotation = rotations[static_cast<std::size_t>(best_orientation)];
  pose.transform.translation =
      best_point - pose.transform.rotation * base_centroid;
  pose.conformation = apply_rigid(base, pose.transform);
  pose.geo_score = geo_score(pocket, ligand, pose.conformation);
  return pose;
}

}  // namespace vscreen
