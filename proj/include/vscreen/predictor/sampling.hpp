//
// Project vscreen - Copyright 2026 the vscreen authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vscreen/dockengine/search.hpp"
#include "vscreen/molmodel/ligand.hpp"
#include "vscreen/molmodel/pocket.hpp"
#include "vscreen/predictor/time_tree.hpp"

namespace vscreen {

// Deterministic SMILES family spanning a wide range of heavy-atom and
// torsion counts: plain carbon chains mixed with cyclohexyl-headed tails.
std::vector<std::string> ligand_family(std::size_t count, std::uint64_t seed);

// Standard-normal draws from a pinned Box-Muller stream; equal arguments
// give equal values on every platform.
std::vector<double> gaussian_noise(std::size_t count, std::uint64_t seed);

// Reference training set with a known cost surface: each molecule's time is
// 0.1 ms per heavy atom per torsion plus Gaussian noise (sigma 0.3 ms) from
// a fixed stream, clamped at zero. Equal arguments give equal samples.
std::vector<Sample> synthetic_samples(std::size_t count, std::uint64_t seed);

struct MeasuredSamples {
  std::vector<Sample> samples;
  std::uint64_t errors = 0;
};

// Docks every ligand once and records wall time against its graph features.
// One untimed warm-up docking run precedes the measurements. Ligands that
// fail to dock are skipped and counted.
MeasuredSamples measure_samples(const Pocket &pocket,
                                const std::vector<Ligand> &ligands,
                                const ScoringConfig &config);

} // namespace vscreen
