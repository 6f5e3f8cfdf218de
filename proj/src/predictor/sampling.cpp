//
// Project vscreen - Copyright 2026 the vscreen authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "vscreen/predictor/sampling.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

#include "vscreen/error.hpp"
#include "vscreen/molmodel/smiles.hpp"

namespace vscreen {

namespace {

constexpr double kMsPerHeavyTorsion = 0.1;
constexpr double kNoiseSigmaMs = 0.3;

// Box-Muller over explicit 53-bit uniforms. The standard library's normal
// distribution is free to change its algorithm between implementations;
// this one keeps the noise stream pinned to the seed alone.
class GaussianStream {
public:
  explicit GaussianStream(std::uint64_t seed) : rng_(seed) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    while (u1 == 0.0)
      u1 = std::ldexp(static_cast<double>(rng_() >> 11), -53);
    const double u2 = std::ldexp(static_cast<double>(rng_() >> 11), -53);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

private:
  std::mt19937_64 rng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

} // namespace

std::vector<std::string> ligand_family(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::string> family;
  family.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const bool ring_head = rng() % 3 == 0;
    const std::size_t tail = 4 + rng() % 18;
    std::string smiles = ring_head ? "C1CCCCC1" : "";
    smiles.append(tail, 'C');
    family.push_back(std::move(smiles));
  }
  return family;
}

std::vector<double> gaussian_noise(std::size_t count, std::uint64_t seed) {
  GaussianStream stream(seed);
  std::vector<double> values;
  values.reserve(count);
  for (std::size_t i = 0; i < count; ++i) values.push_back(stream.next());
  return values;
}

std::vector<Sample> synthetic_samples(std::size_t count, std::uint64_t seed) {
  const std::vector<std::string> family = ligand_family(count, seed);
  const std::vector<double> noise =
      gaussian_noise(count, seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<Sample> samples;
  samples.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const Ligand ligand = detect_torsions(parse_smiles(family[i]));
    const double heavy = static_cast<double>(ligand.heavy_atom_count());
    const double torsions = static_cast<double>(ligand.torsions.size());
    const double time_ms =
        std::max(0.0, kMsPerHeavyTorsion * heavy * torsions +
                          kNoiseSigmaMs * noise[i]);
    samples.push_back({graph_features(ligand), time_ms});
  }
  return samples;
}

MeasuredSamples measure_samples(const Pocket &pocket,
                                const std::vector<Ligand> &ligands,
                                const ScoringConfig &config) {
  MeasuredSamples out;
  out.samples.reserve(ligands.size());
  bool warmed = false;
  for (const Ligand &ligand : ligands) {
    try {
      if (!warmed) {
        dock_and_score(pocket, ligand, config);
        warmed = true;
      }
      const auto start = std::chrono::steady_clock::now();
      dock_and_score(pocket, ligand, config);
      const auto stop = std::chrono::steady_clock::now();
      const double elapsed_ms =
          std::chrono::duration<double, std::milli>(stop - start).count();
      out.samples.push_back({graph_features(ligand), elapsed_ms});
    } catch (const Error &) {
      ++out.errors;
    }
  }
  return out;
}

} // namespace vscreen
