//
// Project vscreen - Copyright 2026 the vscreen authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <fstream>

#include "vscreen/dockengine/pocket_io.hpp"
#include "vscreen/error.hpp"
#include "vscreen/molmodel/smiles.hpp"
#include "vscreen/predictor/sampling.hpp"
#include "vscreen/predictor/time_tree.hpp"
#include "vscreen/workflow/workflow.hpp"

namespace vscreen {

namespace {

std::vector<std::string> read_smiles_lines(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open SMILES library '" + path + "'");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    const auto begin = line.find_first_not_of(" \t\r");
    if (begin == std::string::npos) continue;
    const auto end = line.find_last_not_of(" \t\r");
    lines.push_back(line.substr(begin, end - begin + 1));
  }
  return lines;
}

// Deterministic stand-in for wall time: the documented cost model per
// heavy atom and torsion plus seeded Gaussian noise, so reruns reproduce
// the tree file bit for bit.
std::vector<Sample> reproducible_targets(const std::vector<Ligand> &ligands,
                                         std::uint64_t seed) {
  const std::vector<double> noise = gaussian_noise(ligands.size(), seed);
  std::vector<Sample> samples;
  samples.reserve(ligands.size());
  for (std::size_t i = 0; i < ligands.size(); ++i) {
    const Ligand &lig = ligands[i];
    const double base = 0.1 * static_cast<double>(lig.heavy_atom_count()) *
                        static_cast<double>(lig.torsions.size());
    samples.push_back(
        {graph_features(lig), std::max(0.0, base + 0.3 * noise[i])});
  }
  return samples;
}

} // namespace

TrainReport cmd_train(const TrainOptions &options) {
  const Pocket pocket = read_pocket_file(options.pocket_path);
  const std::vector<std::string> lines = read_smiles_lines(options.input_path);

  TrainReport report;
  std::vector<Ligand> ligands;
  for (const std::string &smiles : lines) {
    try {
      ligands.push_back(prepare_ligand(smiles));
    } catch (const Error &) {
      ++report.skipped;
    }
  }

  std::vector<Sample> samples;
  if (options.reproducible_targets) {
    samples = reproducible_targets(ligands, options.seed);
  } else {
    MeasuredSamples measured =
        measure_samples(pocket, ligands, options.scoring);
    report.skipped += measured.errors;
    samples = std::move(measured.samples);
  }
  report.samples = samples.size();

  if (samples.size() < 2)
    throw InvalidArgument("too few samples to train a time model");
  const std::size_t holdout = std::max<std::size_t>(1, samples.size() / 5);
  const std::vector<Sample> train_set(samples.begin(),
                                      samples.end() -
                                          static_cast<std::ptrdiff_t>(holdout));
  const std::vector<Sample> test_set(samples.end() -
                                         static_cast<std::ptrdiff_t>(holdout),
                                     samples.end());
  const TimeTree tree = train(train_set);

  double mean_y = 0.0;
  for (const Sample &s : test_set) mean_y += s.time_ms;
  mean_y /= static_cast<double>(test_set.size());
  double ss_res = 0.0, ss_tot = 0.0, signed_err = 0.0;
  for (const Sample &s : test_set) {
    const double predicted = tree.predict(s.features);
    ss_res += (s.time_ms - predicted) * (s.time_ms - predicted);
    ss_tot += (s.time_ms - mean_y) * (s.time_ms - mean_y);
    signed_err += predicted - s.time_ms;
  }
  report.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  report.mean_error_ms = signed_err / static_cast<double>(test_set.size());

  std::ofstream out(options.out_tree, std::ios::trunc);
  if (!out) throw IoError("cannot write tree file '" + options.out_tree + "'");
  out << tree.serialize();
  out.flush();
  if (!out) throw IoError("write failed on '" + options.out_tree + "'");
  report.tree_path = options.out_tree;
  return report;
}

} // namespace vscreen
