//
// Project vscreen - Copyright 2026 the vscreen authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "vscreen/molmodel/smiles.hpp"

namespace vscreen {

// One training observation: cheap graph features paired with a measured
// docking wall time in milliseconds.
struct Sample {
  FeatureVector features = FeatureVector::Zero();
  double time_ms = 0.0;
};

class TimeTree;

TimeTree train(const std::vector<Sample> &samples, int max_depth,
               std::size_t min_leaf);

// Regression tree over feature vectors. Immutable once built, so a single
// instance can serve predictions from many threads.
class TimeTree {
public:
  static constexpr int kMaxDepth = 16;

  double predict(const FeatureVector &features) const;

  /// Longest root-to-leaf path, in edges. A lone leaf has depth 0.
  int depth() const;
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t leaf_count() const;

  std::string serialize() const;
  static TimeTree deserialize(std::string_view text);

private:
  friend TimeTree train(const std::vector<Sample> &, int, std::size_t);

  struct Node {
    int feature = -1; // negative marks a leaf
    double threshold = 0.0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    double mean = 0.0;
  };

  TimeTree() = default;

  std::vector<Node> nodes_;
};

// Fits a variance-minimizing regression tree. Candidate thresholds sit at
// midpoints between consecutive distinct sorted feature values; descent
// sends feature <= threshold to the left child. Ties between equally good
// splits resolve to the lowest feature index, then the lowest threshold.
TimeTree train(const std::vector<Sample> &samples,
               int max_depth = TimeTree::kMaxDepth, std::size_t min_leaf = 5);

inline constexpr double kBucketWidthMs = 10.0;

// Maps a predicted time to its load-balancing bucket. Negative predictions
// clamp to bucket 0; pass a counter to observe how often that happens.
std::uint64_t bucketize(double predicted_ms, std::uint64_t *clamped = nullptr);

} // namespace vscreen
