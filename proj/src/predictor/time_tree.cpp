//
// Project vscreen - Copyright 2026 the vscreen authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "vscreen/predictor/time_tree.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>

#include "vscreen/error.hpp"

namespace vscreen {

namespace {

constexpr int kFeatureCount = FeatureVector::RowsAtCompileTime;

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc())
    throw InvalidArgument("cannot format tree parameter");
  return std::string(buf, ptr);
}

struct BuildNode {
  int feature = -1; // negative marks a leaf
  double threshold = 0.0;
  std::int32_t left = -1;
  std::int32_t right = -1;
  double mean = 0.0;
};

struct Builder {
  const std::vector<Sample> &samples;
  int max_depth;
  std::size_t min_leaf;
  std::vector<BuildNode> nodes;
  std::vector<std::size_t> order; // scratch for per-feature sorts

  double mean_of(const std::vector<std::size_t> &subset) const {
    double sum = 0.0;
    for (const std::size_t i : subset) sum += samples[i].time_ms;
    return sum / static_cast<double>(subset.size());
  }

  bool constant_target(const std::vector<std::size_t> &subset) const {
    const double first = samples[subset.front()].time_ms;
    for (const std::size_t i : subset)
      if (samples[i].time_ms != first) return false;
    return true;
  }

  struct Split {
    int feature = -1;
    double threshold = 0.0;
    double child_sse = std::numeric_limits<double>::infinity();
  };

  // Scans every admissible (feature, threshold) pair and keeps the one with
  // the smallest summed child squared error. Features are visited in
  // ascending index order and thresholds in ascending value order, so a
  // strict improvement test realizes the documented tie-break for free.
  Split best_split(const std::vector<std::size_t> &subset) {
    Split best;
    const std::size_t n = subset.size();
    std::vector<double> prefix_sum(n + 1, 0.0);
    std::vector<double> prefix_sq(n + 1, 0.0);

    for (int f = 0; f < kFeatureCount; ++f) {
      order = subset;
      std::sort(order.begin(), order.end(),
                [&](std::size_t a, std::size_t b) {
                  return samples[a].features[f] < samples[b].features[f];
                });
      for (std::size_t i = 0; i < n; ++i) {
        const double y = samples[order[i]].time_ms;
        prefix_sum[i + 1] = prefix_sum[i] + y;
        prefix_sq[i + 1] = prefix_sq[i] + y * y;
      }
      for (std::size_t left = min_leaf; left + min_leaf <= n; ++left) {
        const double lo = samples[order[left - 1]].features[f];
        const double hi = samples[order[left]].features[f];
        if (lo == hi) continue;
        const double mid = lo + (hi - lo) / 2.0;
        // Rounding can pull the midpoint onto the right-hand value, which
        // would reshuffle the partition; such a candidate is unusable.
        if (!(mid < hi)) continue;

        const double left_sum = prefix_sum[left];
        const double left_sq = prefix_sq[left];
        const double right_sum = prefix_sum[n] - left_sum;
        const double right_sq = prefix_sq[n] - left_sq;
        const double sse =
            (left_sq - left_sum * left_sum / static_cast<double>(left)) +
            (right_sq -
             right_sum * right_sum / static_cast<double>(n - left));
        if (sse < best.child_sse) {
          best.feature = f;
          best.threshold = mid;
          best.child_sse = sse;
        }
      }
    }
    return best;
  }

  std::int32_t build(std::vector<std::size_t> subset, int depth) {
    const std::int32_t id = static_cast<std::int32_t>(nodes.size());
    nodes.emplace_back();

    Split split;
    if (depth < max_depth && subset.size() >= 2 * min_leaf &&
        !constant_target(subset))
      split = best_split(subset);

    if (split.feature < 0) {
      nodes[id].mean = mean_of(subset);
      return id;
    }

    std::vector<std::size_t> left, right;
    for (const std::size_t i : subset) {
      if (samples[i].features[split.feature] <= split.threshold)
        left.push_back(i);
      else
        right.push_back(i);
    }
    subset.clear();
    subset.shrink_to_fit();

    nodes[id].feature = split.feature;
    nodes[id].threshold = split.threshold;
    const std::int32_t left_id = build(std::move(left), depth + 1);
    const std::int32_t right_id = build(std::move(right), depth + 1);
    nodes[id].left = left_id;
    nodes[id].right = right_id;
    return id;
  }
};

} // namespace

TimeTree train(const std::vector<Sample> &samples, int max_depth,
               std::size_t min_leaf) {
  if (samples.empty())
    throw InvalidArgument("cannot train on an empty sample set");
  if (min_leaf < 1)
    throw InvalidArgument("min_leaf must be at least 1");
  if (samples.size() < min_leaf)
    throw InvalidArgument("training needs at least min_leaf samples");
  if (max_depth < 0 || max_depth > TimeTree::kMaxDepth)
    throw InvalidArgument("max_depth must be between 0 and 16");
  for (const Sample &s : samples) {
    if (!std::isfinite(s.time_ms) || s.time_ms < 0.0)
      throw InvalidArgument("sample times must be finite and non-negative");
    if (!s.features.allFinite())
      throw InvalidArgument("sample features must be finite");
  }

  Builder builder{samples, max_depth, min_leaf, {}, {}};
  std::vector<std::size_t> all(samples.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  builder.build(std::move(all), 0);

  TimeTree tree;
  tree.nodes_.reserve(builder.nodes.size());
  for (const BuildNode &built : builder.nodes) {
    TimeTree::Node node;
    node.feature = built.feature;
    node.threshold = built.threshold;
    node.left = built.left;
    node.right = built.right;
    node.mean = built.mean;
    tree.nodes_.push_back(node);
  }
  return tree;
}

double TimeTree::predict(const FeatureVector &features) const {
  if (nodes_.empty())
    throw InvalidArgument("cannot predict with an empty tree");
  std::size_t at = 0;
  while (nodes_[at].feature >= 0) {
    const Node &node = nodes_[at];
    at = static_cast<std::size_t>(features[node.feature] <= node.threshold
                                      ? node.left
                                      : node.right);
  }
  return nodes_[at].mean;
}

int TimeTree::depth() const {
  if (nodes_.empty()) return 0;
  // Iterative depth-first walk; the tree is at most kMaxDepth deep.
  int deepest = 0;
  std::vector<std::pair<std::size_t, int>> stack = {{0, 0}};
  while (!stack.empty()) {
    const auto [at, d] = stack.back();
    stack.pop_back();
    deepest = std::max(deepest, d);
    if (nodes_[at].feature >= 0) {
      stack.emplace_back(static_cast<std::size_t>(nodes_[at].left), d + 1);
      stack.emplace_back(static_cast<std::size_t>(nodes_[at].right), d + 1);
    }
  }
  return deepest;
}

std::size_t TimeTree::leaf_count() const {
  std::size_t leaves = 0;
  for (const Node &node : nodes_)
    if (node.feature < 0) ++leaves;
  return leaves;
}

std::string TimeTree::serialize() const {
  if (nodes_.empty())
    throw InvalidArgument("cannot serialize an empty tree");
  std::string out = "timetree v1 depth=" + std::to_string(depth()) + "\n";
  for (std::size_t id = 0; id < nodes_.size(); ++id) {
    const Node &node = nodes_[id];
    if (node.feature < 0) {
      out += "leaf " + std::to_string(id) + " mean=" +
             format_double(node.mean) + "\n";
    } else {
      out += "node " + std::to_string(id) + " f" +
             std::to_string(node.feature) + " <=" +
             format_double(node.threshold) + " left=" +
             std::to_string(node.left) + " right=" +
             std::to_string(node.right) + "\n";
    }
  }
  return out;
}

namespace {

// Splits on single spaces; tree files are machine-written so the shape is
// rigid by design.
std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t at = 0;
  while (at < line.size()) {
    const std::size_t space = line.find(' ', at);
    const std::size_t stop = space == std::string_view::npos ? line.size() : space;
    if (stop > at) fields.push_back(line.substr(at, stop - at));
    at = stop + 1;
  }
  return fields;
}

template <typename T>
T parse_number(std::string_view text, const char *what) {
  T value{};
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw ParseError(std::string("bad ") + what + " in tree file: '" +
                     std::string(text) + "'");
  return value;
}

std::string_view strip_prefix(std::string_view text, std::string_view prefix,
                              const char *what) {
  if (text.substr(0, prefix.size()) != prefix)
    throw ParseError(std::string("expected ") + what + " in tree file: '" +
                     std::string(text) + "'");
  return text.substr(prefix.size());
}

} // namespace

TimeTree TimeTree::deserialize(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t at = 0;
  while (at < text.size()) {
    std::size_t eol = text.find('\n', at);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(at, eol - at);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) lines.push_back(line);
    at = eol + 1;
  }
  if (lines.empty()) throw ParseError("empty tree file");

  const auto header = split_fields(lines.front());
  if (header.size() != 3 || header[0] != "timetree")
    throw ParseError("not a timetree file");
  if (header[1] != "v1")
    throw ParseError("unsupported timetree version '" + std::string(header[1]) +
                     "'");
  const int header_depth =
      parse_number<int>(strip_prefix(header[2], "depth=", "depth"), "depth");

  const std::size_t count = lines.size() - 1;
  if (count == 0) throw ParseError("tree file has no nodes");
  TimeTree tree;
  tree.nodes_.resize(count);
  std::vector<bool> seen(count, false);

  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto fields = split_fields(lines[i]);
    if (fields.empty()) continue;
    const bool is_leaf = fields[0] == "leaf";
    if (!is_leaf && fields[0] != "node")
      throw ParseError("unknown tree line kind '" + std::string(fields[0]) +
                       "'");
    if (fields.size() != (is_leaf ? 3u : 6u))
      throw ParseError("malformed tree line: '" + std::string(lines[i]) + "'");

    const auto id = parse_number<std::size_t>(fields[1], "node id");
    if (id >= count)
      throw ParseError("node id " + std::to_string(id) + " out of range");
    if (seen[id])
      throw ParseError("duplicate node id " + std::to_string(id));
    seen[id] = true;

    Node &node = tree.nodes_[id];
    if (is_leaf) {
      node.feature = -1;
      node.mean = parse_number<double>(
          strip_prefix(fields[2], "mean=", "leaf mean"), "leaf mean");
      if (!std::isfinite(node.mean))
        throw ParseError("leaf mean must be finite");
    } else {
      node.feature = parse_number<int>(strip_prefix(fields[2], "f", "feature"),
                                       "feature index");
      if (node.feature < 0 || node.feature >= kFeatureCount)
        throw ParseError("feature index out of range");
      node.threshold = parse_number<double>(
          strip_prefix(fields[3], "<=", "threshold"), "threshold");
      if (!std::isfinite(node.threshold))
        throw ParseError("threshold must be finite");
      node.left = parse_number<std::int32_t>(
          strip_prefix(fields[4], "left=", "left child"), "left child");
      node.right = parse_number<std::int32_t>(
          strip_prefix(fields[5], "right=", "right child"), "right child");
      if (node.left < 0 || node.right < 0 ||
          static_cast<std::size_t>(node.left) >= count ||
          static_cast<std::size_t>(node.right) >= count)
        throw ParseError("child id out of range");
    }
  }
  for (std::size_t id = 0; id < count; ++id)
    if (!seen[id])
      throw ParseError("missing node id " + std::to_string(id));

  // Walk from the root: every node must be reached exactly once and no
  // path may exceed the depth bound.
  std::vector<bool> reached(count, false);
  int deepest = 0;
  std::vector<std::pair<std::size_t, int>> stack = {{0, 0}};
  while (!stack.empty()) {
    const auto [node_id, d] = stack.back();
    stack.pop_back();
    if (reached[node_id])
      throw ParseError("tree nodes form a cycle or share a child");
    reached[node_id] = true;
    deepest = std::max(deepest, d);
    if (d > kMaxDepth) throw ParseError("tree exceeds the depth bound");
    const Node &node = tree.nodes_[node_id];
    if (node.feature >= 0) {
      stack.emplace_back(static_cast<std::size_t>(node.left), d + 1);
      stack.emplace_back(static_cast<std::size_t>(node.right), d + 1);
    }
  }
  for (std::size_t id = 0; id < count; ++id)
    if (!reached[id])
      throw ParseError("unreachable node id " + std::to_string(id));
  if (deepest != header_depth)
    throw ParseError("tree depth does not match its header");

  return tree;
}

std::uint64_t bucketize(double predicted_ms, std::uint64_t *clamped) {
  if (!std::isfinite(predicted_ms))
    throw InvalidArgument("bucketize needs a finite prediction");
  if (predicted_ms < 0.0) {
    if (clamped != nullptr) ++*clamped;
    return 0;
  }
  return static_cast<std::uint64_t>(predicted_ms / kBucketWidthMs);
}

} // namespace vscreen
