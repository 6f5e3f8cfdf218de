//
// Project vscreen - Copyright 2026 the vscreen authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "vscreen/dockengine/grid.hpp"
#include "vscreen/error.hpp"
#include "vscreen/geometry/embed.hpp"
#include "vscreen/geometry/transform.hpp"
#include "vscreen/molmodel/smiles.hpp"
#include "vscreen/predictor/sampling.hpp"
#include "vscreen/predictor/time_tree.hpp"

namespace {

using namespace vscreen;

FeatureVector fv(double f0, double f1 = 0.0, double f2 = 0.0, double f3 = 0.0,
                 double f4 = 0.0, double f5 = 0.0) {
  FeatureVector f;
  f << f0, f1, f2, f3, f4, f5;
  return f;
}

// Independent restatement of the tree file format, used to route samples
// without touching TimeTree internals.
struct FlatNode {
  bool is_leaf = true;
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double mean = 0.0;
};

std::vector<FlatNode> parse_tree_text(const std::string &text) {
  std::istringstream in(text);
  std::string kind;
  std::string header_version;
  std::string header_depth;
  in >> kind >> header_version >> header_depth;
  REQUIRE(kind == "timetree");
  REQUIRE(header_version == "v1");

  std::map<int, FlatNode> by_id;
  while (in >> kind) {
    int id = -1;
    FlatNode node;
    if (kind == "leaf") {
      std::string mean_field;
      in >> id >> mean_field;
      REQUIRE(mean_field.rfind("mean=", 0) == 0);
      node.mean = std::stod(mean_field.substr(5));
    } else {
      REQUIRE(kind == "node");
      std::string f_field, thr_field, left_field, right_field;
      in >> id >> f_field >> thr_field >> left_field >> right_field;
      node.is_leaf = false;
      node.feature = std::stoi(f_field.substr(1));
      REQUIRE(thr_field.rfind("<=", 0) == 0);
      node.threshold = std::stod(thr_field.substr(2));
      node.left = std::stoi(left_field.substr(5));
      node.right = std::stoi(right_field.substr(6));
    }
    REQUIRE(id >= 0);
    by_id[id] = node;
  }

  std::vector<FlatNode> nodes(by_id.size());
  for (const auto &[id, node] : by_id) {
    REQUIRE(id < static_cast<int>(nodes.size()));
    nodes[static_cast<std::size_t>(id)] = node;
  }
  return nodes;
}

int route_to_leaf(const std::vector<FlatNode> &nodes,
                  const FeatureVector &features) {
  int at = 0;
  while (!nodes[static_cast<std::size_t>(at)].is_leaf) {
    const FlatNode &n = nodes[static_cast<std::size_t>(at)];
    at = features[n.feature] <= n.threshold ? n.left : n.right;
  }
  return at;
}

double population_variance(const std::vector<double> &values) {
  double mean = 0.0;
  for (const double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double acc = 0.0;
  for (const double v : values) acc += (v - mean) * (v - mean);
  return acc / static_cast<double>(values.size());
}

Ligand embedded_ligand(const std::string &smiles) {
  Ligand lig = detect_torsions(parse_smiles(smiles));
  const Conformation conf = embed_3d(lig);
  return with_conformation(std::move(lig), conf);
}

Pocket measurement_pocket() {
  const std::vector<ProteinAtom> protein = {
      {Element::O, Eigen::Vector3d(0.0, 0.0, 0.0)}};
  return build_pocket(protein, "bench", Eigen::Vector3d::Zero(), 2.0, 0.5);
}

}  // namespace

TEST_CASE("constant targets collapse to a single leaf") {
  std::vector<Sample> samples;
  for (int i = 0; i < 10; ++i) samples.push_back({fv(i, i * 2.0), 2.5});
  const TimeTree tree = train(samples);
  CHECK(tree.node_count() == 1);
  CHECK(tree.leaf_count() == 1);
  CHECK(tree.depth() == 0);
  CHECK(tree.predict(fv(0)) == 2.5);
  CHECK(tree.predict(fv(1e6, -3.0, 7.0)) == 2.5);
}

TEST_CASE("a separating feature yields two exact leaves") {
  std::vector<Sample> samples;
  for (int i = 0; i < 5; ++i) samples.push_back({fv(0.0), 1.0});
  for (int i = 0; i < 5; ++i) samples.push_back({fv(1.0), 3.0});
  const TimeTree tree = train(samples);
  CHECK(tree.node_count() == 3);
  CHECK(tree.leaf_count() == 2);
  CHECK(tree.depth() == 1);
  CHECK(tree.predict(fv(0.0)) == 1.0);
  CHECK(tree.predict(fv(0.49)) == 1.0);
  CHECK(tree.predict(fv(0.51)) == 3.0);
  CHECK(tree.predict(fv(1.0)) == 3.0);
  CHECK(tree.serialize().find("node 0 f0 <=0.5 ") != std::string::npos);
}

TEST_CASE("split ties resolve to the lowest feature, then threshold") {
  SUBCASE("two features tie, lower index wins") {
    std::vector<Sample> samples;
    for (int i = 0; i < 5; ++i) samples.push_back({fv(0.0, 0.0), 1.0});
    for (int i = 0; i < 5; ++i) samples.push_back({fv(1.0, 1.0), 3.0});
    const std::string text = train(samples).serialize();
    CHECK(text.find("node 0 f0 ") != std::string::npos);
  }

  SUBCASE("two thresholds tie, lower value wins") {
    // Values 0, 1, 2 with five samples each and target equal to the value:
    // splitting after 0 or before 2 leaves the same summed child error.
    std::vector<Sample> samples;
    for (int value = 0; value < 3; ++value)
      for (int i = 0; i < 5; ++i)
        samples.push_back({fv(value), static_cast<double>(value)});
    const std::string text = train(samples).serialize();
    CHECK(text.find("node 0 f0 <=0.5 ") != std::string::npos);
  }
}

TEST_CASE("training is deterministic") {
  const std::vector<Sample> samples = synthetic_samples(600, 7);
  const TimeTree a = train(samples);
  const TimeTree b = train(samples);
  CHECK(a.serialize() == b.serialize());
}

TEST_CASE("leaves honor min_leaf and store routed-subset means") {
  const std::vector<Sample> samples = synthetic_samples(400, 11);
  const TimeTree tree = train(samples, TimeTree::kMaxDepth, 5);
  const std::vector<FlatNode> nodes = parse_tree_text(tree.serialize());

  std::map<int, std::vector<double>> routed;
  for (const Sample &s : samples) {
    const int leaf = route_to_leaf(nodes, s.features);
    routed[leaf].push_back(s.time_ms);
    // The library's own descent must agree with the file it wrote.
    CHECK(tree.predict(s.features) ==
          nodes[static_cast<std::size_t>(leaf)].mean);
  }

  CHECK(routed.size() == tree.leaf_count());
  for (const auto &[leaf, times] : routed) {
    CHECK(times.size() >= 5);
    double mean = 0.0;
    for (const double t : times) mean += t;
    mean /= static_cast<double>(times.size());
    CHECK(nodes[static_cast<std::size_t>(leaf)].mean ==
          doctest::Approx(mean).epsilon(1e-12));
  }
}

TEST_CASE("an overfit tree reproduces separable training data") {
  std::vector<Sample> samples;
  for (int i = 0; i < 16; ++i)
    samples.push_back({fv(i), 0.25 * i * i});
  const TimeTree tree = train(samples, TimeTree::kMaxDepth, 1);
  for (const Sample &s : samples)
    CHECK(tree.predict(s.features) == s.time_ms);
  CHECK(tree.depth() <= TimeTree::kMaxDepth);
}

TEST_CASE("depth caps bind") {
  const std::vector<Sample> samples = synthetic_samples(2000, 3);
  CHECK(train(samples, 3, 1).depth() <= 3);
  const TimeTree stump = train(samples, 0, 5);
  CHECK(stump.node_count() == 1);
  double mean = 0.0;
  for (const Sample &s : samples) mean += s.time_ms;
  mean /= static_cast<double>(samples.size());
  CHECK(stump.predict(fv(9, 9, 9)) == doctest::Approx(mean).epsilon(1e-12));
  CHECK(train(samples).depth() <= 16);
}

TEST_CASE("training rejects bad inputs") {
  CHECK_THROWS_AS(train({}), InvalidArgument);
  std::vector<Sample> tiny = {{fv(1), 1.0}, {fv(2), 2.0}};
  CHECK_THROWS_AS(train(tiny, 16, 5), InvalidArgument);  // fewer than min_leaf
  CHECK_THROWS_AS(train(tiny, -1, 1), InvalidArgument);
  CHECK_THROWS_AS(train(tiny, 17, 1), InvalidArgument);
  CHECK_THROWS_AS(train(tiny, 16, 0), InvalidArgument);
  std::vector<Sample> negative = {{fv(1), -1.0}, {fv(2), 2.0}};
  CHECK_THROWS_AS(train(negative, 16, 1), InvalidArgument);
  std::vector<Sample> inf_time = {
      {fv(1), std::numeric_limits<double>::infinity()}};
  CHECK_THROWS_AS(train(inf_time, 16, 1), InvalidArgument);
  std::vector<Sample> nan_feature = {
      {fv(std::numeric_limits<double>::quiet_NaN()), 1.0}};
  CHECK_THROWS_AS(train(nan_feature, 16, 1), InvalidArgument);
}

TEST_CASE("synthetic family generalizes to held-out data") {
  const std::vector<Sample> samples = synthetic_samples(5000, 20260819);
  const std::vector<Sample> train_set(samples.begin(), samples.begin() + 4000);
  const std::vector<Sample> test_set(samples.begin() + 4000, samples.end());
  const TimeTree tree = train(train_set);

  double mean_y = 0.0;
  for (const Sample &s : test_set) mean_y += s.time_ms;
  mean_y /= static_cast<double>(test_set.size());

  double ss_res = 0.0;
  double ss_tot = 0.0;
  double signed_err = 0.0;
  for (const Sample &s : test_set) {
    const double predicted = tree.predict(s.features);
    ss_res += (s.time_ms - predicted) * (s.time_ms - predicted);
    ss_tot += (s.time_ms - mean_y) * (s.time_ms - mean_y);
    signed_err += predicted - s.time_ms;
  }
  const double r_squared = 1.0 - ss_res / ss_tot;
  const double mean_err = signed_err / static_cast<double>(test_set.size());

  CHECK(r_squared > 0.8);
  CHECK(std::abs(mean_err) < 0.5);
}

TEST_CASE("bucketize maps times to 10 ms buckets") {
  CHECK(bucketize(0.0) == 0);
  CHECK(bucketize(9.99) == 0);
  CHECK(bucketize(10.0) == 1);
  CHECK(bucketize(19.999) == 1);
  CHECK(bucketize(25.0) == 2);
  CHECK(bucketize(250.0) == 25);

  std::uint64_t clamped = 0;
  CHECK(bucketize(-0.1, &clamped) == 0);
  CHECK(clamped == 1);
  CHECK(bucketize(-100.0, &clamped) == 0);
  CHECK(clamped == 2);
  CHECK(bucketize(5.0, &clamped) == 0);
  CHECK(clamped == 2);  // positive values leave the counter alone
  CHECK(bucketize(-1.0) == 0);

  CHECK_THROWS_AS(bucketize(std::numeric_limits<double>::infinity()),
                  InvalidArgument);
  CHECK_THROWS_AS(bucketize(std::numeric_limits<double>::quiet_NaN()),
                  InvalidArgument);
}

TEST_CASE("bucketing lowers within-bucket time variance") {
  const std::vector<Sample> samples = synthetic_samples(5000, 5);
  const TimeTree tree = train(samples);

  std::vector<double> all_times;
  std::map<std::uint64_t, std::vector<double>> buckets;
  for (const Sample &s : samples) {
    all_times.push_back(s.time_ms);
    buckets[bucketize(tree.predict(s.features))].push_back(s.time_ms);
  }
  const double total_variance = population_variance(all_times);
  CHECK(buckets.size() >= 3);  // the family spans tens of milliseconds
  std::size_t checked = 0;
  for (const auto &[id, times] : buckets) {
    if (times.size() < 30) continue;
    ++checked;
    CHECK(population_variance(times) < total_variance);
  }
  CHECK(checked >= 3);
}

TEST_CASE("tree files round trip") {
  const std::vector<Sample> samples = synthetic_samples(1000, 13);
  const TimeTree tree = train(samples);
  const std::string text = tree.serialize();
  CHECK(text.rfind("timetree v1 depth=" + std::to_string(tree.depth()), 0) ==
        0);

  const TimeTree reloaded = TimeTree::deserialize(text);
  CHECK(reloaded.serialize() == text);
  CHECK(reloaded.depth() == tree.depth());
  CHECK(reloaded.node_count() == tree.node_count());
  for (const Sample &s : samples)
    CHECK(reloaded.predict(s.features) == tree.predict(s.features));
  // Off-distribution probes must agree too.
  for (double x = -5.0; x <= 40.0; x += 0.7)
    CHECK(reloaded.predict(fv(x, x / 2, x * 3, -x, x * x, 0.0)) ==
          tree.predict(fv(x, x / 2, x * 3, -x, x * x, 0.0)));
}

TEST_CASE("hand-written tree files parse regardless of line order") {
  const std::string text =
      "timetree v1 depth=2\r\n"
      "leaf 1 mean=0.25\n"
      "node 2 f0 <=4 left=3 right=4\n"
      "\n"
      "leaf 4 mean=12.5\n"
      "node 0 f2 <=1.5 left=1 right=2\n"
      "leaf 3 mean=7.5\n";
  const TimeTree tree = TimeTree::deserialize(text);
  CHECK(tree.depth() == 2);
  CHECK(tree.leaf_count() == 3);
  CHECK(tree.predict(fv(0, 0, 1.0)) == 0.25);
  CHECK(tree.predict(fv(4, 0, 2.0)) == 7.5);
  CHECK(tree.predict(fv(5, 0, 2.0)) == 12.5);
}

TEST_CASE("malformed tree files are rejected") {
  const auto reject = [](const std::string &text, const std::string &needle) {
    try {
      TimeTree::deserialize(text);
      FAIL("expected ParseError for: " << text);
    } catch (const ParseError &error) {
      const std::string what = error.what();
      CHECK_MESSAGE(what.find(needle) != std::string::npos,
                    "missing '" << needle << "' in '" << what << "'");
    }
  };

  reject("", "empty tree file");
  reject("treefile v1 depth=0\nleaf 0 mean=1\n", "not a timetree file");
  reject("timetree v2 depth=0\nleaf 0 mean=1\n", "unsupported timetree version");
  reject("timetree v1 depth=0\n", "no nodes");
  reject("timetree v1 depth=0\nleaf 0 mean=1\nleaf 0 mean=2\n",
         "duplicate node id");
  reject("timetree v1 depth=0\nleaf 5 mean=1\n", "out of range");
  reject("timetree v1 depth=1\nnode 0 f0 <=1 left=1 right=7\nleaf 1 mean=2\n",
         "child id out of range");
  reject("timetree v1 depth=1\nnode 0 f9 <=1 left=1 right=2\nleaf 1 mean=2\n"
         "leaf 2 mean=3\n",
         "feature index out of range");
  reject("timetree v1 depth=0\nleaf 0 mean=abc\n", "bad leaf mean");
  reject("timetree v1 depth=0\nleaf 0 mean=inf\n", "finite");
  reject("timetree v1 depth=0\nbranch 0 mean=1\n", "unknown tree line kind");
  reject("timetree v1 depth=0\nleaf 0\n", "malformed tree line");
  reject("timetree v1 depth=1\nnode 0 f0 <=1 left=1 right=1\nleaf 1 mean=2\n",
         "cycle or share");
  reject("timetree v1 depth=1\nnode 0 f0 <=1 left=0 right=1\nleaf 1 mean=2\n",
         "cycle or share");
  reject("timetree v1 depth=0\nleaf 0 mean=1\nleaf 1 mean=2\n", "unreachable");
  reject("timetree v1 depth=3\nnode 0 f0 <=1 left=1 right=2\nleaf 1 mean=2\n"
         "leaf 2 mean=3\n",
         "does not match");
  reject("timetree v1 depth=zero\nleaf 0 mean=1\n", "bad depth");
}

TEST_CASE("ligand family is deterministic and parseable") {
  const std::vector<std::string> family = ligand_family(64, 99);
  CHECK(family.size() == 64);
  CHECK(ligand_family(64, 99) == family);
  CHECK(ligand_family(64, 100) != family);

  bool saw_ring = false;
  bool saw_chain = false;
  for (const std::string &smiles : family) {
    const Ligand lig = detect_torsions(parse_smiles(smiles));
    CHECK(lig.torsions.size() >= 1);
    const FeatureVector f = smiles_features(smiles);
    if (f[1] > 0.0)
      saw_ring = true;
    else
      saw_chain = true;
  }
  CHECK(saw_ring);
  CHECK(saw_chain);
}

TEST_CASE("synthetic samples follow the documented recipe") {
  const std::vector<Sample> samples = synthetic_samples(256, 42);
  const std::vector<Sample> again = synthetic_samples(256, 42);
  const std::vector<std::string> family = ligand_family(256, 42);
  REQUIRE(samples.size() == 256);

  double max_noise = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    CHECK(samples[i].time_ms >= 0.0);
    CHECK(std::isfinite(samples[i].time_ms));
    CHECK(samples[i].time_ms == again[i].time_ms);
    CHECK((samples[i].features - again[i].features).cwiseAbs().maxCoeff() ==
          0.0);
    CHECK((samples[i].features - smiles_features(family[i]))
              .cwiseAbs()
              .maxCoeff() == 0.0);

    const Ligand lig = detect_torsions(parse_smiles(family[i]));
    const double base = 0.1 *
                        static_cast<double>(lig.heavy_atom_count()) *
                        static_cast<double>(lig.torsions.size());
    max_noise = std::max(max_noise, std::abs(samples[i].time_ms - base));
  }
  // Noise has a 0.3 ms sigma; at 256 draws a 2 ms deviation would be absurd.
  CHECK(max_noise < 2.0);
  CHECK(max_noise > 0.0);  // but it is genuinely noisy
}

TEST_CASE("measure_samples times real docking runs") {
  const Pocket pocket = measurement_pocket();
  ScoringConfig config;
  config.restarts = 2;
  config.rescored = 1;

  SUBCASE("no ligands, no samples") {
    const MeasuredSamples out = measure_samples(pocket, {}, config);
    CHECK(out.samples.empty());
    CHECK(out.errors == 0);
  }

  SUBCASE("repeated ligand gives identical features") {
    const Ligand lig = embedded_ligand("CCO");
    const MeasuredSamples out = measure_samples(pocket, {lig, lig}, config);
    REQUIRE(out.samples.size() == 2);
    CHECK(out.errors == 0);
    CHECK((out.samples[0].features - out.samples[1].features)
              .cwiseAbs()
              .maxCoeff() == 0.0);
    CHECK(out.samples[0].time_ms > 0.0);
    CHECK(out.samples[1].time_ms > 0.0);
  }

  SUBCASE("a failing ligand is skipped and counted") {
    const std::vector<Ligand> ligands = {embedded_ligand("CCO"), Ligand{},
                                         embedded_ligand("CO")};
    const MeasuredSamples out = measure_samples(pocket, ligands, config);
    CHECK(out.samples.size() == 2);
    CHECK(out.errors == 1);
  }

  SUBCASE("median time grows with problem size") {
    ScoringConfig heavier = config;
    heavier.restarts = 8;
    heavier.rescored = 2;

    std::vector<Ligand> ligands;
    std::vector<double> keys;  // heavy atoms times torsions
    for (const std::string &smiles : ligand_family(120, 20260819)) {
      Ligand lig = embedded_ligand(smiles);
      keys.push_back(static_cast<double>(lig.heavy_atom_count()) *
                     static_cast<double>(lig.torsions.size()));
      ligands.push_back(std::move(lig));
    }
    const MeasuredSamples out = measure_samples(pocket, ligands, heavier);
    REQUIRE(out.samples.size() == 120);

    std::vector<std::size_t> order(120);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return keys[a] < keys[b];
    });

    std::vector<double> medians;
    for (std::size_t decile = 0; decile < 10; ++decile) {
      std::vector<double> bin;
      for (std::size_t i = decile * 12; i < (decile + 1) * 12; ++i)
        bin.push_back(out.samples[order[i]].time_ms);
      std::sort(bin.begin(), bin.end());
      medians.push_back((bin[5] + bin[6]) / 2.0);
    }
    for (std::size_t i = 1; i < medians.size(); ++i)
      CHECK(medians[i] > medians[i - 1]);
  }
}
