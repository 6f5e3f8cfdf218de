//
// Project vscreen - Copyright 2026 the vscreen authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <doctest.h>

#include "vscreen/dockengine/chem.hpp"
#include "vscreen/dockengine/grid.hpp"
#include "vscreen/dockengine/pocket_io.hpp"
#include "vscreen/error.hpp"
#include "vscreen/geometry/transform.hpp"
#include "vscreen/molmodel/binary_codec.hpp"
#include "vscreen/molmodel/mol2.hpp"
#include "vscreen/molmodel/smiles.hpp"
#include "vscreen/predictor/sampling.hpp"
#include "vscreen/predictor/time_tree.hpp"
#include "vscreen/workflow/workflow.hpp"

namespace {

using namespace vscreen;

// Unique workspace per test case, removed on scope exit.
struct ScratchDir {
  explicit ScratchDir(const std::string &tag) {
    static int counter = 0;
    path = std::filesystem::temp_directory_path() /
           ("vscreen_wf_" + tag + "_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter++));
    std::filesystem::create_directories(path);
  }
  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }

  std::string file(const std::string &name) const {
    return (path / name).string();
  }

  std::filesystem::path path;
};

void write_text(const std::string &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  REQUIRE(out.good());
  out << text;
}

std::string read_text(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

std::string small_pocket_file(const ScratchDir &dir) {
  std::vector<ProteinAtom> atoms;
  atoms.push_back({Element::O, {0.0, 0.0, 0.0}});
  atoms.push_back({Element::N, {2.0, 1.0, 0.5}});
  const Pocket pocket =
      build_pocket(atoms, "test-site", {0.5, 0.5, 0.25}, 3.0, 0.5);
  const std::string path = dir.file("pocket.txt");
  write_pocket_file(path, pocket);
  return path;
}

ScoringConfig quick_scoring() {
  ScoringConfig scoring;
  scoring.restarts = 2;
  scoring.rescored = 1;
  return scoring;
}

std::vector<std::string> score_lines(const std::string &path) {
  std::vector<std::string> lines;
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

// Decodes a prepared binary file back into ligands; a throw here means a
// record was damaged or split across files.
std::vector<Ligand> decode_file(const std::string &path) {
  const std::string text = read_text(path);
  const std::vector<std::uint8_t> bytes(text.begin(), text.end());
  check_xslb_header(bytes);
  std::vector<Ligand> ligands;
  std::size_t offset = kFileHeaderSize;
  while (offset < bytes.size()) {
    auto [ligand, next] = decode_record(bytes, offset);
    ligands.push_back(std::move(ligand));
    offset = next;
  }
  return ligands;
}

std::string default_stats_text() { return format_rank_stats(RankStats{}); }

} // namespace

TEST_CASE("prepare_ligand yields an encodable, unfolded molecule") {
  const Ligand ligand = prepare_ligand("CCCCO");
  CHECK(ligand.heavy_atom_count() == 5);
  CHECK(ligand.atoms.size() > 5);       // hydrogens were added
  CHECK(ligand.torsions.size() >= 2);   // rotatable C-C bonds found

  // The record must survive the wire format unchanged in shape.
  const std::vector<std::uint8_t> wire = encode_record(ligand);
  auto [back, end] = decode_record(wire, 0);
  CHECK(end == wire.size());
  CHECK(back.atoms.size() == ligand.atoms.size());
  CHECK(back.torsions.size() == ligand.torsions.size());
}

TEST_CASE("cmd_prep writes binary files and a manifest") {
  ScratchDir dir("prep");

  SUBCASE("empty library gives an empty manifest") {
    write_text(dir.file("lib.smi"), "");
    PrepOptions options;
    options.input_path = dir.file("lib.smi");
    options.out_dir = dir.file("out");
    const PrepResult result = cmd_prep(options);
    CHECK(result.files.empty());
    CHECK(result.prepared == 0);
    CHECK(result.skipped == 0);
    CHECK(read_text(result.manifest_path).empty());
  }

  SUBCASE("record counts are conserved and bad lines are logged") {
    const std::vector<std::string> family = ligand_family(100, 7);
    std::string text;
    for (std::size_t i = 0; i < family.size(); ++i) {
      text += family[i] + "\n";
      if (i == 10) text += "not_a_molecule!!\n";
      if (i == 40) text += "C((C\n";
      if (i == 70) text += "\n";   // blank lines are not an error
      if (i == 80) text += "C1CC\n"; // unclosed ring
    }
    write_text(dir.file("lib.smi"), text);

    PrepOptions options;
    options.input_path = dir.file("lib.smi");
    options.out_dir = dir.file("out");
    const PrepResult result = cmd_prep(options);

    CHECK(result.prepared == 100);
    CHECK(result.skipped == 3);
    REQUIRE(result.skip_log.size() == 3);
    CHECK(result.skip_log[0].find("line 12") == 0);
    CHECK(result.skip_log[1].find("line 43") == 0);
    CHECK(result.skip_log[2].find("line 85") == 0);

    std::uint64_t manifest_records = 0;
    std::size_t decoded = 0;
    for (const PreparedFile &file : result.files) {
      manifest_records += file.records;
      const std::vector<Ligand> ligands = decode_file(file.path);
      CHECK(ligands.size() == file.records);
      decoded += ligands.size();
      CHECK_FALSE(file.bucket.has_value());
    }
    CHECK(manifest_records == 100);
    CHECK(decoded == 100);
    CHECK(read_text(result.manifest_path) == format_manifest(result.files));
  }

  SUBCASE("files are cut at the target size") {
    const std::vector<std::string> family = ligand_family(60, 3);
    std::string text;
    for (const std::string &smiles : family) text += smiles + "\n";
    write_text(dir.file("lib.smi"), text);

    PrepOptions options;
    options.input_path = dir.file("lib.smi");
    options.out_dir = dir.file("out");
    options.target_file_size = 4096;
    const PrepResult result = cmd_prep(options);

    CHECK(result.files.size() > 1);
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < result.files.size(); ++i) {
      const PreparedFile &file = result.files[i];
      const std::uint64_t size = std::filesystem::file_size(file.path);
      // A file may exceed the target only when a single record does.
      if (file.records > 1) CHECK(size <= options.target_file_size);
      CHECK(decode_file(file.path).size() == file.records);
      total += file.records;
      CHECK(file.path.find("part-") != std::string::npos);
      if (i + 1 < result.files.size())
        CHECK(file.path < result.files[i + 1].path); // parts stay ordered
    }
    CHECK(total == 60);
  }

  SUBCASE("bucketing groups records by predicted time") {
    // A tree over the synthetic cost surface routes each molecule into a
    // 10 ms bucket; every output file must then be bucket-pure.
    const TimeTree tree = train(synthetic_samples(400, 17));
    write_text(dir.file("tree.txt"), tree.serialize());

    const std::vector<std::string> family = ligand_family(80, 23);
    std::string text;
    for (const std::string &smiles : family) text += smiles + "\n";
    write_text(dir.file("lib.smi"), text);

    PrepOptions options;
    options.input_path = dir.file("lib.smi");
    options.out_dir = dir.file("out");
    options.tree_path = dir.file("tree.txt");
    const PrepResult result = cmd_prep(options);

    CHECK(result.prepared == 80);
    std::set<std::uint64_t> buckets_seen;
    for (const PreparedFile &file : result.files) {
      REQUIRE(file.bucket.has_value());
      buckets_seen.insert(*file.bucket);
      for (const Ligand &ligand : decode_file(file.path)) {
        const std::uint64_t bucket =
            bucketize(tree.predict(graph_features(ligand)));
        CHECK(bucket == *file.bucket);
      }
      const std::string expect =
          "bucket-" + std::to_string(*file.bucket) + "-part-";
      CHECK(file.path.find(expect) != std::string::npos);
    }
    CHECK(buckets_seen.size() > 1); // family spans several cost bands
  }

  SUBCASE("input errors are fatal") {
    PrepOptions options;
    options.input_path = dir.file("no_such.smi");
    options.out_dir = dir.file("out");
    CHECK_THROWS_AS(cmd_prep(options), IoError);

    write_text(dir.file("lib.smi"), "CC\n");
    options.input_path = dir.file("lib.smi");
    options.target_file_size = 0;
    CHECK_THROWS_AS(cmd_prep(options), InvalidArgument);

    options.target_file_size = 1 << 20;
    write_text(dir.file("bad_tree.txt"), "this is not a tree\n");
    options.tree_path = dir.file("bad_tree.txt");
    CHECK_THROWS_AS(cmd_prep(options), Error);
  }
}

TEST_CASE("cmd_train fits and reports a time model") {
  ScratchDir dir("train");
  const std::string pocket_path = small_pocket_file(dir);

  SUBCASE("too few samples is an error") {
    write_text(dir.file("lib.smi"), "CCO\n");
    TrainOptions options;
    options.pocket_path = pocket_path;
    options.input_path = dir.file("lib.smi");
    options.out_tree = dir.file("tree.txt");
    CHECK_THROWS_WITH_AS(cmd_train(options),
                         "too few samples to train a time model",
                         InvalidArgument);

    // Four samples clear the first gate but not min_leaf.
    write_text(dir.file("lib.smi"), "CCO\nCCC\nCCN\nCCCC\n");
    CHECK_THROWS_WITH_AS(cmd_train(options),
                         "training needs at least min_leaf samples",
                         InvalidArgument);
  }

  SUBCASE("reruns produce byte-identical tree files") {
    const std::vector<std::string> family = ligand_family(120, 9);
    std::string text;
    for (std::size_t i = 0; i < family.size(); ++i) {
      text += family[i] + "\n";
      if (i == 5) text += "garbage(((\n";
    }
    write_text(dir.file("lib.smi"), text);

    TrainOptions options;
    options.pocket_path = pocket_path;
    options.input_path = dir.file("lib.smi");
    options.out_tree = dir.file("tree_a.txt");
    const TrainReport first = cmd_train(options);
    options.out_tree = dir.file("tree_b.txt");
    const TrainReport second = cmd_train(options);

    CHECK(first.samples == 120);
    CHECK(first.skipped == 1);
    CHECK(read_text(dir.file("tree_a.txt")) ==
          read_text(dir.file("tree_b.txt")));
    CHECK(first.r_squared == second.r_squared);
    CHECK(first.mean_error_ms == second.mean_error_ms);

    // The file must load back as a usable model.
    const TimeTree tree =
        TimeTree::deserialize(read_text(dir.file("tree_a.txt")));
    CHECK(tree.node_count() > 1);
  }

  SUBCASE("the synthetic family is learnable") {
    const std::vector<std::string> family = ligand_family(200, 31);
    std::string text;
    for (const std::string &smiles : family) text += smiles + "\n";
    write_text(dir.file("lib.smi"), text);

    TrainOptions options;
    options.pocket_path = pocket_path;
    options.input_path = dir.file("lib.smi");
    options.out_tree = dir.file("tree.txt");
    const TrainReport report = cmd_train(options);
    CHECK(report.samples == 200);
    CHECK(report.r_squared > 0.8);
  }

  SUBCASE("measured mode trains on wall-clock times") {
    const std::vector<std::string> family = ligand_family(40, 41);
    std::string text;
    for (const std::string &smiles : family) text += smiles + "\n";
    write_text(dir.file("lib.smi"), text);

    TrainOptions options;
    options.pocket_path = pocket_path;
    options.input_path = dir.file("lib.smi");
    options.out_tree = dir.file("tree.txt");
    options.reproducible_targets = false;
    options.scoring = quick_scoring();
    const TrainReport report = cmd_train(options);
    CHECK(report.samples == 40);
    // Wall times vary run to run, so only structural properties hold.
    const TimeTree tree =
        TimeTree::deserialize(read_text(dir.file("tree.txt")));
    CHECK(tree.predict(graph_features(prepare_ligand("CCCC"))) >= 0.0);
  }
}

namespace {

// A small prepared campaign shared by the dock tests: one binary file,
// one pocket, quick scoring.
struct CampaignFixture {
  explicit CampaignFixture(ScratchDir &dir, std::size_t n_ligands = 24)
      : pocket_path(small_pocket_file(dir)) {
    const std::vector<std::string> family = ligand_family(n_ligands, 57);
    std::string text;
    for (const std::string &smiles : family) text += smiles + "\n";
    write_text(dir.file("lib.smi"), text);

    PrepOptions prep;
    prep.input_path = dir.file("lib.smi");
    prep.out_dir = dir.file("prep");
    const PrepResult result = cmd_prep(prep);
    REQUIRE(result.files.size() == 1);
    REQUIRE(result.prepared == n_ligands);
    input_path = result.files[0].path;
    records = result.files[0].records;
  }

  DockOptions dock_options(const std::string &out_dir) const {
    DockOptions options;
    options.input_path = input_path;
    options.pocket_path = pocket_path;
    options.out_dir = out_dir;
    options.pipeline.scoring = quick_scoring();
    return options;
  }

  std::string pocket_path;
  std::string input_path;
  std::uint64_t records = 0;
};

std::multiset<std::string> merged_rows(const DockSummary &summary) {
  std::multiset<std::string> rows;
  for (const JobOutcome &job : summary.jobs)
    for (const std::string &line : score_lines(job.scores_path))
      rows.insert(line);
  return rows;
}

} // namespace

TEST_CASE("cmd_dock executes rank plans") {
  ScratchDir dir("dock");
  CampaignFixture fix(dir);

  SUBCASE("a single rank docks every record") {
    const DockSummary summary = cmd_dock(fix.dock_options(dir.file("camp")));
    REQUIRE(summary.jobs.size() == 1);
    CHECK(summary.all_done);
    CHECK(summary.jobs[0].done);
    CHECK(summary.jobs[0].error.empty());

    CHECK(score_lines(summary.jobs[0].scores_path).size() == fix.records);
    const RankStats stats =
        parse_rank_stats(read_text(summary.jobs[0].stats_path));
    CHECK(stats.ligands_docked == fix.records);
    CHECK(stats.rows_written == fix.records);
    CHECK(stats.records_skipped == 0);

    const std::string job_table = read_text(dir.file("camp/job.txt"));
    CHECK(job_table.find("rank=0") != std::string::npos);
    CHECK(job_table.find("ranks=1") != std::string::npos);
    CHECK(job_table.find("status=done") != std::string::npos);
    CHECK(job_table.find("pocket=test-site") != std::string::npos);
  }

  SUBCASE("rank tilings agree with the single-rank run") {
    DockOptions one = fix.dock_options(dir.file("camp1"));
    const DockSummary whole = cmd_dock(one);

    DockOptions four = fix.dock_options(dir.file("camp4"));
    four.n_ranks = 4;
    const DockSummary tiled = cmd_dock(four);
    REQUIRE(tiled.jobs.size() == 4);
    CHECK(tiled.all_done);

    CHECK(merged_rows(tiled) == merged_rows(whole));
    for (const JobOutcome &job : tiled.jobs) {
      const RankStats stats = parse_rank_stats(read_text(job.stats_path));
      CHECK(score_lines(job.scores_path).size() == stats.rows_written);
    }
  }

  SUBCASE("rank_index runs exactly one rank and leaves no job table") {
    DockOptions options = fix.dock_options(dir.file("campr"));
    options.n_ranks = 3;
    options.rank_index = 1;
    const DockSummary summary = cmd_dock(options);
    REQUIRE(summary.jobs.size() == 1);
    CHECK(summary.jobs[0].rank == 1);
    CHECK(summary.jobs[0].done);
    CHECK(std::filesystem::exists(dir.file("campr/rank1.scores")));
    CHECK(std::filesystem::exists(dir.file("campr/rank1.stats")));
    CHECK_FALSE(std::filesystem::exists(dir.file("campr/rank0.scores")));
    CHECK_FALSE(std::filesystem::exists(dir.file("campr/job.txt")));
  }

  SUBCASE("a failing rank leaves the other ranks' outputs intact") {
    DockOptions options = fix.dock_options(dir.file("campf"));
    options.n_ranks = 3;
    // Occupy rank 1's score path with a directory so its sink cannot open.
    std::filesystem::create_directories(dir.file("campf/rank1.scores"));
    const DockSummary summary = cmd_dock(options);
    REQUIRE(summary.jobs.size() == 3);
    CHECK_FALSE(summary.all_done);
    CHECK(summary.jobs[0].done);
    CHECK_FALSE(summary.jobs[1].done);
    CHECK_FALSE(summary.jobs[1].error.empty());
    CHECK(summary.jobs[2].done);

    const std::string job_table = read_text(dir.file("campf/job.txt"));
    CHECK(job_table.find("rank=1 ") != std::string::npos);
    CHECK(job_table.find("status=failed") != std::string::npos);

    // The failure is contained: merging aborts and names the rank.
    CHECK_THROWS_WITH_AS(cmd_merge(dir.file("campf")),
                         doctest::Contains("incomplete ranks 1"), IoError);

    // Replaying just the failed rank completes the campaign.
    std::filesystem::remove(dir.file("campf/rank1.scores"));
    DockOptions replay = options;
    replay.rank_index = 1;
    const DockSummary fixed = cmd_dock(replay);
    CHECK(fixed.all_done);
    const MergeResult merged = cmd_merge(dir.file("campf"));
    CHECK(merged.rows == fix.records);
  }

  SUBCASE("invalid requests are rejected up front") {
    DockOptions options = fix.dock_options(dir.file("campx"));
    options.n_ranks = 0;
    CHECK_THROWS_AS(cmd_dock(options), InvalidArgument);

    options = fix.dock_options(dir.file("campx"));
    options.n_ranks = 2;
    options.rank_index = 2;
    CHECK_THROWS_AS(cmd_dock(options), InvalidArgument);

    options = fix.dock_options(dir.file("campx"));
    options.input_path = fix.pocket_path; // text, not a binary library
    CHECK_THROWS_AS(cmd_dock(options), CodecError);

    options = fix.dock_options(dir.file("campx"));
    options.input_path = dir.file("absent.xslb");
    CHECK_THROWS_AS(cmd_dock(options), IoError);

    options = fix.dock_options(dir.file("campx"));
    options.pocket_path = dir.file("absent_pocket.txt");
    CHECK_THROWS_AS(cmd_dock(options), IoError);
  }
}

#ifdef VSCREEN_BIN
TEST_CASE("cmd_dock spawns one child process per rank") {
  ScratchDir dir("spawn");
  CampaignFixture fix(dir, 18);

  DockOptions sequential = fix.dock_options(dir.file("seq"));
  sequential.n_ranks = 3;
  const DockSummary direct = cmd_dock(sequential);

  DockOptions spawned = fix.dock_options(dir.file("spawn"));
  spawned.n_ranks = 3;
  spawned.spawn_processes = true;
  spawned.self_exe = VSCREEN_BIN;
  const DockSummary children = cmd_dock(spawned);
  REQUIRE(children.jobs.size() == 3);
  CHECK(children.all_done);

  CHECK(merged_rows(children) == merged_rows(direct));
  const std::string job_table = read_text(dir.file("spawn/job.txt"));
  CHECK(job_table.find("status=failed") == std::string::npos);
}
#endif

TEST_CASE("cmd_merge ranks rows and cmd_top slices them") {
  ScratchDir dir("merge");
  const std::string camp = dir.file("camp");
  std::filesystem::create_directories(camp);

  write_text(camp + "/job.txt",
             "rank=0 ranks=2 input=lib.xslb pocket=p slab=0:10 status=done\n"
             "rank=1 ranks=2 input=lib.xslb pocket=p slab=10:20 "
             "status=done\n");
  write_text(camp + "/rank0.scores", "CC\t2.0000\nNN\t1.0000\n");
  write_text(camp + "/rank1.scores", "CO\t2.0000\nOO\t3.0000\n");
  write_text(camp + "/rank0.stats", default_stats_text());
  write_text(camp + "/rank1.stats", default_stats_text());

  SUBCASE("descending score with lexicographic ties") {
    const MergeResult result = cmd_merge(camp);
    CHECK(result.rows == 4);
    const std::vector<std::string> rows = score_lines(result.ranking_path);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0] == "OO\t3.0000");
    CHECK(rows[1] == "CC\t2.0000"); // tie: CC before CO
    CHECK(rows[2] == "CO\t2.0000");
    CHECK(rows[3] == "NN\t1.0000");
  }

  SUBCASE("top slices the first rows") {
    const MergeResult result = cmd_merge(camp);
    CHECK(cmd_top(result.ranking_path, 2) ==
          std::vector<std::string>{"OO\t3.0000", "CC\t2.0000"});
    CHECK(cmd_top(result.ranking_path, 99).size() == 4); // whole ranking
    CHECK(cmd_top(result.ranking_path, 0).empty());
    CHECK_THROWS_AS(cmd_top(dir.file("absent.tsv"), 1), IoError);
  }

  SUBCASE("a missing or unparseable rank aborts the merge") {
    std::filesystem::remove(camp + "/rank1.stats");
    CHECK_THROWS_WITH_AS(cmd_merge(camp),
                         doctest::Contains("incomplete ranks 1"), IoError);

    write_text(camp + "/rank1.stats", "not stats at all\n");
    CHECK_THROWS_WITH_AS(cmd_merge(camp),
                         doctest::Contains("incomplete ranks 1"), IoError);

    std::filesystem::remove(camp + "/rank0.scores");
    write_text(camp + "/rank1.stats", default_stats_text());
    CHECK_THROWS_WITH_AS(cmd_merge(camp),
                         doctest::Contains("incomplete ranks 0"), IoError);
  }

  SUBCASE("merging needs a job table") {
    ScratchDir empty("merge_empty");
    CHECK_THROWS_WITH_AS(cmd_merge(empty.path.string()),
                         doctest::Contains("run dock first"), IoError);
  }

  SUBCASE("malformed score rows are rejected") {
    write_text(camp + "/rank0.scores", "CC no tab here\n");
    CHECK_THROWS_AS(cmd_merge(camp), ParseError);
    write_text(camp + "/rank0.scores", "CC\tnot_a_number\n");
    CHECK_THROWS_AS(cmd_merge(camp), ParseError);
  }
}

TEST_CASE("cmd_stats aggregates the per-rank reports") {
  ScratchDir dir("stats");
  const std::string camp = dir.file("camp");
  std::filesystem::create_directories(camp);
  write_text(camp + "/job.txt",
             "rank=0 ranks=2 input=l pocket=p slab=0:10 status=done\n"
             "rank=1 ranks=2 input=l pocket=p slab=10:20 status=done\n");

  RankStats a;
  a.ligands_docked = 3;
  a.rows_written = 3;
  a.workers = 1;
  a.wall_seconds = 2.0;
  a.docker_busy_seconds = 1.5;
  a.item_queue_high_water = 4;
  RankStats b;
  b.ligands_docked = 5;
  b.rows_written = 5;
  b.workers = 2;
  b.wall_seconds = 3.5;
  b.docker_busy_seconds = 2.25;
  b.item_queue_high_water = 2;
  write_text(camp + "/rank0.stats", format_rank_stats(a));
  write_text(camp + "/rank1.stats", format_rank_stats(b));

  SUBCASE("sums, maxima and headers") {
    const std::string text = cmd_stats(camp);
    CHECK(text.find("ranks=2\n") == 0);
    CHECK(text.find("ranks_reported=2\n") != std::string::npos);

    // Everything after the two header lines is a stats report again.
    const std::size_t body = text.find("ranks_reported=2\n") +
                             std::string("ranks_reported=2\n").size();
    const RankStats total = parse_rank_stats(text.substr(body));
    CHECK(total.ligands_docked == 8);
    CHECK(total.rows_written == 8);
    CHECK(total.workers == 3);
    CHECK(total.wall_seconds == doctest::Approx(3.5));        // max
    CHECK(total.docker_busy_seconds == doctest::Approx(3.75)); // sum
    CHECK(total.item_queue_high_water == 4);                   // max
  }

  SUBCASE("missing ranks are reported, not fatal") {
    std::filesystem::remove(camp + "/rank1.stats");
    const std::string text = cmd_stats(camp);
    CHECK(text.find("ranks=2\n") == 0);
    CHECK(text.find("ranks_reported=1\n") != std::string::npos);
    const std::size_t body = text.find("ranks_reported=1\n") +
                             std::string("ranks_reported=1\n").size();
    CHECK(parse_rank_stats(text.substr(body)).ligands_docked == 3);
  }
}

TEST_CASE("cmd_regen reproduces campaign scores on demand") {
  ScratchDir dir("regen");
  const std::string pocket_path = small_pocket_file(dir);

  RegenOptions options;
  options.smiles = "CNCC";
  options.pocket_path = pocket_path;
  options.scoring = quick_scoring();

  SUBCASE("regen is deterministic") {
    const RegenReport first = cmd_regen(options);
    const RegenReport second = cmd_regen(options);
    CHECK(first.row == second.row);
    CHECK(first.mol2 == second.mol2);
    CHECK(first.mol2_path.empty()); // no file requested
    CHECK_FALSE(first.mol2.empty());
  }

  SUBCASE("the score matches the campaign ranking row") {
    write_text(dir.file("lib.smi"), "CCO\nCNCC\nCCCN\n");
    PrepOptions prep;
    prep.input_path = dir.file("lib.smi");
    prep.out_dir = dir.file("prep");
    const PrepResult prepped = cmd_prep(prep);
    REQUIRE(prepped.files.size() == 1);

    DockOptions dock;
    dock.input_path = prepped.files[0].path;
    dock.pocket_path = pocket_path;
    dock.out_dir = dir.file("camp");
    dock.pipeline.scoring = quick_scoring();
    REQUIRE(cmd_dock(dock).all_done);
    const MergeResult merged = cmd_merge(dir.file("camp"));

    std::string campaign_row;
    for (const std::string &line : score_lines(merged.ranking_path))
      if (line.rfind("CNCC\t", 0) == 0) campaign_row = line;
    REQUIRE_FALSE(campaign_row.empty());

    const RegenReport report = cmd_regen(options);
    CHECK(report.row == campaign_row + "\n");
  }

  SUBCASE("the emitted pose rescored from its own coordinates agrees") {
    const RegenReport report = cmd_regen(options);
    const Ligand posed = read_mol2(report.mol2);
    const Pocket pocket = read_pocket_file(pocket_path);
    const double rescored =
        chem_score(pocket, posed, conformation_of(posed));
    // Mol2 text carries four decimals, so allow for that quantization.
    CHECK(rescored == doctest::Approx(report.score).epsilon(1e-3));
  }

  SUBCASE("the pose file is written when a path is given") {
    options.out_mol2 = dir.file("pose.mol2");
    const RegenReport report = cmd_regen(options);
    CHECK(report.mol2_path == options.out_mol2);
    CHECK(read_text(options.out_mol2) == report.mol2);
  }

  SUBCASE("bad input propagates") {
    options.smiles = "!!!";
    CHECK_THROWS_AS(cmd_regen(options), ParseError);
    options.smiles = "CC";
    options.pocket_path = dir.file("absent.txt");
    CHECK_THROWS_AS(cmd_regen(options), IoError);
  }
}
