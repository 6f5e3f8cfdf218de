//
// Project vscreen - Copyright 2026 the vscreen authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vscreen/error.hpp"
#include "vscreen/workflow/workflow.hpp"

namespace {

// Everything a subcommand can consume lives in one pool so that a config
// file can seed any of it before the flags are parsed. Flags win because
// CLI11 only writes into a field when the flag is actually present.
struct CliValues {
  std::string input;
  std::string pocket;
  std::string out;
  std::string tree;
  std::string smiles;
  int ranks = 1;
  int rank_index = -1;
  int fast_workers = 1;
  int slow_workers = 0;
  double slowdown = 1.0;
  std::uint64_t file_size = 1 << 20;
  std::uint64_t k = 10;
  std::uint64_t seed = 20260819;
  std::size_t buffer = std::size_t(4) << 20;
  std::size_t chunk = 1 << 20;
  std::size_t queue = 64;
  int restarts = 256;
  int rescored = 30;
  bool spawn_processes = false;
  bool measure_times = false;
};

using ConfigMap = std::map<std::string, std::string>;

std::string trimmed(std::string_view text) {
  const char *ws = " \t\r";
  const std::size_t first = text.find_first_not_of(ws);
  if (first == std::string_view::npos) return {};
  const std::size_t last = text.find_last_not_of(ws);
  return std::string(text.substr(first, last - first + 1));
}

ConfigMap read_config(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw vscreen::IoError("cannot open config file '" + path + "'");
  ConfigMap values;
  std::string line;
  std::uint64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = trimmed(line);
    if (text.empty() || text[0] == '#') continue;
    const std::size_t eq = text.find('=');
    if (eq == std::string::npos)
      throw vscreen::InvalidArgument("config line " + std::to_string(line_no) +
                                     " is not key=value");
    values[trimmed(text.substr(0, eq))] = trimmed(text.substr(eq + 1));
  }
  return values;
}

void seed_value(const ConfigMap &config, const char *key, std::string &out) {
  if (auto it = config.find(key); it != config.end()) out = it->second;
}

void seed_value(const ConfigMap &config, const char *key, bool &out) {
  auto it = config.find(key);
  if (it == config.end()) return;
  const std::string &text = it->second;
  if (text == "true" || text == "1")
    out = true;
  else if (text == "false" || text == "0")
    out = false;
  else
    throw vscreen::InvalidArgument("config key '" + std::string(key) +
                                   "' wants true or false");
}

template <class Number>
void seed_value(const ConfigMap &config, const char *key, Number &out) {
  auto it = config.find(key);
  if (it == config.end()) return;
  const std::string &text = it->second;
  Number parsed{};
  const auto [end, ec] =
      std::from_chars(text.data(), text.data() + text.size(), parsed);
  if (ec != std::errc() || end != text.data() + text.size())
    throw vscreen::InvalidArgument("config key '" + std::string(key) +
                                   "' has a bad number '" + text + "'");
  out = parsed;
}

void apply_config(const ConfigMap &config, CliValues &values) {
  static const char *known[] = {
      "input",     "pocket",    "out",          "tree",
      "smiles",    "ranks",     "rank-index",   "fast-workers",
      "slow-workers", "slowdown", "file-size",  "k",
      "seed",      "buffer",    "chunk",        "queue",
      "restarts",  "rescored",  "spawn-processes", "measure-times",
  };
  for (const auto &[key, value] : config) {
    bool ok = false;
    for (const char *name : known) ok = ok || key == name;
    if (!ok)
      throw vscreen::InvalidArgument("unknown config key '" + key + "'");
  }
  seed_value(config, "input", values.input);
  seed_value(config, "pocket", values.pocket);
  seed_value(config, "out", values.out);
  seed_value(config, "tree", values.tree);
  seed_value(config, "smiles", values.smiles);
  seed_value(config, "ranks", values.ranks);
  seed_value(config, "rank-index", values.rank_index);
  seed_value(config, "fast-workers", values.fast_workers);
  seed_value(config, "slow-workers", values.slow_workers);
  seed_value(config, "slowdown", values.slowdown);
  seed_value(config, "file-size", values.file_size);
  seed_value(config, "k", values.k);
  seed_value(config, "seed", values.seed);
  seed_value(config, "buffer", values.buffer);
  seed_value(config, "chunk", values.chunk);
  seed_value(config, "queue", values.queue);
  seed_value(config, "restarts", values.restarts);
  seed_value(config, "rescored", values.rescored);
  seed_value(config, "spawn-processes", values.spawn_processes);
  seed_value(config, "measure-times", values.measure_times);
}

// The config file is applied before CLI11 ever runs, so it has to be found
// by scanning the raw arguments. Both "--config PATH" and "--config=PATH"
// are accepted anywhere on the line.
std::string find_config_path(int argc, char **argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string_view arg = argv[i];
    if (arg == "--config") {
      if (i + 1 >= argc)
        throw vscreen::InvalidArgument("--config needs a file path");
      return argv[i + 1];
    }
    if (arg.rfind("--config=", 0) == 0)
      return std::string(arg.substr(std::string_view("--config=").size()));
  }
  return {};
}

vscreen::ScoringConfig scoring_from(const CliValues &values) {
  vscreen::ScoringConfig scoring;
  scoring.restarts = values.restarts;
  scoring.rescored = values.rescored;
  return scoring;
}

vscreen::PipelineConfig pipeline_from(const CliValues &values) {
  vscreen::PipelineConfig config;
  config.scoring = scoring_from(values);
  config.workers.clear();
  if (values.fast_workers > 0)
    config.workers.push_back(
        {vscreen::WorkerKind::Fast, values.fast_workers, 1.0});
  if (values.slow_workers > 0)
    config.workers.push_back(
        {vscreen::WorkerKind::Slow, values.slow_workers, values.slowdown});
  if (config.workers.empty())
    throw vscreen::InvalidArgument("need at least one docking worker");
  config.chunk_bytes = values.chunk;
  config.item_queue_capacity = values.queue;
  config.row_queue_capacity = values.queue;
  config.writer_buffer_bytes = values.buffer;
  return config;
}

int run_prep(const CliValues &values) {
  vscreen::PrepOptions options;
  options.input_path = values.input;
  options.out_dir = values.out;
  options.target_file_size = values.file_size;
  options.tree_path = values.tree;
  const vscreen::PrepResult result = vscreen::cmd_prep(options);
  std::cout << vscreen::format_manifest(result.files);
  std::cout << "prepared=" << result.prepared << " skipped=" << result.skipped
            << " manifest=" << result.manifest_path << "\n";
  for (const std::string &entry : result.skip_log)
    std::cerr << "skipped " << entry << "\n";
  return 0;
}

int run_train(const CliValues &values) {
  vscreen::TrainOptions options;
  options.pocket_path = values.pocket;
  options.input_path = values.input;
  options.out_tree = values.out;
  options.scoring = scoring_from(values);
  options.reproducible_targets = !values.measure_times;
  options.seed = values.seed;
  const vscreen::TrainReport report = vscreen::cmd_train(options);
  std::cout << "samples=" << report.samples << " skipped=" << report.skipped
            << "\n";
  char line[128];
  std::snprintf(line, sizeof line,
                "holdout_r2=%.4f holdout_mean_error_ms=%.4f\n",
                report.r_squared, report.mean_error_ms);
  std::cout << line << "tree=" << report.tree_path << "\n";
  return 0;
}

int run_dock(const CliValues &values) {
  vscreen::DockOptions options;
  options.input_path = values.input;
  options.pocket_path = values.pocket;
  options.out_dir = values.out;
  options.n_ranks = values.ranks;
  options.rank_index = values.rank_index;
  options.spawn_processes = values.spawn_processes;
  // self_exe keeps its /proc/self/exe default: argv[0] may be a bare name
  // resolved through PATH, which execv cannot use.
  options.pipeline = pipeline_from(values);
  const vscreen::DockSummary summary = vscreen::cmd_dock(options);
  for (const vscreen::JobOutcome &job : summary.jobs) {
    std::cout << "rank=" << job.rank
              << " status=" << (job.done ? "done" : "failed")
              << " scores=" << job.scores_path << " stats=" << job.stats_path;
    if (!job.error.empty()) std::cout << " error=" << job.error;
    std::cout << "\n";
  }
  return summary.all_done ? 0 : 3;
}

int run_merge(const CliValues &values) {
  const vscreen::MergeResult result = vscreen::cmd_merge(values.out);
  std::cout << "ranking=" << result.ranking_path << " rows=" << result.rows
            << "\n";
  return 0;
}

int run_top(const CliValues &values) {
  for (const std::string &row : vscreen::cmd_top(values.input, values.k))
    std::cout << row << "\n";
  return 0;
}

int run_regen(const CliValues &values) {
  vscreen::RegenOptions options;
  options.smiles = values.smiles;
  options.pocket_path = values.pocket;
  options.out_mol2 = values.out;
  options.scoring = scoring_from(values);
  const vscreen::RegenReport report = vscreen::cmd_regen(options);
  std::cout << report.row;
  if (!report.mol2_path.empty())
    std::cerr << "wrote " << report.mol2_path << "\n";
  return 0;
}

int run_stats(const CliValues &values) {
  std::cout << vscreen::cmd_stats(values.out);
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CliValues values;
  std::string config_path;

  try {
    config_path = find_config_path(argc, argv);
    if (!config_path.empty()) apply_config(read_config(config_path), values);
  } catch (const vscreen::Error &error) {
    std::cerr << "error: " << error.what() << "\n";
    return 2;
  }

  CLI::App app{"Desk-scale virtual screening: prepare ligand libraries, "
               "dock them against pocket grids, and rank the results."};
  app.require_subcommand(1);
  // The config file was applied above; the option here only documents the
  // flag and keeps the parser from rejecting it.
  app.add_option("--config", config_path,
                 "Flat key=value file seeding any flag; flags win")
      ->expected(1);

  CLI::App *prep = app.add_subcommand(
      "prep", "Encode a SMILES library into binary ligand files");
  prep->add_option("--input", values.input, "SMILES library, one per line")
      ->required();
  prep->add_option("--out", values.out, "Output directory")->required();
  prep->add_option("--file-size", values.file_size,
                   "Cut files at this many bytes");
  prep->add_option("--tree", values.tree,
                   "Time model; routes records into complexity buckets");

  CLI::App *train = app.add_subcommand(
      "train", "Fit the execution-time model on a sample library");
  train->add_option("--input", values.input, "Sample SMILES library")
      ->required();
  train->add_option("--pocket", values.pocket, "Pocket grid file")
      ->required();
  train->add_option("--out", values.out, "Tree file to write")->required();
  train->add_option("--seed", values.seed, "Noise seed for the cost model");
  train->add_flag("--measure-times", values.measure_times,
                  "Train on wall-clock dock times instead of the "
                  "reproducible cost model");
  train->add_option("--restarts", values.restarts,
                    "Search restarts per ligand");
  train->add_option("--rescored", values.rescored,
                    "Poses rescored chemically per ligand");

  CLI::App *dock = app.add_subcommand(
      "dock", "Dock one prepared binary file against one pocket");
  dock->add_option("--input", values.input, "Prepared binary ligand file")
      ->required();
  dock->add_option("--pocket", values.pocket, "Pocket grid file")->required();
  dock->add_option("--out", values.out, "Campaign output directory")
      ->required();
  dock->add_option("--ranks", values.ranks, "Slab count");
  dock->add_option("--rank-index", values.rank_index,
                   "Run exactly this rank (replay or child process)");
  dock->add_option("--fast-workers", values.fast_workers,
                   "Full-speed docking workers per rank");
  dock->add_option("--slow-workers", values.slow_workers,
                   "Slowed docking workers per rank");
  dock->add_option("--slowdown", values.slowdown,
                   "Stretch factor for slow workers");
  dock->add_option("--chunk", values.chunk, "Reader chunk bytes");
  dock->add_option("--buffer", values.buffer, "Writer buffer bytes");
  dock->add_option("--queue", values.queue,
                   "Item and row queue capacities");
  dock->add_option("--restarts", values.restarts,
                   "Search restarts per ligand");
  dock->add_option("--rescored", values.rescored,
                   "Poses rescored chemically per ligand");
  dock->add_flag("--spawn-processes", values.spawn_processes,
                 "Run each rank as a child process");

  CLI::App *merge = app.add_subcommand(
      "merge", "Merge rank outputs into a sorted ranking");
  merge->add_option("--out", values.out, "Campaign output directory")
      ->required();

  CLI::App *top =
      app.add_subcommand("top", "Print the first k rows of a ranking");
  top->add_option("--input", values.input, "Ranking file")->required();
  top->add_option("-k,--k", values.k, "Row count");

  CLI::App *regen = app.add_subcommand(
      "regen", "Re-create one ligand's best pose as Mol2");
  regen->add_option("--smiles", values.smiles, "Ligand SMILES")->required();
  regen->add_option("--pocket", values.pocket, "Pocket grid file")
      ->required();
  regen->add_option("--out", values.out, "Mol2 file to write (optional)");
  regen->add_option("--restarts", values.restarts,
                    "Search restarts per ligand");
  regen->add_option("--rescored", values.rescored,
                    "Poses rescored chemically per ligand");

  CLI::App *stats = app.add_subcommand(
      "stats", "Aggregate per-rank stats for a campaign");
  stats->add_option("--out", values.out, "Campaign output directory")
      ->required();

  // Lets "--config" be written after the subcommand name as well; the
  // unmatched option falls through to the parent app, which owns it.
  for (CLI::App *sub : app.get_subcommands([](const CLI::App *) {
         return true;
       }))
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &error) {
    const int code = app.exit(error);
    return code == 0 ? 0 : 1;
  }

  try {
    if (prep->parsed()) return run_prep(values);
    if (train->parsed()) return run_train(values);
    if (dock->parsed()) return run_dock(values);
    if (merge->parsed()) return run_merge(values);
    if (top->parsed()) return run_top(values);
    if (regen->parsed()) return run_regen(values);
    if (stats->parsed()) return run_stats(values);
  } catch (const vscreen::Error &error) {
    std::cerr << "error: " << error.what() << "\n";
    return 2;
  } catch (const std::exception &error) {
    std::cerr << "unexpected error: " << error.what() << "\n";
    return 3;
  }
  return 0;
}
