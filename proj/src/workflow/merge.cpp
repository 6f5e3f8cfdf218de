//
// Project vscreen - Copyright 2026 the vscreen authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "vscreen/error.hpp"
#include "vscreen/workflow/workflow.hpp"

namespace vscreen {

namespace {

std::string rank_file(const std::string &out_dir, int rank,
                      const char *suffix) {
  return (std::filesystem::path(out_dir) /
          ("rank" + std::to_string(rank) + suffix))
      .string();
}

std::string read_file(const std::string &path, const char *label) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot open " + std::string(label) + " '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return std::move(text).str();
}

// How many ranks the campaign was planned with, from the job table the
// full dock run leaves behind.
int planned_ranks(const std::string &out_dir) {
  const std::string path =
      (std::filesystem::path(out_dir) / "job.txt").string();
  if (!std::filesystem::exists(path))
    throw IoError("no job table in '" + out_dir + "'; run dock first");
  const std::string text = read_file(path, "job table");
  const std::string key = "ranks=";
  const std::size_t at = text.find(key);
  if (at == std::string::npos)
    throw IoError("job table '" + path + "' has no rank count");
  int ranks = 0;
  const char *first = text.data() + at + key.size();
  const auto [end, ec] = std::from_chars(first, text.data() + text.size(),
                                         ranks);
  if (ec != std::errc() || ranks < 1)
    throw IoError("job table '" + path + "' has a bad rank count");
  return ranks;
}

struct ScoredLine {
  std::string_view text;  // original bytes, no trailing newline
  std::string_view smiles;
  double score = 0.0;
};

ScoredLine parse_line(std::string_view line, const std::string &path) {
  const std::size_t tab = line.find('\t');
  if (tab == std::string_view::npos)
    throw ParseError("score row without a tab in '" + path + "'");
  ScoredLine row;
  row.text = line;
  row.smiles = line.substr(0, tab);
  const std::string_view score_text = line.substr(tab + 1);
  const auto [end, ec] =
      std::from_chars(score_text.data(),
                      score_text.data() + score_text.size(), row.score);
  if (ec != std::errc() || end != score_text.data() + score_text.size())
    throw ParseError("bad score '" + std::string(score_text) + "' in '" +
                     path + "'");
  return row;
}

} // namespace

MergeResult cmd_merge(const std::string &out_dir) {
  const int ranks = planned_ranks(out_dir);

  // A rank is complete when its score file exists and its stats file
  // parses; the stats file is written last, so a killed rank never has one.
  std::vector<int> incomplete;
  std::vector<std::string> score_paths;
  for (int rank = 0; rank < ranks; ++rank) {
    const std::string scores = rank_file(out_dir, rank, ".scores");
    const std::string stats = rank_file(out_dir, rank, ".stats");
    bool ok = std::filesystem::exists(scores) &&
              std::filesystem::exists(stats);
    if (ok) {
      try {
        parse_rank_stats(read_file(stats, "stats file"));
      } catch (const Error &) {
        ok = false;
      }
    }
    if (ok)
      score_paths.push_back(scores);
    else
      incomplete.push_back(rank);
  }
  if (!incomplete.empty()) {
    std::string list;
    for (int rank : incomplete) {
      if (!list.empty()) list += ", ";
      list += std::to_string(rank);
    }
    throw IoError("cannot merge '" + out_dir +
                  "': incomplete ranks " + list);
  }

  std::vector<std::string> texts;
  texts.reserve(score_paths.size());
  std::vector<ScoredLine> rows;
  for (const std::string &path : score_paths) {
    texts.push_back(read_file(path, "score file"));
    const std::string_view text = texts.back();
    std::size_t begin = 0;
    while (begin < text.size()) {
      std::size_t end = text.find('\n', begin);
      if (end == std::string_view::npos) end = text.size();
      if (end > begin)
        rows.push_back(parse_line(text.substr(begin, end - begin), path));
      begin = end + 1;
    }
  }

  std::stable_sort(rows.begin(), rows.end(),
                   [](const ScoredLine &a, const ScoredLine &b) {
                     if (a.score != b.score) return a.score > b.score;
                     return a.smiles < b.smiles;
                   });

  MergeResult result;
  result.ranking_path =
      (std::filesystem::path(out_dir) / "ranking.tsv").string();
  std::ofstream out(result.ranking_path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw IoError("cannot write ranking '" + result.ranking_path + "'");
  for (const ScoredLine &row : rows) {
    out << row.text << "\n";
    ++result.rows;
  }
  out.flush();
  if (!out)
    throw IoError("write failed on '" + result.ranking_path + "'");
  return result;
}

std::vector<std::string> cmd_top(const std::string &ranking_path,
                                 std::uint64_t k) {
  std::ifstream in(ranking_path, std::ios::binary);
  if (!in) throw IoError("cannot open ranking '" + ranking_path + "'");
  std::vector<std::string> rows;
  std::string line;
  while (rows.size() < k && std::getline(in, line)) rows.push_back(line);
  return rows;
}

std::string cmd_stats(const std::string &out_dir) {
  const int ranks = planned_ranks(out_dir);

  RankStats total;
  int reported = 0;
  for (int rank = 0; rank < ranks; ++rank) {
    const std::string path = rank_file(out_dir, rank, ".stats");
    if (!std::filesystem::exists(path)) continue;
    const RankStats stats = parse_rank_stats(read_file(path, "stats file"));
    ++reported;
    total.ligands_docked += stats.ligands_docked;
    total.records_skipped += stats.records_skipped;
    total.dock_errors += stats.dock_errors;
    total.rows_written += stats.rows_written;
    total.chunks_read += stats.chunks_read;
    total.bytes_read += stats.bytes_read;
    total.write_calls += stats.write_calls;
    total.bytes_written += stats.bytes_written;
    total.workers += stats.workers;
    // Ranks run side by side, so the campaign wall time is the slowest
    // rank, while busy time adds up across ranks.
    total.wall_seconds = std::max(total.wall_seconds, stats.wall_seconds);
    total.reader_busy_seconds += stats.reader_busy_seconds;
    total.splitter_busy_seconds += stats.splitter_busy_seconds;
    total.docker_busy_seconds += stats.docker_busy_seconds;
    total.writer_busy_seconds += stats.writer_busy_seconds;
    total.chunk_queue_high_water =
        std::max(total.chunk_queue_high_water, stats.chunk_queue_high_water);
    total.item_queue_high_water =
        std::max(total.item_queue_high_water, stats.item_queue_high_water);
    total.row_queue_high_water =
        std::max(total.row_queue_high_water, stats.row_queue_high_water);
  }

  std::string text = "ranks=" + std::to_string(ranks) + "\n" +
                     "ranks_reported=" + std::to_string(reported) + "\n";
  text += format_rank_stats(total);
  return text;
}

} // namespace vscreen
