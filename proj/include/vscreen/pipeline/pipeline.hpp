//
// Project vscreen - Copyright 2026 the vscreen authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <atomic>
#include <cstdint>
#include <string>
#include <vector>

#include "vscreen/dockengine/pose.hpp"
#include "vscreen/molmodel/ligand.hpp"
#include "vscreen/molmodel/pocket.hpp"
#include "vscreen/pipeline/bounded_queue.hpp"
#include "vscreen/pipeline/io.hpp"

namespace vscreen {

/// A raw slice of the input file, produced by the reader. Never empty.
struct Chunk {
  std::vector<std::uint8_t> bytes;
  std::uint64_t file_offset = 0;
};

/// One decoded ligand, tagged with its per-rank arrival index.
struct WorkItem {
  Ligand ligand;
  std::uint64_t sequence_id = 0;
};

struct OutputRow {
  std::string smiles;
  double score = 0.0;
};

/// The byte range a rank owns. A rank processes exactly the records whose
/// start offset falls in [slab_start, slab_stop); the final owned record is
/// allowed to extend past slab_stop.
struct RankPlan {
  int rank = 0;
  int n_ranks = 1;
  std::uint64_t slab_start = 0;
  std::uint64_t slab_stop = 0;
  std::string input_path;
  std::string output_path;
};

enum class WorkerKind { Fast, Slow };

/// A homogeneous group of docking workers. Slow workers stretch each dock
/// to synthetic_slowdown times its measured duration by sleeping, which
/// stands in for a slower algorithm implementation on the same queue.
struct WorkerClass {
  WorkerKind kind = WorkerKind::Fast;
  int count = 1;
  double synthetic_slowdown = 1.0;
};

struct PipelineConfig {
  ScoringConfig scoring;
  std::vector<WorkerClass> workers = {WorkerClass{}};
  std::size_t chunk_bytes = 1 << 20;
  std::size_t chunk_queue_capacity = 8;
  std::size_t item_queue_capacity = 64;
  std::size_t row_queue_capacity = 64;
  std::size_t writer_buffer_bytes = std::size_t(4) << 20;
};

struct ReaderStats {
  std::uint64_t chunks = 0;
  std::uint64_t bytes_read = 0;
  double busy_seconds = 0.0;
};

struct SplitterStats {
  std::uint64_t items = 0;
  std::uint64_t records_skipped = 0;
  double busy_seconds = 0.0;
};

struct DockerStats {
  std::uint64_t rows = 0;
  std::uint64_t dock_errors = 0;
  double busy_seconds = 0.0;
};

struct WriterStats {
  std::uint64_t rows = 0;
  std::uint64_t write_calls = 0;
  std::uint64_t bytes_written = 0;
  double busy_seconds = 0.0;
};

struct RankStats {
  std::uint64_t ligands_docked = 0;
  std::uint64_t records_skipped = 0;
  std::uint64_t dock_errors = 0;
  std::uint64_t rows_written = 0;
  std::uint64_t chunks_read = 0;
  std::uint64_t bytes_read = 0;
  std::uint64_t write_calls = 0;
  std::uint64_t bytes_written = 0;
  int workers = 0;
  double wall_seconds = 0.0;
  double reader_busy_seconds = 0.0;
  double splitter_busy_seconds = 0.0;
  double docker_busy_seconds = 0.0;
  double writer_busy_seconds = 0.0;
  std::size_t chunk_queue_high_water = 0;
  std::size_t item_queue_high_water = 0;
  std::size_t row_queue_high_water = 0;
};

/// Even byte slabs: rank i owns [floor(i*S/R), floor((i+1)*S/R)). The slabs
/// tile [0, S) exactly. Paths are left empty. Throws on R < 1.
std::vector<RankPlan> plan_slabs(std::uint64_t file_size, int n_ranks);

/// `<SMILES>\t<score with exactly 4 fractional digits>\n`,
/// locale-independent.
std::string format_row(const OutputRow &row);

/// key=value lines, one per RankStats field; parse_rank_stats inverts it.
std::string format_rank_stats(const RankStats &stats);
RankStats parse_rank_stats(std::string_view text);

/// Reads the slab sequentially in chunk_bytes pieces, pushing into `out`.
/// Keeps reading past slab_stop (the final owned record may end there)
/// until `stop` is set or the data ends; an empty slab produces nothing.
/// Closes `out` on exit.
ReaderStats stage_reader(ByteSource &source, const RankPlan &plan,
                         std::size_t chunk_bytes, BoundedQueue<Chunk> &out,
                         const std::atomic<bool> &stop);

/// Reassembles the chunk stream, frames records (records may span chunks),
/// decodes the ones whose start offset the plan owns, and pushes them with
/// ascending sequence ids. Undecodable records are skipped and counted.
/// Sets `stop_reader` and closes + drains `in` once the slab is done;
/// closes `out` on exit. Throws CodecError when the stream cannot be
/// framed at all (sync markers present but no valid chain).
SplitterStats stage_splitter(BoundedQueue<Chunk> &in, const RankPlan &plan,
                             BoundedQueue<WorkItem> &out,
                             std::atomic<bool> &stop_reader);

/// One docking worker: pulls items until `in` drains, docks each against
/// the pocket, and pushes a row per success. Failures are counted and
/// skipped. synthetic_slowdown > 1 stretches each dock by sleeping.
/// Does not close `out` (several workers share it).
DockerStats docker_worker(BoundedQueue<WorkItem> &in,
                          BoundedQueue<OutputRow> &out, const Pocket &pocket,
                          const ScoringConfig &scoring,
                          double synthetic_slowdown);

/// Formats rows into an accumulation buffer and hands the sink one write
/// per buffer_bytes of output (plus a final partial write), so physical
/// writes are coalesced. Calls sink.finish() at end of stream.
WriterStats stage_writer(BoundedQueue<OutputRow> &in, Sink &sink,
                         std::size_t buffer_bytes);

/// Runs the four-stage pipeline for one rank: reader, splitter, a worker
/// per WorkerClass count, and writer, all concurrent over bounded queues.
/// Returns aggregate stats; rethrows the first stage failure after shutting
/// the pipeline down.
RankStats run_rank(const RankPlan &plan, ByteSource &source, Sink &sink,
                   const Pocket &pocket, const PipelineConfig &config);

/// File-path convenience: opens plan.input_path and plan.output_path.
RankStats run_rank(const RankPlan &plan, const Pocket &pocket,
                   const PipelineConfig &config);

/// Concatenates the rank outputs in order into merged_path.
/// Throws IoError when an input is missing.
void merge_outputs(const std::vector<std::string> &paths,
                   const std::string &merged_path);

}  // namespace vscreen
