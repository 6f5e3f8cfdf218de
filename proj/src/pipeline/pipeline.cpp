//
// Project vscreen - Copyright 2026 the vscreen authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "vscreen/pipeline/pipeline.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <span>
#include <thread>

#include "vscreen/dockengine/search.hpp"
#include "vscreen/error.hpp"
#include "vscreen/molmodel/binary_codec.hpp"

namespace vscreen {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

std::vector<RankPlan> plan_slabs(std::uint64_t file_size, int n_ranks) {
  if (n_ranks < 1) throw InvalidArgument("rank count must be at least 1");
  std::vector<RankPlan> plans(static_cast<std::size_t>(n_ranks));
  for (int i = 0; i < n_ranks; ++i) {
    RankPlan &plan = plans[static_cast<std::size_t>(i)];
    plan.rank = i;
    plan.n_ranks = n_ranks;
    plan.slab_start = file_size * static_cast<std::uint64_t>(i) /
                      static_cast<std::uint64_t>(n_ranks);
    plan.slab_stop = file_size * static_cast<std::uint64_t>(i + 1) /
                     static_cast<std::uint64_t>(n_ranks);
  }
  return plans;
}

std::string format_row(const OutputRow &row) {
  if (!std::isfinite(row.score))
    throw InvalidArgument("output row score must be finite");
  char buf[64];
  const auto [end, ec] =
      std::to_chars(buf, buf + sizeof buf, row.score, std::chars_format::fixed, 4);
  if (ec != std::errc())
    throw InvalidArgument("output row score does not format");
  std::string line;
  line.reserve(row.smiles.size() + 8 + static_cast<std::size_t>(end - buf));
  line += row.smiles;
  line += '\t';
  line.append(buf, end);
  line += '\n';
  return line;
}

ReaderStats stage_reader(ByteSource &source, const RankPlan &plan,
                         std::size_t chunk_bytes, BoundedQueue<Chunk> &out,
                         const std::atomic<bool> &stop) {
  ReaderStats stats;
  if (chunk_bytes == 0) {
    out.close();
    throw InvalidArgument("chunk size must be positive");
  }

  // An empty slab owns no record starts and therefore needs no bytes.
  std::uint64_t offset = plan.slab_start;
  const std::uint64_t end = source.size();
  if (plan.slab_start >= plan.slab_stop) offset = end;

  while (offset < end && !stop.load(std::memory_order_relaxed)) {
    Chunk chunk;
    chunk.file_offset = offset;
    chunk.bytes.resize(std::min<std::uint64_t>(chunk_bytes, end - offset));

    const auto start_time = Clock::now();
    const std::size_t n = source.read_at(offset, chunk.bytes);
    stats.busy_seconds += seconds_since(start_time);
    if (n == 0) break;
    chunk.bytes.resize(n);

    offset += n;
    stats.bytes_read += n;
    ++stats.chunks;
    if (!out.push(std::move(chunk))) break;  // splitter finished early
  }
  out.close();
  return stats;
}

namespace {

/// Incremental record framer shared by the splitter loop. Holds the bytes
/// not yet consumed, with `base` tracking the file offset of buffer[0].
struct SplitBuffer {
  std::vector<std::uint8_t> buffer;
  std::uint64_t base = 0;
  std::size_t scan_from = 0;

  void append(const Chunk &chunk) {
    if (chunk.file_offset != base + buffer.size())
      throw InvalidArgument("reader chunks arrived out of order");
    buffer.insert(buffer.end(), chunk.bytes.begin(), chunk.bytes.end());
  }

  void drop_consumed() {
    if (scan_from == 0) return;
    buffer.erase(buffer.begin(),
                 buffer.begin() + static_cast<std::ptrdiff_t>(scan_from));
    base += scan_from;
    scan_from = 0;
  }
};

}  // namespace

SplitterStats stage_splitter(BoundedQueue<Chunk> &in, const RankPlan &plan,
                             BoundedQueue<WorkItem> &out,
                             std::atomic<bool> &stop_reader) {
  SplitterStats stats;
  SplitBuffer sb;
  sb.base = plan.slab_start;
  std::uint64_t next_sequence = 0;

  const auto finish = [&] {
    stop_reader.store(true, std::memory_order_relaxed);
    in.close();
    while (in.pop().has_value()) {
    }
    out.close();
  };

  // Consumes whatever is decodable right now. Returns true when the slab
  // is finished (next record start past slab_stop, downstream gone, or a
  // final clean end).
  const auto process = [&](bool final) -> bool {
    while (true) {
      const std::span<const std::uint8_t> bytes(sb.buffer);
      const SyncResult found = scan_record_start(bytes, sb.scan_from, final);

      if (found.status == SyncScan::NeedMore) {
        // A candidate marker near the end needs the next chunk to resolve.
        sb.scan_from = found.offset;
        sb.drop_consumed();
        return false;
      }
      if (found.status == SyncScan::End) {
        if (!final) {
          // No marker candidate is fully visible yet; only the last byte
          // could begin one once more data arrives. Everything before it
          // is definitively dead and safe to drop.
          sb.scan_from = sb.buffer.empty() ? 0 : sb.buffer.size() - 1;
          sb.drop_consumed();
          return false;
        }
        // Final data: distinguish a clean tail from an unframeable stream.
        (void)find_record_start(bytes, sb.scan_from);
        return true;
      }

      const std::uint64_t record_start = sb.base + found.offset;
      if (record_start >= plan.slab_stop) return true;  // next rank's record

      try {
        auto [ligand, next_offset] = decode_record(bytes, found.offset);
        ++stats.items;
        if (!out.push(WorkItem{std::move(ligand), next_sequence++}))
          return true;
        sb.scan_from = next_offset;
      } catch (const CodecError &) {
        // A framed but undecodable record: count it and resynchronize
        // just past its sync marker.
        ++stats.records_skipped;
        sb.scan_from = found.offset + 2;
      }
      sb.drop_consumed();
    }
  };

  try {
    bool done = false;
    while (!done) {
      std::optional<Chunk> chunk = in.pop();
      const bool final = !chunk.has_value();
      const auto start_time = Clock::now();
      if (chunk) sb.append(*chunk);
      done = process(final);
      stats.busy_seconds += seconds_since(start_time);
      if (final) break;
    }
  } catch (...) {
    finish();
    throw;
  }
  finish();
  return stats;
}

DockerStats docker_worker(BoundedQueue<WorkItem> &in,
                          BoundedQueue<OutputRow> &out, const Pocket &pocket,
                          const ScoringConfig &scoring,
                          double synthetic_slowdown) {
  if (synthetic_slowdown < 1.0)
    throw InvalidArgument("synthetic slowdown must be at least 1");

  DockerStats stats;
  while (std::optional<WorkItem> item = in.pop()) {
    const auto start_time = Clock::now();
    OutputRow row;
    bool ok = false;
    try {
      const DockResult result =
          dock_and_score(pocket, item->ligand, scoring);
      if (std::isfinite(result.best_score)) {
        row.smiles = result.smiles;
        row.score = result.best_score;
        ok = true;
      }
    } catch (const std::exception &) {
      // Recorded below; one bad ligand must not take the worker down.
    }

    if (synthetic_slowdown > 1.0) {
      const double stretch = (synthetic_slowdown - 1.0) * seconds_since(start_time);
      std::this_thread::sleep_for(std::chrono::duration<double>(stretch));
    }
    stats.busy_seconds += seconds_since(start_time);

    if (!ok) {
      ++stats.dock_errors;
      continue;
    }
    if (!out.push(std::move(row))) break;  // writer gone, stop pulling work
    ++stats.rows;
  }
  return stats;
}

WriterStats stage_writer(BoundedQueue<OutputRow> &in, Sink &sink,
                         std::size_t buffer_bytes) {
  if (buffer_bytes == 0) throw InvalidArgument("writer buffer must be positive");

  WriterStats stats;
  std::string buffer;
  buffer.reserve(buffer_bytes + 256);

  const auto flush = [&] {
    if (buffer.empty()) return;
    sink.write(buffer);
    ++stats.write_calls;
    stats.bytes_written += buffer.size();
    buffer.clear();
  };

  while (std::optional<OutputRow> row = in.pop()) {
    const auto start_time = Clock::now();
    buffer += format_row(*row);
    ++stats.rows;
    if (buffer.size() >= buffer_bytes) flush();
    stats.busy_seconds += seconds_since(start_time);
  }
  const auto start_time = Clock::now();
  flush();
  sink.finish();
  stats.busy_seconds += seconds_since(start_time);
  return stats;
}

namespace {

void validate_config(const PipelineConfig &config) {
  int total_workers = 0;
  for (const WorkerClass &wc : config.workers) {
    if (wc.count < 0) throw InvalidArgument("worker count must not be negative");
    if (wc.synthetic_slowdown < 1.0)
      throw InvalidArgument("synthetic slowdown must be at least 1");
    total_workers += wc.count;
  }
  if (total_workers < 1) throw InvalidArgument("need at least one worker");
  if (config.chunk_bytes == 0) throw InvalidArgument("chunk size must be positive");
}

}  // namespace

RankStats run_rank(const RankPlan &plan, ByteSource &source, Sink &sink,
                   const Pocket &pocket, const PipelineConfig &config) {
  validate_config(config);
  if (plan.slab_start > plan.slab_stop)
    throw InvalidArgument("slab start past slab stop");
  if (plan.slab_stop > source.size())
    throw InvalidArgument("slab exceeds the input size");

  BoundedQueue<Chunk> chunks(config.chunk_queue_capacity);
  BoundedQueue<WorkItem> items(config.item_queue_capacity);
  BoundedQueue<OutputRow> rows(config.row_queue_capacity);
  std::atomic<bool> stop_reader{false};

  ReaderStats reader_stats;
  SplitterStats splitter_stats;
  WriterStats writer_stats;
  DockerStats docker_stats;
  std::mutex docker_mutex;

  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto record_failure = [&] {
    {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
    // Shut every stage down; blocked pushes and pops all wake.
    chunks.close();
    items.close();
    rows.close();
  };

  const auto wall_start = Clock::now();

  std::vector<std::thread> threads;
  threads.emplace_back([&] {
    try {
      reader_stats = stage_reader(source, plan, config.chunk_bytes, chunks,
                                  stop_reader);
    } catch (...) {
      record_failure();
    }
  });
  threads.emplace_back([&] {
    try {
      splitter_stats = stage_splitter(chunks, plan, items, stop_reader);
    } catch (...) {
      record_failure();
    }
  });

  int total_workers = 0;
  for (const WorkerClass &wc : config.workers) total_workers += wc.count;
  std::atomic<int> workers_alive{total_workers};
  for (const WorkerClass &wc : config.workers) {
    for (int i = 0; i < wc.count; ++i) {
      threads.emplace_back([&] {
        try {
          const DockerStats mine = docker_worker(items, rows, pocket,
                                                 config.scoring,
                                                 wc.synthetic_slowdown);
          std::lock_guard lock(docker_mutex);
          docker_stats.rows += mine.rows;
          docker_stats.dock_errors += mine.dock_errors;
          docker_stats.busy_seconds += mine.busy_seconds;
        } catch (...) {
          record_failure();
        }
        if (workers_alive.fetch_sub(1) == 1) rows.close();
      });
    }
  }
  threads.emplace_back([&] {
    try {
      writer_stats = stage_writer(rows, sink, config.writer_buffer_bytes);
    } catch (...) {
      record_failure();
    }
  });

  for (std::thread &t : threads) t.join();
  if (failure) std::rethrow_exception(failure);

  RankStats stats;
  stats.ligands_docked = docker_stats.rows;
  stats.records_skipped = splitter_stats.records_skipped;
  stats.dock_errors = docker_stats.dock_errors;
  stats.rows_written = writer_stats.rows;
  stats.chunks_read = reader_stats.chunks;
  stats.bytes_read = reader_stats.bytes_read;
  stats.write_calls = writer_stats.write_calls;
  stats.bytes_written = writer_stats.bytes_written;
  stats.workers = total_workers;
  stats.wall_seconds = seconds_since(wall_start);
  stats.reader_busy_seconds = reader_stats.busy_seconds;
  stats.splitter_busy_seconds = splitter_stats.busy_seconds;
  stats.docker_busy_seconds = docker_stats.busy_seconds;
  stats.writer_busy_seconds = writer_stats.busy_seconds;
  stats.chunk_queue_high_water = chunks.high_water();
  stats.item_queue_high_water = items.high_water();
  stats.row_queue_high_water = rows.high_water();
  return stats;
}

RankStats run_rank(const RankPlan &plan, const Pocket &pocket,
                   const PipelineConfig &config) {
  FileSource source(plan.input_path);
  FileSink sink(plan.output_path);
  return run_rank(plan, source, sink, pocket, config);
}

void merge_outputs(const std::vector<std::string> &paths,
                   const std::string &merged_path) {
  std::ofstream out(merged_path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open merged output '" + merged_path + "'");
  for (const std::string &path : paths) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("missing rank output '" + path + "'");
    out << in.rdbuf();
    if (in.bad() || !out)
      throw IoError("merge failed while copying '" + path + "'");
  }
  out.flush();
  if (!out) throw IoError("cannot finish merged output '" + merged_path + "'");
}

namespace {

std::string format_seconds(double value) {
  char buf[64];
  const auto [end, ec] =
      std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed, 6);
  if (ec != std::errc()) return "0.000000";
  return std::string(buf, end);
}

}  // namespace

std::string format_rank_stats(const RankStats &s) {
  std::string out;
  const auto put = [&out](std::string_view key, const std::string &value) {
    out += key;
    out += '=';
    out += value;
    out += '\n';
  };
  put("ligands_docked", std::to_string(s.ligands_docked));
  put("records_skipped", std::to_string(s.records_skipped));
  put("dock_errors", std::to_string(s.dock_errors));
  put("rows_written", std::to_string(s.rows_written));
  put("chunks_read", std::to_string(s.chunks_read));
  put("bytes_read", std::to_string(s.bytes_read));
  put("write_calls", std::to_string(s.write_calls));
  put("bytes_written", std::to_string(s.bytes_written));
  put("workers", std::to_string(s.workers));
  put("wall_seconds", format_seconds(s.wall_seconds));
  put("reader_busy_seconds", format_seconds(s.reader_busy_seconds));
  put("splitter_busy_seconds", format_seconds(s.splitter_busy_seconds));
  put("docker_busy_seconds", format_seconds(s.docker_busy_seconds));
  put("writer_busy_seconds", format_seconds(s.writer_busy_seconds));
  put("chunk_queue_high_water", std::to_string(s.chunk_queue_high_water));
  put("item_queue_high_water", std::to_string(s.item_queue_high_water));
  put("row_queue_high_water", std::to_string(s.row_queue_high_water));
  return out;
}

RankStats parse_rank_stats(std::string_view text) {
  RankStats stats;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    if (line.empty()) continue;

    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ParseError("stats line missing '='", pos - line.size() - 1);
    const std::string_view key = line.substr(0, eq);
    const std::string_view value = line.substr(eq + 1);

    const char *vbegin = value.data();
    const char *vend = value.data() + value.size();
    const auto as_u64 = [&]() -> std::uint64_t {
      std::uint64_t v = 0;
      const auto [p, ec] = std::from_chars(vbegin, vend, v);
      if (ec != std::errc() || p != vend)
        throw ParseError("bad stats count '" + std::string(value) + "'",
                         pos - line.size() - 1);
      return v;
    };
    const auto as_double = [&]() -> double {
      double v = 0;
      const auto [p, ec] = std::from_chars(vbegin, vend, v);
      if (ec != std::errc() || p != vend)
        throw ParseError("bad stats value '" + std::string(value) + "'",
                         pos - line.size() - 1);
      return v;
    };

    if (key == "ligands_docked") stats.ligands_docked = as_u64();
    else if (key == "records_skipped") stats.records_skipped = as_u64();
    else if (key == "dock_errors") stats.dock_errors = as_u64();
    else if (key == "rows_written") stats.rows_written = as_u64();
    else if (key == "chunks_read") stats.chunks_read = as_u64();
    else if (key == "bytes_read") stats.bytes_read = as_u64();
    else if (key == "write_calls") stats.write_calls = as_u64();
    else if (key == "bytes_written") stats.bytes_written = as_u64();
    else if (key == "workers") stats.workers = static_cast<int>(as_u64());
    else if (key == "wall_seconds") stats.wall_seconds = as_double();
    else if (key == "reader_busy_seconds") stats.reader_busy_seconds = as_double();
    else if (key == "splitter_busy_seconds")
      stats.splitter_busy_seconds = as_double();
    else if (key == "docker_busy_seconds") stats.docker_busy_seconds = as_double();
    else if (key == "writer_busy_seconds") stats.writer_busy_seconds = as_double();
    else if (key == "chunk_queue_high_water")
      stats.chunk_queue_high_water = as_u64();
    else if (key == "item_queue_high_water")
      stats.item_queue_high_water = as_u64();
    else if (key == "row_queue_high_water")
      stats.row_queue_high_water = as_u64();
    else
      throw ParseError("unknown stats key '" + std::string(key) + "'",
                       pos - line.size() - 1);
  }
  return stats;
}

}  // namespace vscreen
