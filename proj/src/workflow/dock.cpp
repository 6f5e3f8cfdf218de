//
// Project vscreen - Copyright 2026 the vscreen authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <fcntl.h>
#include <sys/wait.h>
#include <unistd.h>

#include <filesystem>
#include <fstream>

#include "vscreen/dockengine/pocket_io.hpp"
#include "vscreen/error.hpp"
#include "vscreen/molmodel/binary_codec.hpp"
#include "vscreen/workflow/workflow.hpp"

namespace vscreen {

namespace {

std::string rank_file(const std::string &out_dir, int rank,
                      const char *suffix) {
  return (std::filesystem::path(out_dir) /
          ("rank" + std::to_string(rank) + suffix))
      .string();
}

void write_job_table(const std::string &out_dir, const DockOptions &options,
                     const std::string &pocket_id,
                     const std::vector<RankPlan> &plans,
                     const std::vector<JobOutcome> &jobs) {
  const std::string path =
      (std::filesystem::path(out_dir) / "job.txt").string();
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write job table '" + path + "'");
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    out << "rank=" << jobs[i].rank << " ranks=" << options.n_ranks
        << " input=" << options.input_path << " pocket=" << pocket_id
        << " slab=" << plans[i].slab_start << ":" << plans[i].slab_stop
        << " status=" << (jobs[i].done ? "done" : "failed") << "\n";
  }
  out.flush();
  if (!out) throw IoError("write failed on '" + path + "'");
}

// Reconstructs the worker class counts the CLI would have been given.
// Spawn mode re-invokes this binary per rank, so the configuration must
// survive a trip through command-line flags.
struct WorkerFlags {
  int fast = 0;
  int slow = 0;
  double slowdown = 1.0;
};

WorkerFlags worker_flags(const PipelineConfig &config) {
  WorkerFlags flags;
  bool saw_slow = false;
  for (const WorkerClass &cls : config.workers) {
    if (cls.kind == WorkerKind::Fast) {
      flags.fast += cls.count;
    } else {
      if (saw_slow && cls.synthetic_slowdown != flags.slowdown)
        throw InvalidArgument(
            "spawn mode supports a single slow worker class");
      flags.slow += cls.count;
      flags.slowdown = cls.synthetic_slowdown;
      saw_slow = true;
    }
  }
  return flags;
}

JobOutcome run_one_rank(const RankPlan &plan, const Pocket &pocket,
                        const DockOptions &options) {
  JobOutcome job;
  job.rank = plan.rank;
  job.scores_path = plan.output_path;
  job.stats_path = rank_file(options.out_dir, plan.rank, ".stats");
  try {
    const RankStats stats = run_rank(plan, pocket, options.pipeline);
    // The stats file doubles as the completion marker, so it is written
    // only after the score file is finished.
    std::ofstream out(job.stats_path, std::ios::trunc);
    if (!out)
      throw IoError("cannot write stats file '" + job.stats_path + "'");
    out << format_rank_stats(stats);
    out.flush();
    if (!out) throw IoError("write failed on '" + job.stats_path + "'");
    job.done = true;
  } catch (const std::exception &error) {
    job.error = error.what();
  }
  return job;
}

std::vector<JobOutcome> spawn_ranks(const std::vector<RankPlan> &plans,
                                    const DockOptions &options) {
  const WorkerFlags workers = worker_flags(options.pipeline);
  std::vector<pid_t> pids;
  std::vector<JobOutcome> jobs;

  for (const RankPlan &plan : plans) {
    JobOutcome job;
    job.rank = plan.rank;
    job.scores_path = plan.output_path;
    job.stats_path = rank_file(options.out_dir, plan.rank, ".stats");
    jobs.push_back(job);

    std::vector<std::string> args = {
        options.self_exe,
        "dock",
        "--input", options.input_path,
        "--pocket", options.pocket_path,
        "--out", options.out_dir,
        "--ranks", std::to_string(options.n_ranks),
        "--rank-index", std::to_string(plan.rank),
        "--fast-workers", std::to_string(workers.fast),
        "--slow-workers", std::to_string(workers.slow),
        "--slowdown", std::to_string(workers.slowdown),
        "--chunk", std::to_string(options.pipeline.chunk_bytes),
        "--buffer", std::to_string(options.pipeline.writer_buffer_bytes),
        "--queue", std::to_string(options.pipeline.item_queue_capacity),
        "--restarts", std::to_string(options.pipeline.scoring.restarts),
        "--rescored", std::to_string(options.pipeline.scoring.rescored),
    };
    std::vector<char *> argv;
    argv.reserve(args.size() + 1);
    for (std::string &arg : args) argv.push_back(arg.data());
    argv.push_back(nullptr);

    const pid_t pid = fork();
    if (pid < 0) throw IoError("fork failed for rank " +
                               std::to_string(plan.rank));
    if (pid == 0) {
      // The parent reports every rank when the children are done; silence
      // the child's own summary line so it is not printed twice. Errors
      // still reach the inherited stderr.
      const int null_fd = open("/dev/null", O_WRONLY);
      if (null_fd >= 0) {
        dup2(null_fd, STDOUT_FILENO);
        close(null_fd);
      }
      execv(options.self_exe.c_str(), argv.data());
      _exit(127); // exec failed; the parent sees a failed job
    }
    pids.push_back(pid);
  }

  for (std::size_t i = 0; i < pids.size(); ++i) {
    int status = 0;
    if (waitpid(pids[i], &status, 0) < 0) {
      jobs[i].error = "waitpid failed";
      continue;
    }
    if (WIFEXITED(status) && WEXITSTATUS(status) == 0) {
      jobs[i].done = true;
    } else if (WIFSIGNALED(status)) {
      jobs[i].error = "killed by signal " + std::to_string(WTERMSIG(status));
    } else {
      jobs[i].error =
          "exited with code " + std::to_string(WEXITSTATUS(status));
    }
  }
  return jobs;
}

} // namespace

DockSummary cmd_dock(const DockOptions &options) {
  if (options.n_ranks < 1)
    throw InvalidArgument("rank count must be at least 1");
  if (options.rank_index >= options.n_ranks)
    throw InvalidArgument("rank index is out of range");

  const Pocket pocket = read_pocket_file(options.pocket_path);

  std::uint64_t file_size = 0;
  {
    FileSource probe(options.input_path);
    file_size = probe.size();
    std::vector<std::uint8_t> head(kFileHeaderSize, 0);
    if (probe.read_at(0, head) != head.size())
      throw CodecError("input file is shorter than the format header");
    check_xslb_header(head); // reject non-library inputs before planning
  }

  std::error_code ec;
  std::filesystem::create_directories(options.out_dir, ec);
  if (ec)
    throw IoError("cannot create output directory '" + options.out_dir +
                  "': " + ec.message());

  std::vector<RankPlan> plans = plan_slabs(file_size, options.n_ranks);
  for (RankPlan &plan : plans) {
    plan.input_path = options.input_path;
    plan.output_path = rank_file(options.out_dir, plan.rank, ".scores");
  }

  DockSummary summary;
  if (options.rank_index >= 0) {
    // One rank only: used by spawned children and by operators replaying
    // a failed job. The job table stays untouched to keep concurrent
    // children from racing on it.
    summary.jobs.push_back(
        run_one_rank(plans[static_cast<std::size_t>(options.rank_index)],
                     pocket, options));
  } else if (options.spawn_processes) {
    summary.jobs = spawn_ranks(plans, options);
  } else {
    for (const RankPlan &plan : plans)
      summary.jobs.push_back(run_one_rank(plan, pocket, options));
  }

  for (const JobOutcome &job : summary.jobs)
    summary.all_done = summary.all_done && job.done;

  if (options.rank_index < 0)
    write_job_table(options.out_dir, options, pocket.id, plans, summary.jobs);
  return summary;
}

} // namespace vscreen
