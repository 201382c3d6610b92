#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "dtsched/core.hpp"

// Trace files and batch-wise execution. A trace is a CSV with header
// `task_id,comm_time,comp_time,mem_bytes`; the memory column may be omitted,
// in which case a task's requirement defaults to its transfer time. Lines
// starting with `#` are comments. Row order is the submission order.

namespace dtsched {

/// Thrown for structurally broken trace input; the message names the line.
struct parse_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<Task> read_trace(std::istream& in);
std::vector<Task> read_trace_file(const std::string& path);

/// Inverse of read_trace: always writes the four-column form, rendering
/// values with enough digits to round-trip exactly.
void write_trace(std::ostream& out, std::span<const Task> tasks);
void write_trace_file(const std::string& path, std::span<const Task> tasks);

/// Consecutive chunks in submission order; the last may be smaller.
std::vector<std::vector<Task>> batch_tasks(std::span<const Task> tasks,
                                           std::size_t size = 100);

/// Runs a heuristic on each batch in turn with a full barrier in between:
/// a batch only starts once the previous batch has completely finished, so
/// both resources are free and memory is empty at each boundary.
Schedule schedule_in_batches(const Instance& instance, HeuristicId heuristic,
                             std::size_t size = 100);

/// Sum of per-batch infinite-memory optima: the natural lower bound for a
/// batched run, used as the ratio denominator in batched experiments.
double batched_omim(std::span<const Task> tasks, std::size_t size = 100);

}  // namespace dtsched
