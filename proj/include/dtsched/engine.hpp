#pragma once

#include <span>
#include <vector>

#include "dtsched/core.hpp"

// Deterministic schedule construction. All engines keep the same order on
// both resources, start every event as early as the constraints allow, and
// acquire memory at transfer start. Pure functions; safe to call from many
// threads at once.

namespace dtsched {

/// Criterion used to pick among equally idle-minimal candidates.
enum class Selector {
  LargestComm,
  SmallestComm,
  MaxRatio,  // comp_time / comm_time; comm_time == 0 counts as +infinity
};

std::string to_string(Selector s);

/// Resource availability during construction: the instants from which each
/// resource is free, plus the tasks currently holding memory.
struct EngineState {
  double comm_free = 0.0;
  double comp_free = 0.0;
  std::vector<TaskId> live_set;
  double live_mem = 0.0;
};

/// Greedy list scheduling of a fixed order under the memory bound. Each task
/// starts its transfer at the earliest instant >= the link's free time at
/// which its memory fits, waiting at successive computation-end events if
/// needed; its computation starts when both its data and the processor are
/// ready. Throws infeasible_error if any task alone exceeds the capacity.
Schedule list_schedule(const Instance& instance,
                       std::span<const TaskId> order);

/// list_schedule with the memory bound ignored: transfers run back to back.
Schedule infinite_schedule(std::span<const Task> tasks,
                           std::span<const TaskId> order);

/// Peak memory in use at any instant of a schedule (half-open accounting).
double peak_memory(std::span<const Task> tasks, const Schedule& schedule);

/// Event-driven selection: whenever the link frees, pick among the
/// unscheduled tasks that fit in memory and add the least idle time to the
/// processor, breaking ties by the selector and then by smallest id. When
/// nothing fits, the link idles until the next computation ends.
Schedule dynamic_schedule(const Instance& instance, Selector selector);

/// Follows base_order, but when the next task of the order does not fit in
/// memory, falls back to the dynamic rule among the remaining fitting tasks
/// and drops the chosen task from the order.
Schedule corrected_schedule(const Instance& instance,
                            std::span<const TaskId> base_order,
                            Selector selector);

}  // namespace dtsched
