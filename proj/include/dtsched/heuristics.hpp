#pragma once

#include <span>
#include <vector>

#include "dtsched/core.hpp"
#include "dtsched/engine.hpp"

// Ordering strategies. Every strategy produces a permutation that is then
// executed by the memory-respecting list scheduler (or, for the dynamic
// families, builds the schedule directly).

namespace dtsched {

/// Sort-based orders plus the submission order. Accepts OS, OOSIM, IOCMS,
/// DOCPS, IOCCS and DOCCS; ties go to the smaller id.
std::vector<TaskId> static_order(std::span<const Task> tasks, HeuristicId id);

/// Sequence minimizing the total non-overlap between consecutive
/// computations under no-wait semantics: the sum over adjacent pairs (i, j)
/// of max(0, comm_j - comp_i). Memory plays no role in the ordering.
std::vector<TaskId> gilmore_gomory_order(std::span<const Task> tasks);

/// Total adjacent-pair transition cost of an order (the quantity
/// gilmore_gomory_order minimizes).
double gg_order_cost(std::span<const Task> tasks,
                     std::span<const TaskId> order);

/// First-Fit by memory requirement in submission order; the result lists
/// bin 1's tasks in insertion order, then bin 2's, and so on. Throws
/// infeasible_error if a task exceeds the bin capacity.
std::vector<TaskId> bin_packing_order(std::span<const Task> tasks,
                                      double capacity);

struct HeuristicRun {
  HeuristicId heuristic;
  Schedule schedule;
  double makespan = 0.0;
  double ratio = 1.0;  // makespan over the infinite-memory optimum
};

/// Runs one strategy on an instance and reports its makespan and its ratio
/// to the infinite-memory optimum.
HeuristicRun run_heuristic(const Instance& instance, HeuristicId id);

}  // namespace dtsched
