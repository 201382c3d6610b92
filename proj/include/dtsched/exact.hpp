#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dtsched/core.hpp"

// Exact solvers and the mixed-integer formulation. The free-order search
// relaxes the everything-in-one-order rule: transfers and computations may
// be sequenced independently.

namespace dtsched {

/// Carried-over resource state for solving a suffix of a larger schedule:
/// the instants each resource frees, plus memory still held by earlier
/// tasks (pairs of computation end time and held size; those events are
/// fixed and only release memory as they complete).
struct ExactInit {
  double tau_comm = 0.0;
  double tau_comp = 0.0;
  std::vector<std::pair<double, double>> pending_releases;
};

struct SameOrderResult {
  std::vector<TaskId> order;
  double makespan = 0.0;
};

struct FreeOrderResult {
  std::vector<TaskId> comm_order;
  std::vector<TaskId> comp_order;
  double makespan = 0.0;
  Schedule schedule;
};

/// Earliest-start schedule for fixed transfer and computation orders,
/// starting from `init`. Returns nothing when the pair deadlocks (the next
/// transfer cannot fit in memory and every remaining computation waits on a
/// later transfer).
std::optional<Schedule> simulate_pair(std::span<const Task> tasks,
                                      double capacity, const ExactInit& init,
                                      std::span<const TaskId> comm_order,
                                      std::span<const TaskId> comp_order);

/// Minimum makespan over all permutations executed by the one-order list
/// scheduler. Ties resolve to the lexicographically smallest order. Throws
/// std::invalid_argument when the instance has more than `limit` tasks.
SameOrderResult brute_force_same_order(const Instance& instance,
                                       std::size_t limit = 8);

/// Minimum makespan over all (transfer order, computation order) pairs,
/// found by a complete branch-and-bound over event commitments; equivalent
/// to exhausting every pair but usable beyond toy sizes. Throws
/// std::invalid_argument when the instance has more than `limit` tasks.
FreeOrderResult brute_force_free_order(const Instance& instance,
                                       std::size_t limit = 6);

/// Branch-and-bound core behind brute_force_free_order: optimal free-order
/// completion of `tasks` on top of `init`. Returns nothing if no schedule
/// finishes strictly below `cutoff`.
std::optional<FreeOrderResult> solve_free_order(
    std::span<const Task> tasks, double capacity, const ExactInit& init,
    double cutoff = std::numeric_limits<double>::infinity());

/// Iterative exact-window heuristic: splits tasks into consecutive windows
/// of size k (submission order), solves each window to free-order optimality
/// given the resource and memory state left by the previous windows, and
/// concatenates the results. k must lie in {3, 4, 5, 6}.
Schedule lp_k(const Instance& instance, int k);

// ---------------------------------------------------------------------------
// Mixed-integer formulation.

struct MilpTerm {
  double coef;
  std::string var;
};

struct MilpConstraint {
  std::string name;
  std::vector<MilpTerm> terms;
  char sense;  // 'L' for <=, 'E' for =
  double rhs;
};

/// Start/end variables per task, pairwise ordering booleans for each
/// resource, release booleans tying transfers to computation ends, and the
/// memory row per task. big_m is the total work in the instance.
struct MilpModel {
  std::vector<std::string> continuous;
  std::vector<std::string> binaries;
  std::vector<MilpConstraint> constraints;
  std::string objective = "l";
  double big_m = 0.0;
};

MilpModel build_milp(const Instance& instance);

/// Renders the model in CPLEX LP format (UTF-8, LF line endings). Strict
/// inequalities are encoded with a 1e-6 margin.
std::string export_milp(const Instance& instance);

}  // namespace dtsched
