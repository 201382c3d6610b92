#pragma once

#include <span>
#include <vector>

#include "dtsched/core.hpp"

// Optimal ordering for the unconstrained-memory case, and the exchange
// argument behind it.

namespace dtsched {

/// Two-phase ordering rule: tasks whose computation is at least as long as
/// their transfer come first, by non-decreasing transfer time; the rest
/// follow by non-increasing computation time. Ties go to the smaller id.
std::vector<TaskId> johnson_order(std::span<const Task> tasks);

/// Optimal makespan with unbounded memory: the johnson_order makespan.
/// Lower bound for every capacity-constrained schedule of the same tasks.
double omim(std::span<const Task> tasks);

/// Exchange-argument oracle. Given resource availability times t1 (link) and
/// t2 (processor) and a pair satisfying one of the three exchange conditions
/// (both compute-heavy with CM_A <= CM_B; both transfer-heavy with
/// CP_A >= CP_B; or A compute-heavy and B transfer-heavy), returns whether
/// running A before B finishes no later than the swapped order. Expected to
/// be true whenever the precondition holds; throws std::invalid_argument
/// when it does not.
bool check_swap_lemma(const Task& a, const Task& b, double t1, double t2);

}  // namespace dtsched
