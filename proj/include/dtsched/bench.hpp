#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dtsched/core.hpp"

// Capacity-sweep experiments: run a set of heuristics over a grid of memory
// capacities derived from each workload's minimum requirement, report the
// makespan ratio against the infinite-memory optimum, and summarize with
// quartiles.

namespace dtsched {

struct Workload {
  std::string name;
  std::vector<Task> tasks;
};

struct SweepRow {
  std::string workload;
  double capacity_factor = 1.0;  // multiple of the minimum capacity
  HeuristicId heuristic;
  double makespan = 0.0;
  double ratio = 1.0;
};

struct SummaryRow {
  double capacity_factor = 1.0;
  HeuristicId heuristic;
  double min = 0.0, q1 = 0.0, median = 0.0, q3 = 0.0, max = 0.0;
};

/// The nine capacities from the minimum requirement to twice it, in steps of
/// an eighth. Throws std::invalid_argument on an empty workload.
std::vector<double> capacities_from(std::span<const Task> tasks);

inline constexpr std::array<double, 9> kCapacityFactors{
    1.0, 1.125, 1.25, 1.375, 1.5, 1.625, 1.75, 1.875, 2.0};

/// Full grid of workload x capacity factor x heuristic, in that product
/// order. When batch_size is set, each cell runs batch-wise with barriers
/// and the ratio denominator becomes the sum of per-batch optima. `jobs`
/// parallelizes over cells; the row order never changes.
std::vector<SweepRow> sweep(std::span<const Workload> workloads,
                            std::span<const HeuristicId> heuristics,
                            std::optional<std::size_t> batch_size = {},
                            int jobs = 1);

/// Quartiles of ratio per (capacity factor, heuristic), linear interpolation
/// between order statistics.
std::vector<SummaryRow> summarize(std::span<const SweepRow> rows);

/// CSV with header `workload,capacity_factor,heuristic,makespan,ratio`.
std::string sweep_csv(std::span<const SweepRow> rows);
std::string summary_csv(std::span<const SummaryRow> rows);

/// One JSON document holding both the raw rows and the summary.
std::string report_json(std::span<const SweepRow> rows,
                        std::span<const SummaryRow> summary);

}  // namespace dtsched
