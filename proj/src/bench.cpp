#include "dtsched/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <limits>
#include <thread>

#include <json.hpp>

#include "dtsched/heuristics.hpp"
#include "dtsched/johnson.hpp"
#include "dtsched/trace_io.hpp"

namespace dtsched {

namespace {

std::string fmt(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

// Type-7 quantile: linear interpolation between order statistics.
double quantile(const std::vector<double>& sorted, double p) {
  const std::size_t n = sorted.size();
  if (n == 1) return sorted[0];
  const double h = p * static_cast<double>(n - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, n - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

std::vector<double> capacities_from(std::span<const Task> tasks) {
  const double mc = min_capacity(tasks);  // throws on empty
  std::vector<double> out;
  out.reserve(kCapacityFactors.size());
  for (double f : kCapacityFactors) out.push_back(mc * f);
  return out;
}

std::vector<SweepRow> sweep(std::span<const Workload> workloads,
                            std::span<const HeuristicId> heuristics,
                            std::optional<std::size_t> batch_size, int jobs) {
  struct Cell {
    const Workload* workload;
    double factor;
    double capacity;
    HeuristicId heuristic;
    double lower_bound;
  };
  std::vector<Cell> cells;
  for (const Workload& w : workloads) {
    const double mc = min_capacity(w.tasks);
    const double lower =
        batch_size ? batched_omim(w.tasks, *batch_size) : omim(w.tasks);
    for (double f : kCapacityFactors) {
      for (const HeuristicId& h : heuristics) {
        cells.push_back({&w, f, mc * f, h, lower});
      }
    }
  }

  std::vector<SweepRow> rows(cells.size());
  auto run_cell = [&](std::size_t i) {
    const Cell& cell = cells[i];
    Instance instance(cell.workload->tasks, cell.capacity);
    double ms;
    if (batch_size) {
      ms = schedule_in_batches(instance, cell.heuristic, *batch_size)
               .makespan();
    } else {
      ms = run_heuristic(instance, cell.heuristic).makespan;
    }
    double ratio;
    if (cell.lower_bound > kEps) {
      ratio = ms / cell.lower_bound;
    } else {
      ratio = ms <= kEps ? 1.0 : std::numeric_limits<double>::infinity();
    }
    rows[i] = {cell.workload->name, cell.factor, cell.heuristic, ms, ratio};
  };

  if (jobs <= 1 || cells.size() <= 1) {
    for (std::size_t i = 0; i < cells.size(); ++i) run_cell(i);
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= cells.size()) return;
        run_cell(i);
      }
    };
    std::vector<std::thread> pool;
    const int count = std::min<int>(jobs, static_cast<int>(cells.size()));
    pool.reserve(count);
    for (int t = 0; t < count; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  return rows;
}

std::vector<SummaryRow> summarize(std::span<const SweepRow> rows) {
  // Group in first-appearance order of (factor, heuristic).
  std::vector<SummaryRow> out;
  std::vector<std::vector<double>> ratios;
  auto find_group = [&](const SweepRow& row) -> std::size_t {
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (out[i].capacity_factor == row.capacity_factor &&
          out[i].heuristic == row.heuristic) {
        return i;
      }
    }
    out.push_back({row.capacity_factor, row.heuristic, 0, 0, 0, 0, 0});
    ratios.emplace_back();
    return out.size() - 1;
  };
  for (const SweepRow& row : rows) {
    ratios[find_group(row)].push_back(row.ratio);
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::vector<double>& r = ratios[i];
    std::sort(r.begin(), r.end());
    out[i].min = r.front();
    out[i].q1 = quantile(r, 0.25);
    out[i].median = quantile(r, 0.5);
    out[i].q3 = quantile(r, 0.75);
    out[i].max = r.back();
  }
  return out;
}

std::string sweep_csv(std::span<const SweepRow> rows) {
  std::string out = "workload,capacity_factor,heuristic,makespan,ratio\n";
  for (const SweepRow& r : rows) {
    out += r.workload + "," + fmt(r.capacity_factor) + "," +
           to_string(r.heuristic) + "," + fmt(r.makespan) + "," +
           fmt(r.ratio) + "\n";
  }
  return out;
}

std::string summary_csv(std::span<const SummaryRow> rows) {
  std::string out = "capacity_factor,heuristic,min,q1,median,q3,max\n";
  for (const SummaryRow& r : rows) {
    out += fmt(r.capacity_factor) + "," + to_string(r.heuristic) + "," +
           fmt(r.min) + "," + fmt(r.q1) + "," + fmt(r.median) + "," +
           fmt(r.q3) + "," + fmt(r.max) + "\n";
  }
  return out;
}

std::string report_json(std::span<const SweepRow> rows,
                        std::span<const SummaryRow> summary) {
  nlohmann::json doc;
  doc["rows"] = nlohmann::json::array();
  for (const SweepRow& r : rows) {
    doc["rows"].push_back({{"workload", r.workload},
                           {"capacity_factor", r.capacity_factor},
                           {"heuristic", to_string(r.heuristic)},
                           {"makespan", r.makespan},
                           {"ratio", r.ratio}});
  }
  doc["summary"] = nlohmann::json::array();
  for (const SummaryRow& r : summary) {
    doc["summary"].push_back({{"capacity_factor", r.capacity_factor},
                              {"heuristic", to_string(r.heuristic)},
                              {"min", r.min},
                              {"q1", r.q1},
                              {"median", r.median},
                              {"q3", r.q3},
                              {"max", r.max}});
  }
  return doc.dump(2);
}

}  // namespace dtsched
