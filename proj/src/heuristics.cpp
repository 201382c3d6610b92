#include "dtsched/heuristics.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <unordered_map>

#include "dtsched/exact.hpp"
#include "dtsched/johnson.hpp"

namespace dtsched {

namespace {

std::vector<TaskId> sorted_ids(std::span<const Task> tasks, auto key,
                               bool descending) {
  std::vector<const Task*> ptrs;
  ptrs.reserve(tasks.size());
  for (const Task& t : tasks) ptrs.push_back(&t);
  std::sort(ptrs.begin(), ptrs.end(), [&](const Task* a, const Task* b) {
    const double ka = key(*a);
    const double kb = key(*b);
    if (!approx_eq(ka, kb)) return descending ? ka > kb : ka < kb;
    return a->id < b->id;
  });
  std::vector<TaskId> out;
  out.reserve(ptrs.size());
  for (const Task* t : ptrs) out.push_back(t->id);
  return out;
}

}  // namespace

std::vector<TaskId> static_order(std::span<const Task> tasks, HeuristicId id) {
  using K = HeuristicId::Kind;
  switch (id.kind) {
    case K::OS: {
      std::vector<TaskId> out;
      out.reserve(tasks.size());
      for (const Task& t : tasks) out.push_back(t.id);
      return out;
    }
    case K::OOSIM:
      return johnson_order(tasks);
    case K::IOCMS:
      return sorted_ids(tasks, [](const Task& t) { return t.comm_time; },
                        false);
    case K::DOCPS:
      return sorted_ids(tasks, [](const Task& t) { return t.comp_time; },
                        true);
    case K::IOCCS:
      return sorted_ids(
          tasks, [](const Task& t) { return t.comm_time + t.comp_time; },
          false);
    case K::DOCCS:
      return sorted_ids(
          tasks, [](const Task& t) { return t.comm_time + t.comp_time; },
          true);
    default:
      throw std::invalid_argument("static_order: not a static heuristic: " +
                                  to_string(id));
  }
}

// ---------------------------------------------------------------------------
// Gilmore-Gomory sequencing.
//
// Each task enters the sequence needing the link for comm_time and leaves it
// busy computing for comp_time; the transition i -> j stalls the processor
// for (comm_j - comp_i)+ under no-wait semantics. Minimizing the total stall
// over a sequence is the one-state-variable sequencing problem: match sorted
// "entry" values against sorted "exit" values, then patch the resulting
// assignment cycles into a single tour with minimum-cost interchanges of
// neighbouring positions. A virtual job with zero entry and an exit larger
// than every value turns the open sequence into a tour at zero cost; cutting
// the tour at the virtual job yields the sequence.

namespace {

struct GgJob {
  TaskId id;     // -1 for the virtual boundary job
  double entry;  // comm time: value required to start
  double exit;   // comp time: value left behind
};

double gg_edge(const GgJob& from, const GgJob& to) {
  return std::max(0.0, to.entry - from.exit);
}

struct DisjointSets {
  std::vector<int> parent;
  explicit DisjointSets(int n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[b] = a;
    return true;
  }
};

}  // namespace

double gg_order_cost(std::span<const Task> tasks,
                     std::span<const TaskId> order) {
  double cost = 0.0;
  for (std::size_t i = 0; i + 1 < order.size(); ++i) {
    const Task* from = nullptr;
    const Task* to = nullptr;
    for (const Task& t : tasks) {
      if (t.id == order[i]) from = &t;
      if (t.id == order[i + 1]) to = &t;
    }
    if (from == nullptr || to == nullptr) {
      throw std::invalid_argument("order references an unknown task");
    }
    cost += std::max(0.0, to->comm_time - from->comp_time);
  }
  return cost;
}

std::vector<TaskId> gilmore_gomory_order(std::span<const Task> tasks) {
  const int n = static_cast<int>(tasks.size());
  if (n <= 1) {
    std::vector<TaskId> out;
    for (const Task& t : tasks) out.push_back(t.id);
    return out;
  }

  double big = 1.0;
  for (const Task& t : tasks) {
    big = std::max(big, std::max(t.comm_time, t.comp_time) + 1.0);
  }

  std::vector<GgJob> jobs;
  jobs.reserve(n + 1);
  jobs.push_back({-1, 0.0, big});  // virtual boundary job
  for (const Task& t : tasks) jobs.push_back({t.id, t.comm_time, t.comp_time});
  const int m = n + 1;

  // Positions ordered by exit value; entry values matched in sorted order.
  std::vector<int> by_exit(m), by_entry(m);
  std::iota(by_exit.begin(), by_exit.end(), 0);
  std::iota(by_entry.begin(), by_entry.end(), 0);
  std::sort(by_exit.begin(), by_exit.end(), [&](int a, int b) {
    if (!approx_eq(jobs[a].exit, jobs[b].exit)) {
      return jobs[a].exit < jobs[b].exit;
    }
    return jobs[a].id < jobs[b].id;
  });
  std::sort(by_entry.begin(), by_entry.end(), [&](int a, int b) {
    if (!approx_eq(jobs[a].entry, jobs[b].entry)) {
      return jobs[a].entry < jobs[b].entry;
    }
    return jobs[a].id < jobs[b].id;
  });

  // successor[j]: job whose entry follows job j's exit in the assignment.
  std::vector<int> successor(m);
  for (int k = 0; k < m; ++k) successor[by_exit[k]] = by_entry[k];

  // Cycle structure of the assignment.
  std::vector<int> cycle(m, -1);
  int cycle_count = 0;
  for (int start = 0; start < m; ++start) {
    if (cycle[start] != -1) continue;
    for (int j = start; cycle[j] == -1; j = successor[j]) {
      cycle[j] = cycle_count;
    }
    ++cycle_count;
  }

  if (cycle_count > 1) {
    // Candidate interchanges swap the assigned entries of two neighbouring
    // exit positions; each merges the two cycles those positions belong to.
    struct Swap {
      int pos;  // between by_exit[pos] and by_exit[pos + 1]
      double delta;
    };
    std::vector<Swap> candidates;
    for (int k = 0; k + 1 < m; ++k) {
      const GgJob& lo = jobs[by_exit[k]];
      const GgJob& hi = jobs[by_exit[k + 1]];
      const GgJob& lo_entry = jobs[by_entry[k]];
      const GgJob& hi_entry = jobs[by_entry[k + 1]];
      const double delta = gg_edge(lo, hi_entry) + gg_edge(hi, lo_entry) -
                           gg_edge(lo, lo_entry) - gg_edge(hi, hi_entry);
      candidates.push_back({k, delta});
    }
    std::sort(candidates.begin(), candidates.end(),
              [&](const Swap& a, const Swap& b) {
                if (!approx_eq(a.delta, b.delta)) return a.delta < b.delta;
                const auto pair_of = [&](const Swap& s) {
                  return std::pair(jobs[by_exit[s.pos]].id,
                                   jobs[by_exit[s.pos + 1]].id);
                };
                return pair_of(a) < pair_of(b);
              });

    DisjointSets components(cycle_count);
    std::vector<int> selected;
    for (const Swap& s : candidates) {
      if (components.unite(cycle[by_exit[s.pos]],
                           cycle[by_exit[s.pos + 1]])) {
        selected.push_back(s.pos);
      }
    }
    std::sort(selected.begin(), selected.end());

    // Neighbouring selected interchanges share a position; the one applied
    // first is decided by whether the shared position's assigned entry still
    // sits below its exit. Other pairs commute.
    const int r = static_cast<int>(selected.size());
    std::vector<std::vector<int>> after(r);
    std::vector<int> indegree(r, 0);
    for (int i = 0; i + 1 < r; ++i) {
      if (selected[i] + 1 != selected[i + 1]) continue;
      const int shared = selected[i] + 1;
      const bool lower_first =
          approx_le(jobs[by_entry[shared]].entry, jobs[by_exit[shared]].exit);
      if (lower_first) {
        after[i].push_back(i + 1);
        ++indegree[i + 1];
      } else {
        after[i + 1].push_back(i);
        ++indegree[i];
      }
    }
    std::vector<int> ready;
    for (int i = 0; i < r; ++i) {
      if (indegree[i] == 0) ready.push_back(i);
    }
    std::vector<int> application;
    while (!ready.empty()) {
      std::sort(ready.begin(), ready.end(), std::greater<>());
      const int i = ready.back();
      ready.pop_back();
      application.push_back(i);
      for (int next : after[i]) {
        if (--indegree[next] == 0) ready.push_back(next);
      }
    }

    for (int i : application) {
      const int k = selected[i];
      std::swap(successor[by_exit[k]], successor[by_exit[k + 1]]);
    }
  }

  // Cut the tour at the virtual job.
  std::vector<TaskId> order;
  order.reserve(n);
  for (int j = successor[0]; j != 0; j = successor[j]) {
    order.push_back(jobs[j].id);
    if (static_cast<int>(order.size()) > n) {
      throw std::logic_error("interchange pass left more than one cycle");
    }
  }
  if (static_cast<int>(order.size()) != n) {
    throw std::logic_error("interchange pass left more than one cycle");
  }

  // Canonicalize among equal-cost sequences: adjacent transpositions that
  // leave the total cost unchanged settle into id order.
  std::unordered_map<TaskId, const Task*> by_id;
  by_id.reserve(tasks.size());
  for (const Task& t : tasks) by_id.emplace(t.id, &t);
  auto task_of = [&](TaskId id) -> const Task& { return *by_id.at(id); };
  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = 0; i + 1 < n; ++i) {
      if (order[i] <= order[i + 1]) continue;
      const Task& x = task_of(order[i]);
      const Task& y = task_of(order[i + 1]);
      const double before_x =
          i > 0 ? task_of(order[i - 1]).comp_time
                : std::numeric_limits<double>::infinity();
      const double after_y =
          i + 2 < n ? task_of(order[i + 2]).comm_time : 0.0;
      const double old_cost = std::max(0.0, x.comm_time - before_x) +
                              std::max(0.0, y.comm_time - x.comp_time) +
                              std::max(0.0, after_y - y.comp_time);
      const double new_cost = std::max(0.0, y.comm_time - before_x) +
                              std::max(0.0, x.comm_time - y.comp_time) +
                              std::max(0.0, after_y - x.comp_time);
      if (approx_eq(old_cost, new_cost)) {
        std::swap(order[i], order[i + 1]);
        changed = true;
      }
    }
  }
  return order;
}

std::vector<TaskId> bin_packing_order(std::span<const Task> tasks,
                                      double capacity) {
  struct Bin {
    double load = 0.0;
    std::vector<TaskId> members;
  };
  std::vector<Bin> bins;
  for (const Task& t : tasks) {
    if (!approx_le(t.mem_req, capacity)) {
      throw infeasible_error("task " + std::to_string(t.id) +
                             " does not fit in a bin of capacity " +
                             std::to_string(capacity));
    }
    bool placed = false;
    for (Bin& bin : bins) {
      if (approx_le(bin.load + t.mem_req, capacity)) {
        bin.load += t.mem_req;
        bin.members.push_back(t.id);
        placed = true;
        break;
      }
    }
    if (!placed) bins.push_back({t.mem_req, {t.id}});
  }
  std::vector<TaskId> out;
  out.reserve(tasks.size());
  for (const Bin& bin : bins) {
    out.insert(out.end(), bin.members.begin(), bin.members.end());
  }
  return out;
}

HeuristicRun run_heuristic(const Instance& instance, HeuristicId id) {
  using K = HeuristicId::Kind;
  Schedule schedule;
  switch (id.kind) {
    case K::OS:
    case K::OOSIM:
    case K::IOCMS:
    case K::DOCPS:
    case K::IOCCS:
    case K::DOCCS:
      schedule = list_schedule(instance, static_order(instance.tasks(), id));
      break;
    case K::GG:
      schedule =
          list_schedule(instance, gilmore_gomory_order(instance.tasks()));
      break;
    case K::BP:
      schedule = list_schedule(
          instance, bin_packing_order(instance.tasks(), instance.capacity()));
      break;
    case K::LCMR:
      schedule = dynamic_schedule(instance, Selector::LargestComm);
      break;
    case K::SCMR:
      schedule = dynamic_schedule(instance, Selector::SmallestComm);
      break;
    case K::MAMR:
      schedule = dynamic_schedule(instance, Selector::MaxRatio);
      break;
    case K::OOLCMR:
      schedule = corrected_schedule(instance, johnson_order(instance.tasks()),
                                    Selector::LargestComm);
      break;
    case K::OOSCMR:
      schedule = corrected_schedule(instance, johnson_order(instance.tasks()),
                                    Selector::SmallestComm);
      break;
    case K::OOMAMR:
      schedule = corrected_schedule(instance, johnson_order(instance.tasks()),
                                    Selector::MaxRatio);
      break;
    case K::LpK:
      schedule = lp_k(instance, id.window);
      break;
  }

  HeuristicRun run;
  run.heuristic = id;
  run.schedule = std::move(schedule);
  run.makespan = run.schedule.makespan();
  const double lower = omim(instance.tasks());
  if (lower > kEps) {
    run.ratio = run.makespan / lower;
  } else {
    run.ratio = run.makespan <= kEps
                    ? 1.0
                    : std::numeric_limits<double>::infinity();
  }
  return run;
}

}  // namespace dtsched
