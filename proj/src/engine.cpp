#include "dtsched/engine.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <unordered_set>

namespace dtsched {

std::string to_string(Selector s) {
  switch (s) {
    case Selector::LargestComm: return "largest_comm";
    case Selector::SmallestComm: return "smallest_comm";
    case Selector::MaxRatio: return "max_ratio";
  }
  return "?";
}

namespace {

void check_order_is_permutation(const Instance& instance,
                                std::span<const TaskId> order) {
  if (order.size() != instance.size()) {
    throw std::invalid_argument("order must cover every task exactly once");
  }
  std::unordered_set<TaskId> seen;
  for (TaskId id : order) {
    instance.task(id);  // throws on unknown id
    if (!seen.insert(id).second) {
      throw std::invalid_argument("order repeats task " + std::to_string(id));
    }
  }
}

void check_fits_alone(const Instance& instance) {
  for (const Task& t : instance.tasks()) {
    if (!approx_le(t.mem_req, instance.capacity())) {
      throw infeasible_error("task " + std::to_string(t.id) + " needs " +
                             std::to_string(t.mem_req) +
                             " memory but capacity is " +
                             std::to_string(instance.capacity()));
    }
  }
}

// Tasks holding memory, released in FIFO order: with identical orders on
// both resources, computation ends are non-decreasing.
class LiveSet {
 public:
  void release_until(double t) {
    while (!q_.empty() && approx_le(q_.front().comp_end, t)) {
      mem_ -= q_.front().mem;
      q_.pop_front();
    }
  }

  // Earliest pending release, strictly needed to be > current time by the
  // caller's loop structure.
  double next_release() const { return q_.front().comp_end; }
  bool empty() const { return q_.empty(); }
  double mem() const { return mem_; }

  void add(double comp_end, double mem) {
    q_.push_back({comp_end, mem});
    mem_ += mem;
  }

 private:
  struct Entry {
    double comp_end;
    double mem;
  };
  std::deque<Entry> q_;
  double mem_ = 0.0;
};

double selector_key(Selector s, const Task& t) {
  switch (s) {
    case Selector::LargestComm: return t.comm_time;
    case Selector::SmallestComm: return -t.comm_time;
    case Selector::MaxRatio:
      return t.comm_time <= kEps ? std::numeric_limits<double>::infinity()
                                 : t.comp_time / t.comm_time;
  }
  return 0.0;
}

// Larger key wins; near-equal keys fall through to the smaller id.
const Task* pick(Selector s, const std::vector<const Task*>& candidates) {
  const Task* best = nullptr;
  double best_key = -std::numeric_limits<double>::infinity();
  for (const Task* t : candidates) {
    const double key = selector_key(s, *t);
    if (best == nullptr || key > best_key + kEps) {
      best = t;
      best_key = key;
    } else if (key > best_key - kEps) {
      if (t->id < best->id) best = t;
      best_key = std::max(best_key, key);
    }
  }
  return best;
}

}  // namespace

Schedule list_schedule(const Instance& instance,
                       std::span<const TaskId> order) {
  check_order_is_permutation(instance, order);
  check_fits_alone(instance);

  Schedule out;
  LiveSet live;
  double tau_comm = 0.0;
  double tau_comp = 0.0;
  for (TaskId id : order) {
    const Task& t = instance.task(id);
    double start = tau_comm;
    live.release_until(start);
    while (!approx_le(live.mem() + t.mem_req, instance.capacity())) {
      start = live.next_release();
      live.release_until(start);
    }
    const double comm_end = start + t.comm_time;
    const double comp_start = std::max(comm_end, tau_comp);
    const double comp_end = comp_start + t.comp_time;
    out.add({id, start, comm_end, comp_start, comp_end});
    live.add(comp_end, t.mem_req);
    tau_comm = comm_end;
    tau_comp = comp_end;
  }
  return out;
}

Schedule infinite_schedule(std::span<const Task> tasks,
                           std::span<const TaskId> order) {
  Instance unbounded(std::vector<Task>(tasks.begin(), tasks.end()),
                     std::numeric_limits<double>::infinity());
  return list_schedule(unbounded, order);
}

double peak_memory(std::span<const Task> tasks, const Schedule& schedule) {
  double peak = 0.0;
  for (const Task& at : tasks) {
    const ScheduleEntry& e = schedule.at(at.id);
    const double t = e.comm_start;
    double used = 0.0;
    for (const Task& other : tasks) {
      const ScheduleEntry& o = schedule.at(other.id);
      if (approx_le(o.comm_start, t) && approx_lt(t, o.comp_end)) {
        used += other.mem_req;
      }
    }
    peak = std::max(peak, used);
  }
  return peak;
}

Schedule dynamic_schedule(const Instance& instance, Selector selector) {
  check_fits_alone(instance);

  std::vector<const Task*> remaining;
  remaining.reserve(instance.size());
  for (const Task& t : instance.tasks()) remaining.push_back(&t);

  Schedule out;
  LiveSet live;
  double tau_comm = 0.0;
  double tau_comp = 0.0;
  std::vector<const Task*> candidates;
  while (!remaining.empty()) {
    double t = tau_comm;
    live.release_until(t);
    for (;;) {
      candidates.clear();
      for (const Task* task : remaining) {
        if (approx_le(live.mem() + task->mem_req, instance.capacity())) {
          candidates.push_back(task);
        }
      }
      if (!candidates.empty()) break;
      t = live.next_release();
      live.release_until(t);
    }

    // Keep only the picks that stall the processor least.
    double min_idle = std::numeric_limits<double>::infinity();
    for (const Task* task : candidates) {
      min_idle = std::min(min_idle,
                          std::max(0.0, t + task->comm_time - tau_comp));
    }
    std::erase_if(candidates, [&](const Task* task) {
      return std::max(0.0, t + task->comm_time - tau_comp) > min_idle + kEps;
    });

    const Task* chosen = pick(selector, candidates);
    const double comm_end = t + chosen->comm_time;
    const double comp_start = std::max(comm_end, tau_comp);
    const double comp_end = comp_start + chosen->comp_time;
    out.add({chosen->id, t, comm_end, comp_start, comp_end});
    live.add(comp_end, chosen->mem_req);
    tau_comm = comm_end;
    tau_comp = comp_end;
    std::erase(remaining, chosen);
  }
  return out;
}

Schedule corrected_schedule(const Instance& instance,
                            std::span<const TaskId> base_order,
                            Selector selector) {
  check_order_is_permutation(instance, base_order);
  check_fits_alone(instance);

  std::vector<const Task*> remaining;
  remaining.reserve(base_order.size());
  for (TaskId id : base_order) remaining.push_back(&instance.task(id));

  Schedule out;
  LiveSet live;
  double tau_comm = 0.0;
  double tau_comp = 0.0;
  std::vector<const Task*> candidates;
  while (!remaining.empty()) {
    double t = tau_comm;
    live.release_until(t);

    const Task* chosen = nullptr;
    for (;;) {
      const Task* head = remaining.front();
      if (approx_le(live.mem() + head->mem_req, instance.capacity())) {
        chosen = head;
        break;
      }
      candidates.clear();
      for (const Task* task : remaining) {
        if (approx_le(live.mem() + task->mem_req, instance.capacity())) {
          candidates.push_back(task);
        }
      }
      if (candidates.empty()) {
        // Nothing fits; idle the link until the next release and retry the
        // head of the order first.
        t = live.next_release();
        live.release_until(t);
        continue;
      }
      double min_idle = std::numeric_limits<double>::infinity();
      for (const Task* task : candidates) {
        min_idle = std::min(min_idle,
                            std::max(0.0, t + task->comm_time - tau_comp));
      }
      std::erase_if(candidates, [&](const Task* task) {
        return std::max(0.0, t + task->comm_time - tau_comp) > min_idle + kEps;
      });
      chosen = pick(selector, candidates);
      break;
    }

    const double comm_end = t + chosen->comm_time;
    const double comp_start = std::max(comm_end, tau_comp);
    const double comp_end = comp_start + chosen->comp_time;
    out.add({chosen->id, t, comm_end, comp_start, comp_end});
    live.add(comp_end, chosen->mem_req);
    tau_comm = comm_end;
    tau_comp = comp_end;
    std::erase(remaining, chosen);
  }
  return out;
}

}  // namespace dtsched
