#include "dtsched/core.hpp"

#include <algorithm>
#include <array>
#include <tuple>

namespace dtsched {

Instance::Instance(std::vector<Task> tasks, double capacity)
    : tasks_(std::move(tasks)), capacity_(capacity) {
  if (capacity_ < 0.0) {
    throw std::invalid_argument("instance capacity must be non-negative");
  }
  index_.reserve(tasks_.size());
  for (std::size_t i = 0; i < tasks_.size(); ++i) {
    const Task& t = tasks_[i];
    if (t.id < 0) {
      throw std::invalid_argument("task id must be non-negative: " +
                                  std::to_string(t.id));
    }
    if (t.comm_time < 0.0 || t.comp_time < 0.0 || t.mem_req < 0.0) {
      throw std::invalid_argument("task " + std::to_string(t.id) +
                                  " has a negative duration or memory size");
    }
    if (!index_.emplace(t.id, i).second) {
      throw std::invalid_argument("duplicate task id " + std::to_string(t.id));
    }
  }
}

const Task* Instance::find(TaskId id) const {
  auto it = index_.find(id);
  return it == index_.end() ? nullptr : &tasks_[it->second];
}

const Task& Instance::task(TaskId id) const {
  const Task* t = find(id);
  if (t == nullptr) {
    throw std::invalid_argument("unknown task id " + std::to_string(id));
  }
  return *t;
}

void Schedule::add(ScheduleEntry entry) {
  auto pos = std::lower_bound(
      entries_.begin(), entries_.end(), entry.id,
      [](const ScheduleEntry& e, TaskId id) { return e.id < id; });
  if (pos != entries_.end() && pos->id == entry.id) {
    throw std::invalid_argument("schedule already contains task " +
                                std::to_string(entry.id));
  }
  entries_.insert(pos, entry);
}

const ScheduleEntry* Schedule::find(TaskId id) const {
  auto pos = std::lower_bound(
      entries_.begin(), entries_.end(), id,
      [](const ScheduleEntry& e, TaskId i) { return e.id < i; });
  return (pos != entries_.end() && pos->id == id) ? &*pos : nullptr;
}

const ScheduleEntry& Schedule::at(TaskId id) const {
  const ScheduleEntry* e = find(id);
  if (e == nullptr) {
    throw std::invalid_argument("schedule has no entry for task " +
                                std::to_string(id));
  }
  return *e;
}

double Schedule::makespan() const {
  double out = 0.0;
  for (const ScheduleEntry& e : entries_) out = std::max(out, e.comp_end);
  return out;
}

std::string to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::CommOverlap: return "comm_overlap";
    case ViolationKind::CompOverlap: return "comp_overlap";
    case ViolationKind::Precedence: return "precedence";
    case ViolationKind::Memory: return "memory";
  }
  return "?";
}

namespace {

// Half-open interval overlap; zero-length intervals overlap nothing.
bool intervals_overlap(double s1, double e1, double s2, double e2) {
  return approx_lt(std::max(s1, s2), std::min(e1, e2));
}

}  // namespace

ValidationReport validate_schedule(const Instance& instance,
                                   const Schedule& schedule) {
  if (schedule.size() != instance.size()) {
    throw std::invalid_argument(
        "schedule does not cover the instance: expected " +
        std::to_string(instance.size()) + " tasks, got " +
        std::to_string(schedule.size()));
  }

  // Rebuild end times from the instance's durations; entries are trusted for
  // their starts only.
  struct Timed {
    const Task* task;
    double comm_start, comm_end, comp_start, comp_end;
  };
  std::vector<Timed> timed;
  timed.reserve(schedule.size());
  for (const ScheduleEntry& e : schedule.entries()) {
    const Task& t = instance.task(e.id);  // throws on unknown id
    if (e.comm_start < 0.0 || e.comp_start < 0.0) {
      throw std::invalid_argument("negative start time for task " +
                                  std::to_string(e.id));
    }
    timed.push_back({&t, e.comm_start, e.comm_start + t.comm_time,
                     e.comp_start, e.comp_start + t.comp_time});
  }

  ValidationReport report;
  auto flag = [&report](ViolationKind kind, std::vector<TaskId> ids,
                        double time) {
    report.feasible = false;
    report.violations.push_back({kind, std::move(ids), time});
  };

  // (a) and (b): exclusive use of each resource.
  auto check_exclusive = [&](auto start_of, auto end_of, ViolationKind kind) {
    std::vector<const Timed*> order;
    order.reserve(timed.size());
    for (const Timed& t : timed) order.push_back(&t);
    std::sort(order.begin(), order.end(), [&](const Timed* a, const Timed* b) {
      return std::tie(start_of(*a), a->task->id) <
             std::tie(start_of(*b), b->task->id);
    });
    for (std::size_t i = 0; i + 1 < order.size(); ++i) {
      const Timed& a = *order[i];
      const Timed& b = *order[i + 1];
      if (intervals_overlap(start_of(a), end_of(a), start_of(b), end_of(b))) {
        flag(kind, {a.task->id, b.task->id}, std::max(start_of(a), start_of(b)));
      }
    }
  };
  check_exclusive([](const Timed& t) -> const double& { return t.comm_start; },
                  [](const Timed& t) -> const double& { return t.comm_end; },
                  ViolationKind::CommOverlap);
  check_exclusive([](const Timed& t) -> const double& { return t.comp_start; },
                  [](const Timed& t) -> const double& { return t.comp_end; },
                  ViolationKind::CompOverlap);

  // (c) computation needs its input on board.
  for (const Timed& t : timed) {
    if (approx_lt(t.comp_start, t.comm_end)) {
      flag(ViolationKind::Precedence, {t.task->id}, t.comp_start);
    }
  }

  // (d) memory bound at every transfer start. A task whose computation ends
  // exactly at the instant has already released; a transfer starting at the
  // instant already holds.
  for (const Timed& at : timed) {
    const double t = at.comm_start;
    double used = 0.0;
    std::vector<TaskId> live;
    for (const Timed& other : timed) {
      if (approx_le(other.comm_start, t) && approx_lt(t, other.comp_end)) {
        used += other.task->mem_req;
        live.push_back(other.task->id);
      }
    }
    if (!approx_le(used, instance.capacity())) {
      std::sort(live.begin(), live.end());
      flag(ViolationKind::Memory, std::move(live), t);
    }
  }

  return report;
}

double min_capacity(std::span<const Task> tasks) {
  if (tasks.empty()) {
    throw std::invalid_argument("min_capacity of an empty task list");
  }
  double out = 0.0;
  for (const Task& t : tasks) out = std::max(out, t.mem_req);
  return out;
}

WorkloadBounds workload_bounds(std::span<const Task> tasks) {
  WorkloadBounds b;
  for (const Task& t : tasks) {
    b.sum_comm += t.comm_time;
    b.sum_comp += t.comp_time;
  }
  b.lower = std::max(b.sum_comm, b.sum_comp);
  b.upper = b.sum_comm + b.sum_comp;
  return b;
}

Schedule schedule_from_starts(
    const Instance& instance,
    std::span<const std::tuple<TaskId, double, double>> starts) {
  Schedule out;
  for (const auto& [id, comm_start, comp_start] : starts) {
    const Task& t = instance.task(id);
    out.add({id, comm_start, comm_start + t.comm_time, comp_start,
             comp_start + t.comp_time});
  }
  if (out.size() != instance.size()) {
    throw std::invalid_argument("schedule does not cover the instance");
  }
  return out;
}

namespace {

constexpr std::array<std::pair<HeuristicId::Kind, const char*>, 15> kNames{{
    {HeuristicId::Kind::OS, "OS"},
    {HeuristicId::Kind::OOSIM, "OOSIM"},
    {HeuristicId::Kind::IOCMS, "IOCMS"},
    {HeuristicId::Kind::DOCPS, "DOCPS"},
    {HeuristicId::Kind::IOCCS, "IOCCS"},
    {HeuristicId::Kind::DOCCS, "DOCCS"},
    {HeuristicId::Kind::GG, "GG"},
    {HeuristicId::Kind::BP, "BP"},
    {HeuristicId::Kind::LCMR, "LCMR"},
    {HeuristicId::Kind::SCMR, "SCMR"},
    {HeuristicId::Kind::MAMR, "MAMR"},
    {HeuristicId::Kind::OOLCMR, "OOLCMR"},
    {HeuristicId::Kind::OOSCMR, "OOSCMR"},
    {HeuristicId::Kind::OOMAMR, "OOMAMR"},
    {HeuristicId::Kind::LpK, "lp"},
}};

const std::array<HeuristicId, 14> kOrderHeuristics = [] {
  std::array<HeuristicId, 14> out{};
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = HeuristicId{kNames[i].first, 0};
  }
  return out;
}();

}  // namespace

std::string to_string(const HeuristicId& id) {
  if (id.kind == HeuristicId::Kind::LpK) {
    return "lp." + std::to_string(id.window);
  }
  for (const auto& [kind, name] : kNames) {
    if (kind == id.kind) return name;
  }
  return "?";
}

HeuristicId parse_heuristic(const std::string& name) {
  std::string upper;
  upper.reserve(name.size());
  for (char c : name) upper.push_back(static_cast<char>(std::toupper(c)));
  for (const auto& [kind, known] : kNames) {
    if (kind != HeuristicId::Kind::LpK && upper == known) return {kind, 0};
  }
  if (upper.rfind("LP.", 0) == 0 || upper.rfind("LP_", 0) == 0) {
    try {
      int k = std::stoi(upper.substr(3));
      return HeuristicId::lp_k(k);
    } catch (const std::exception&) {
    }
  }
  throw std::invalid_argument("unknown heuristic name: " + name);
}

std::span<const HeuristicId> all_order_heuristics() {
  return {kOrderHeuristics.data(), kOrderHeuristics.size()};
}

}  // namespace dtsched
