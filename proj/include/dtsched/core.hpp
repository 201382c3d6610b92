#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

// Core domain types for scheduling data transfers of independent tasks
// between two memory nodes: one communication link feeding one processor,
// with a bounded amount of memory on the receiving side. A task holds its
// memory from the start of its transfer to the end of its computation.

namespace dtsched {

using TaskId = int;

// All durations and sizes are non-negative doubles in abstract units.
// Comparisons throughout the library use this absolute tolerance.
inline constexpr double kEps = 1e-9;

inline bool approx_le(double a, double b) { return a <= b + kEps; }
inline bool approx_lt(double a, double b) { return a < b - kEps; }
inline bool approx_ge(double a, double b) { return a >= b - kEps; }
inline bool approx_eq(double a, double b) { return std::fabs(a - b) <= kEps; }

/// Raised when an instance cannot be scheduled at all under its capacity
/// (some task needs more memory than the machine has). Distinct from
/// std::invalid_argument, which signals malformed input.
struct infeasible_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One unit of work: transfer `comm_time` worth of input data, then compute
/// for `comp_time`. `mem_req` is held from transfer start to compute end.
struct Task {
  TaskId id = 0;
  double comm_time = 0.0;
  double comp_time = 0.0;
  double mem_req = 0.0;
};

/// A task set plus the memory capacity of the receiving node. Tasks keep
/// their submission order. Immutable after construction.
class Instance {
 public:
  Instance() = default;
  Instance(std::vector<Task> tasks, double capacity);

  const std::vector<Task>& tasks() const { return tasks_; }
  double capacity() const { return capacity_; }
  std::size_t size() const { return tasks_.size(); }
  bool empty() const { return tasks_.empty(); }

  const Task* find(TaskId id) const;
  /// Throws std::invalid_argument for an unknown id.
  const Task& task(TaskId id) const;

 private:
  std::vector<Task> tasks_;
  double capacity_ = 0.0;
  std::unordered_map<TaskId, std::size_t> index_;
};

struct ScheduleEntry {
  TaskId id = 0;
  double comm_start = 0.0;
  double comm_end = 0.0;
  double comp_start = 0.0;
  double comp_end = 0.0;
};

/// Start/end times per task on both resources. Entries are kept sorted by
/// task id; insertion order carries no meaning.
class Schedule {
 public:
  Schedule() = default;

  void add(ScheduleEntry entry);
  const ScheduleEntry* find(TaskId id) const;
  const ScheduleEntry& at(TaskId id) const;

  const std::vector<ScheduleEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  /// Completion time of the last computation; 0 for an empty schedule.
  double makespan() const;

 private:
  std::vector<ScheduleEntry> entries_;  // sorted by id
};

inline double makespan(const Schedule& s) { return s.makespan(); }

enum class ViolationKind { CommOverlap, CompOverlap, Precedence, Memory };

std::string to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::vector<TaskId> tasks;
  double time = 0.0;
};

struct ValidationReport {
  bool feasible = true;
  std::vector<Violation> violations;
};

/// Checks a schedule against an instance: exclusive use of each resource,
/// computation after transfer per task, and the memory bound. Memory in use
/// at time t is the sum of mem_req over tasks with comm_start <= t < comp_end
/// (half-open: a release at t does not conflict with an acquisition at t).
/// Usage only grows at transfer starts, so those instants are the only ones
/// checked. Throws std::invalid_argument if the schedule does not cover
/// exactly the instance's tasks or contains negative times.
ValidationReport validate_schedule(const Instance& instance,
                                   const Schedule& schedule);

/// Smallest capacity at which every task can run: max over mem_req.
/// Throws std::invalid_argument on an empty list.
double min_capacity(std::span<const Task> tasks);

struct WorkloadBounds {
  double sum_comm = 0.0;
  double sum_comp = 0.0;
  double lower = 0.0;  // max of the two sums; no schedule can beat it
  double upper = 0.0;  // their total; the zero-overlap sequential makespan
};

WorkloadBounds workload_bounds(std::span<const Task> tasks);

/// Builds a schedule from bare (comm_start, comp_start) pairs, deriving the
/// end times from the instance's task durations. Input errors throw.
Schedule schedule_from_starts(
    const Instance& instance,
    std::span<const std::tuple<TaskId, double, double>> starts);

/// Names every ordering strategy the library implements. LpK carries the
/// window size of the iterative exact-window heuristic (lp.3 .. lp.6).
struct HeuristicId {
  enum class Kind {
    OS,      // order of submission
    OOSIM,   // order of the optimal infinite-memory schedule
    IOCMS,   // increasing communication time
    DOCPS,   // decreasing computation time
    IOCCS,   // increasing comm+comp
    DOCCS,   // decreasing comm+comp
    GG,      // Gilmore-Gomory no-wait sequence
    BP,      // first-fit bin packing by memory
    LCMR,    // dynamic, largest communication first
    SCMR,    // dynamic, smallest communication first
    MAMR,    // dynamic, max comp/comm ratio first
    OOLCMR,  // corrected static order, largest communication
    OOSCMR,  // corrected static order, smallest communication
    OOMAMR,  // corrected static order, max ratio
    LpK,     // iterative exact windows of size k
  };

  Kind kind = Kind::OS;
  int window = 0;  // only meaningful for LpK

  friend bool operator==(const HeuristicId&, const HeuristicId&) = default;

  static HeuristicId lp_k(int k) { return {Kind::LpK, k}; }
};

std::string to_string(const HeuristicId& id);

/// Parses names as printed by to_string ("OOSIM", "lp.4", ...). Accepts any
/// letter case. Throws std::invalid_argument for unknown names.
HeuristicId parse_heuristic(const std::string& name);

/// The full catalog in presentation order, lp.k excluded.
std::span<const HeuristicId> all_order_heuristics();

}  // namespace dtsched
