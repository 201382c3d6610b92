#include "dtsched/exact.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdint>
#include <limits>
#include <numeric>
#include <unordered_map>

#include "dtsched/engine.hpp"
#include "dtsched/johnson.hpp"
#include "dtsched/trace_io.hpp"

namespace dtsched {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Strictly-later comparison used for half-open release semantics: an event
// ending at t has released by instant t.
bool still_held_at(double end, double t) { return !approx_le(end, t); }

double pending_live(const std::vector<std::pair<double, double>>& releases,
                    double t) {
  double mem = 0.0;
  for (const auto& [end, size] : releases) {
    if (still_held_at(end, t)) mem += size;
  }
  return mem;
}

}  // namespace

std::optional<Schedule> simulate_pair(std::span<const Task> tasks,
                                      double capacity, const ExactInit& init,
                                      std::span<const TaskId> comm_order,
                                      std::span<const TaskId> comp_order) {
  const std::size_t n = tasks.size();
  if (comm_order.size() != n || comp_order.size() != n) {
    throw std::invalid_argument("orders must cover every task exactly once");
  }
  std::unordered_map<TaskId, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) index.emplace(tasks[i].id, i);
  auto pos_of = [&](TaskId id) {
    auto it = index.find(id);
    if (it == index.end()) {
      throw std::invalid_argument("order references unknown task " +
                                  std::to_string(id));
    }
    return it->second;
  };

  std::vector<double> comm_start(n, -1.0), comm_end(n, -1.0);
  std::vector<double> comp_start(n, -1.0), comp_end(n, -1.0);
  double tau_comm = init.tau_comm;
  double tau_comp = init.tau_comp;

  std::size_t next_comp = 0;
  auto drain_comps = [&] {
    while (next_comp < n) {
      const std::size_t v = pos_of(comp_order[next_comp]);
      if (comm_end[v] < 0.0) break;  // its transfer is not scheduled yet
      comp_start[v] = std::max(tau_comp, comm_end[v]);
      comp_end[v] = comp_start[v] + tasks[v].comp_time;
      tau_comp = comp_end[v];
      ++next_comp;
    }
  };

  for (TaskId id : comm_order) {
    drain_comps();
    const std::size_t u = pos_of(id);
    if (!approx_le(tasks[u].mem_req, capacity)) {
      throw infeasible_error("task " + std::to_string(id) +
                             " exceeds the memory capacity");
    }

    // Memory frees only at computation ends; try the link-free instant and
    // then each later release.
    std::vector<double> candidates{tau_comm};
    for (const auto& [end, size] : init.pending_releases) {
      (void)size;
      if (end > tau_comm) candidates.push_back(end);
    }
    for (std::size_t v = 0; v < n; ++v) {
      if (comp_end[v] > tau_comm) candidates.push_back(comp_end[v]);
    }
    std::sort(candidates.begin(), candidates.end());

    double chosen = -1.0;
    for (double t : candidates) {
      double used = pending_live(init.pending_releases, t);
      for (std::size_t v = 0; v < n; ++v) {
        if (comm_start[v] < 0.0) continue;
        const bool live =
            comp_end[v] < 0.0 || still_held_at(comp_end[v], t);
        if (live) used += tasks[v].mem_req;
      }
      if (approx_le(used + tasks[u].mem_req, capacity)) {
        chosen = t;
        break;
      }
    }
    if (chosen < 0.0) return std::nullopt;  // deadlocked pair

    comm_start[u] = chosen;
    comm_end[u] = chosen + tasks[u].comm_time;
    tau_comm = comm_end[u];
  }
  drain_comps();
  if (next_comp != n) return std::nullopt;

  Schedule out;
  for (std::size_t i = 0; i < n; ++i) {
    out.add({tasks[i].id, comm_start[i], comm_end[i], comp_start[i],
             comp_end[i]});
  }
  return out;
}

SameOrderResult brute_force_same_order(const Instance& instance,
                                       std::size_t limit) {
  if (instance.size() > limit) {
    throw std::invalid_argument(
        "instance too large for exhaustive order search (" +
        std::to_string(instance.size()) + " tasks, limit " +
        std::to_string(limit) + ")");
  }
  if (instance.empty()) return {{}, 0.0};

  std::vector<TaskId> order;
  order.reserve(instance.size());
  for (const Task& t : instance.tasks()) order.push_back(t.id);
  std::sort(order.begin(), order.end());

  SameOrderResult best;
  best.makespan = kInf;
  do {
    const double ms = list_schedule(instance, order).makespan();
    if (ms < best.makespan - 1e-12) {
      best.makespan = ms;
      best.order = order;
    }
  } while (std::next_permutation(order.begin(), order.end()));
  return best;
}

// ---------------------------------------------------------------------------
// Free-order branch and bound.
//
// The search commits events (transfer starts, computation starts) one at a
// time in chronological order. Committing greedily-earliest events over all
// interleavings covers the earliest-start schedule of every order pair, so
// the best leaf is the free-order optimum. Chronological order keeps the
// memory accounting exact with a compact state: between commits, at most one
// committed computation is still running (the latest), and everything else
// either finished or has not started.

namespace {

constexpr int kMaxFree = 16;

struct FreeTask {
  TaskId id;
  double cm, cp, mem;
};

struct FreeState {
  std::uint32_t started = 0;
  std::uint32_t computed = 0;
  double tau_comm = 0.0;
  double tau_comp = 0.0;
  double t_now = 0.0;       // start time of the last committed event
  double live_mem = 0.0;    // held by tasks transferred but not yet computing
  double running_mem = 0.0; // held by the computation ending at tau_comp
  std::array<double, kMaxFree> comm_end{};
  std::array<double, kMaxFree> comm_start{};
  std::array<double, kMaxFree> comp_start{};
};

class FreeOrderSearch {
 public:
  FreeOrderSearch(std::span<const Task> tasks, double capacity,
                  const ExactInit& init, double cutoff)
      : capacity_(capacity), init_(init), best_(cutoff) {
    n_ = static_cast<int>(tasks.size());
    for (int i = 0; i < n_; ++i) {
      const Task& t = tasks[i];
      tasks_[i] = {t.id, t.comm_time, t.comp_time, t.mem_req};
      if (!approx_le(t.mem_req, capacity_)) {
        throw infeasible_error("task " + std::to_string(t.id) +
                               " exceeds the memory capacity");
      }
    }
    full_ = (1u << n_) - 1;

    std::sort(init_.pending_releases.begin(), init_.pending_releases.end());
    prior_ends_.reserve(init_.pending_releases.size());
    for (const auto& [end, size] : init_.pending_releases) {
      (void)size;
      prior_ends_.push_back(end);
    }
    prior_suffix_.assign(prior_ends_.size() + 1, 0.0);
    for (std::size_t i = prior_ends_.size(); i-- > 0;) {
      prior_suffix_[i] = prior_suffix_[i + 1] + init_.pending_releases[i].second;
    }
  }

  std::optional<FreeOrderResult> run(std::span<const Task> original) {
    // Seed with the one-order schedule of the unconstrained-optimal
    // permutation; every later improvement is strict.
    const std::vector<TaskId> seed_order = johnson_order(original);
    if (auto seeded = simulate_pair(original, capacity_, init_, seed_order,
                                    seed_order)) {
      const double ms = seeded->makespan();
      if (ms < best_) {
        best_ = ms;
        incumbent_ = FreeOrderResult{seed_order, seed_order, ms, *seeded};
      }
    }

    FreeState root;
    root.tau_comm = init_.tau_comm;
    root.tau_comp = init_.tau_comp;
    root.t_now = 0.0;
    comm_seq_.clear();
    comp_seq_.clear();
    dfs(root);
    return incumbent_;
  }

 private:
  double prior_live(double t) const {
    // Entries are sorted by end; everything ending after t is still held.
    auto it = std::upper_bound(prior_ends_.begin(), prior_ends_.end(),
                               t + kEps);
    return prior_suffix_[static_cast<std::size_t>(it - prior_ends_.begin())];
  }

  double lower_bound(const FreeState& s) const {
    double rem_cp = 0.0;
    double min_live_end = kInf;
    double min_un_cm = kInf, min_un_cp = kInf;
    double sum_un_cm = 0.0;
    double bound = s.tau_comp;
    for (int i = 0; i < n_; ++i) {
      const std::uint32_t bit = 1u << i;
      if (s.computed & bit) continue;
      rem_cp += tasks_[i].cp;
      if (s.started & bit) {
        min_live_end = std::min(min_live_end, s.comm_end[i]);
        bound = std::max(bound, std::max(s.comm_end[i], s.tau_comp) +
                                    tasks_[i].cp);
      } else {
        min_un_cm = std::min(min_un_cm, tasks_[i].cm);
        min_un_cp = std::min(min_un_cp, tasks_[i].cp);
        sum_un_cm += tasks_[i].cm;
        bound = std::max(bound, s.tau_comm + tasks_[i].cm + tasks_[i].cp);
      }
    }
    if (rem_cp > 0.0) {
      double earliest_next = std::min(min_live_end, s.tau_comm + min_un_cm);
      if (earliest_next == kInf) earliest_next = s.tau_comp;
      bound = std::max(bound, std::max(s.tau_comp, earliest_next) + rem_cp);
    }
    if (s.started != full_) {
      bound = std::max(bound, s.tau_comm + sum_un_cm + min_un_cp);
    }
    return bound;
  }

  bool commit_comm(const FreeState& s, int u, FreeState& out) const {
    const FreeTask& task = tasks_[u];
    const double t0 = std::max(s.tau_comm, s.t_now);

    auto fits = [&](double t) {
      double used = s.live_mem + prior_live(t);
      if (still_held_at(s.tau_comp, t)) used += s.running_mem;
      return approx_le(used + task.mem, capacity_);
    };

    // Memory only frees at computation ends, so candidate start times are
    // the link-free instant and each later release.
    double chosen = -1.0;
    if (fits(t0)) {
      chosen = t0;
    } else {
      auto it = std::upper_bound(prior_ends_.begin(), prior_ends_.end(), t0);
      bool running_pending = s.tau_comp > t0;
      while (it != prior_ends_.end() || running_pending) {
        double t;
        if (it != prior_ends_.end() &&
            (!running_pending || *it <= s.tau_comp)) {
          t = *it++;
        } else {
          t = s.tau_comp;
          running_pending = false;
        }
        if (fits(t)) {
          chosen = t;
          break;
        }
      }
      if (chosen < 0.0) return false;
    }

    out = s;
    out.started |= 1u << u;
    out.comm_start[u] = chosen;
    out.comm_end[u] = chosen + task.cm;
    out.tau_comm = out.comm_end[u];
    out.t_now = chosen;
    out.live_mem += task.mem;
    return true;
  }

  bool commit_comp(const FreeState& s, int v, FreeState& out) const {
    const FreeTask& task = tasks_[v];
    const double start = std::max(s.tau_comp, s.comm_end[v]);
    if (start < s.t_now - kEps) return false;  // out of chronological order
    out = s;
    out.computed |= 1u << v;
    out.comp_start[v] = start;
    out.tau_comp = start + task.cp;
    out.t_now = start;
    out.live_mem -= task.mem;
    out.running_mem = task.mem;
    return true;
  }

  struct MemoEntry {
    double tau_comm, tau_comp, t_now, running_mem;
    std::array<double, kMaxFree> comm_end;
  };

  // Componentwise domination: a stored state that is no later on every clock
  // and holds no more memory makes the new one redundant.
  bool memo_prune(const FreeState& s) {
    const std::uint64_t key =
        (static_cast<std::uint64_t>(s.started) << 32) | s.computed;
    auto& entries = memo_[key];
    const std::uint32_t live = s.started & ~s.computed;
    auto dominates = [&](const MemoEntry& a, const FreeState& b) {
      if (a.tau_comm > b.tau_comm + 1e-12 || a.tau_comp > b.tau_comp + 1e-12 ||
          a.t_now > b.t_now + 1e-12 || a.running_mem > b.running_mem + 1e-12) {
        return false;
      }
      for (int i = 0; i < n_; ++i) {
        if ((live & (1u << i)) && a.comm_end[i] > b.comm_end[i] + 1e-12) {
          return false;
        }
      }
      return true;
    };
    auto dominated_by_new = [&](const MemoEntry& a) {
      if (s.tau_comm > a.tau_comm + 1e-12 || s.tau_comp > a.tau_comp + 1e-12 ||
          s.t_now > a.t_now + 1e-12 || s.running_mem > a.running_mem + 1e-12) {
        return false;
      }
      for (int i = 0; i < n_; ++i) {
        if ((live & (1u << i)) && s.comm_end[i] > a.comm_end[i] + 1e-12) {
          return false;
        }
      }
      return true;
    };
    for (const MemoEntry& e : entries) {
      if (dominates(e, s)) return true;
    }
    std::erase_if(entries, dominated_by_new);
    entries.push_back({s.tau_comm, s.tau_comp, s.t_now, s.running_mem,
                       s.comm_end});
    return false;
  }

  void dfs(const FreeState& s) {
    if (s.computed == full_) {
      const double ms = s.tau_comp;
      if (ms < best_ - 1e-12) {
        best_ = ms;
        FreeOrderResult result;
        result.comm_order.reserve(n_);
        result.comp_order.reserve(n_);
        for (int i : comm_seq_) result.comm_order.push_back(tasks_[i].id);
        for (int i : comp_seq_) result.comp_order.push_back(tasks_[i].id);
        result.makespan = ms;
        for (int i = 0; i < n_; ++i) {
          result.schedule.add({tasks_[i].id, s.comm_start[i],
                               s.comm_end[i], s.comp_start[i],
                               s.comp_start[i] + tasks_[i].cp});
        }
        incumbent_ = std::move(result);
      }
      return;
    }
    if (lower_bound(s) >= best_ - 1e-12) return;
    if (memo_prune(s)) return;

    struct Child {
      FreeState state;
      double lb;
      bool is_comp;
      int task;
    };
    std::vector<Child> children;
    children.reserve(2 * n_);
    FreeState next;
    for (int v = 0; v < n_; ++v) {
      const std::uint32_t bit = 1u << v;
      if ((s.started & bit) && !(s.computed & bit) && commit_comp(s, v, next)) {
        children.push_back({next, lower_bound(next), true, v});
      }
    }
    for (int u = 0; u < n_; ++u) {
      if (!(s.started & (1u << u)) && commit_comm(s, u, next)) {
        children.push_back({next, lower_bound(next), false, u});
      }
    }
    std::sort(children.begin(), children.end(),
              [](const Child& a, const Child& b) {
                if (a.lb != b.lb) return a.lb < b.lb;
                if (a.is_comp != b.is_comp) return a.is_comp;
                return a.task < b.task;
              });
    for (Child& c : children) {
      if (c.lb >= best_ - 1e-12) continue;  // best may have improved
      if (c.is_comp) {
        comp_seq_.push_back(c.task);
        dfs(c.state);
        comp_seq_.pop_back();
      } else {
        comm_seq_.push_back(c.task);
        dfs(c.state);
        comm_seq_.pop_back();
      }
    }
  }

  int n_ = 0;
  std::uint32_t full_ = 0;
  double capacity_;
  ExactInit init_;
  double best_;
  std::array<FreeTask, kMaxFree> tasks_{};
  std::vector<double> prior_ends_;
  std::vector<double> prior_suffix_;
  std::optional<FreeOrderResult> incumbent_;
  std::vector<int> comm_seq_, comp_seq_;
  std::unordered_map<std::uint64_t, std::vector<MemoEntry>> memo_;
};

}  // namespace

std::optional<FreeOrderResult> solve_free_order(std::span<const Task> tasks,
                                                double capacity,
                                                const ExactInit& init,
                                                double cutoff) {
  if (tasks.size() > kMaxFree) {
    throw std::invalid_argument("free-order search supports at most " +
                                std::to_string(kMaxFree) + " tasks");
  }
  if (tasks.empty()) {
    if (init.tau_comp < cutoff) {
      return FreeOrderResult{{}, {}, init.tau_comp, {}};
    }
    return std::nullopt;
  }
  FreeOrderSearch search(tasks, capacity, init, cutoff);
  return search.run(tasks);
}

FreeOrderResult brute_force_free_order(const Instance& instance,
                                       std::size_t limit) {
  if (instance.size() > limit) {
    throw std::invalid_argument(
        "instance too large for exhaustive pair search (" +
        std::to_string(instance.size()) + " tasks, limit " +
        std::to_string(limit) + ")");
  }
  auto result = solve_free_order(instance.tasks(), instance.capacity(), {});
  return *result;  // cutoff is infinite, so a result always exists
}

Schedule lp_k(const Instance& instance, int k) {
  if (k < 3 || k > 6) {
    throw std::invalid_argument("window size must lie in {3,4,5,6}, got " +
                                std::to_string(k));
  }
  ExactInit state;
  Schedule out;
  for (const auto& window :
       batch_tasks(instance.tasks(), static_cast<std::size_t>(k))) {
    auto solved = solve_free_order(window, instance.capacity(), state);
    double tau_comm = state.tau_comm;
    double tau_comp = state.tau_comp;
    for (const ScheduleEntry& e : solved->schedule.entries()) {
      out.add(e);
      tau_comm = std::max(tau_comm, e.comm_end);
      tau_comp = std::max(tau_comp, e.comp_end);
    }
    // Memory still held past the new link-free instant keeps constraining
    // the next window.
    std::vector<std::pair<double, double>> releases;
    for (const auto& r : state.pending_releases) {
      if (still_held_at(r.first, tau_comm)) releases.push_back(r);
    }
    for (const ScheduleEntry& e : solved->schedule.entries()) {
      if (still_held_at(e.comp_end, tau_comm)) {
        releases.emplace_back(e.comp_end, instance.task(e.id).mem_req);
      }
    }
    state = {tau_comm, tau_comp, std::move(releases)};
  }
  return out;
}

// ---------------------------------------------------------------------------
// Mixed-integer model.

namespace {

std::string fmt(double v) {
  std::array<char, 32> buf;
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  (void)ec;
  return std::string(buf.data(), ptr);
}

}  // namespace

MilpModel build_milp(const Instance& instance) {
  MilpModel model;
  const auto& tasks = instance.tasks();
  for (const Task& t : tasks) model.big_m += t.comm_time + t.comp_time;
  const double L = model.big_m;

  auto var = [](const char* base, TaskId i) {
    return std::string(base) + "_" + std::to_string(i);
  };
  auto pair_var = [](const char* base, TaskId i, TaskId j) {
    return std::string(base) + "_" + std::to_string(i) + "_" +
           std::to_string(j);
  };

  model.continuous.push_back("l");
  for (const Task& t : tasks) {
    model.continuous.push_back(var("s", t.id));
    model.continuous.push_back(var("e", t.id));
    model.continuous.push_back(var("sp", t.id));
    model.continuous.push_back(var("ep", t.id));
  }
  for (const Task& i : tasks) {
    for (const Task& j : tasks) {
      if (i.id == j.id) continue;
      model.binaries.push_back(pair_var("a", i.id, j.id));
      model.binaries.push_back(pair_var("b", i.id, j.id));
      model.binaries.push_back(pair_var("c", i.id, j.id));
    }
  }

  auto add = [&model](std::string name, std::vector<MilpTerm> terms,
                      char sense, double rhs) {
    model.constraints.push_back(
        {std::move(name), std::move(terms), sense, rhs});
  };

  for (const Task& t : tasks) {
    const std::string id = std::to_string(t.id);
    add("finish_" + id, {{1, var("ep", t.id)}, {-1, "l"}}, 'L', 0.0);
    add("ready_" + id, {{1, var("e", t.id)}, {-1, var("sp", t.id)}}, 'L', 0.0);
    add("comm_len_" + id, {{1, var("e", t.id)}, {-1, var("s", t.id)}}, 'E',
        t.comm_time);
    add("comp_len_" + id, {{1, var("ep", t.id)}, {-1, var("sp", t.id)}}, 'E',
        t.comp_time);
  }

  for (const Task& i : tasks) {
    for (const Task& j : tasks) {
      if (i.id == j.id) continue;
      const std::string suffix =
          "_" + std::to_string(i.id) + "_" + std::to_string(j.id);
      // Exclusive use of the link: a_ij = 1 puts j's transfer before i's.
      add("comm_excl_lo" + suffix,
          {{1, var("e", j.id)}, {-1, var("s", i.id)},
           {L, pair_var("a", i.id, j.id)}},
          'L', L);
      add("comm_excl_hi" + suffix,
          {{1, var("e", i.id)}, {-1, var("s", j.id)},
           {-L, pair_var("a", i.id, j.id)}},
          'L', 0.0);
      // Exclusive use of the processor via b.
      add("comp_excl_lo" + suffix,
          {{1, var("ep", j.id)}, {-1, var("sp", i.id)},
           {L, pair_var("b", i.id, j.id)}},
          'L', L);
      add("comp_excl_hi" + suffix,
          {{1, var("ep", i.id)}, {-1, var("sp", j.id)},
           {-L, pair_var("b", i.id, j.id)}},
          'L', 0.0);
      // c_ij = 1 exactly when j's computation ends before i's transfer
      // starts; the strict side carries the 1e-6 margin.
      add("release_lo" + suffix,
          {{1, var("ep", j.id)}, {-1, var("s", i.id)},
           {L, pair_var("c", i.id, j.id)}},
          'L', L);
      add("release_hi" + suffix,
          {{1, var("s", i.id)}, {-1, var("ep", j.id)},
           {-L, pair_var("c", i.id, j.id)}},
          'L', -1e-6);
    }
  }

  // Memory in use when task i's transfer starts: every task transferred
  // earlier and not yet released, plus i itself.
  for (const Task& i : tasks) {
    std::vector<MilpTerm> terms;
    for (const Task& r : tasks) {
      if (r.id == i.id || r.mem_req == 0.0) continue;
      terms.push_back({r.mem_req, pair_var("a", i.id, r.id)});
      terms.push_back({-r.mem_req, pair_var("c", i.id, r.id)});
    }
    add("memory_" + std::to_string(i.id), std::move(terms), 'L',
        instance.capacity() - i.mem_req);
  }

  // Consistency of the pairwise booleans.
  for (const Task& i : tasks) {
    for (const Task& j : tasks) {
      if (i.id >= j.id) continue;
      const std::string suffix =
          "_" + std::to_string(i.id) + "_" + std::to_string(j.id);
      add("comm_pair" + suffix,
          {{1, pair_var("a", i.id, j.id)}, {1, pair_var("a", j.id, i.id)}},
          'E', 1.0);
      add("comp_pair" + suffix,
          {{1, pair_var("b", i.id, j.id)}, {1, pair_var("b", j.id, i.id)}},
          'E', 1.0);
      add("release_pair" + suffix,
          {{1, pair_var("c", i.id, j.id)}, {1, pair_var("c", j.id, i.id)}},
          'L', 1.0);
    }
  }
  for (const Task& i : tasks) {
    for (const Task& j : tasks) {
      if (i.id == j.id) continue;
      const std::string suffix =
          "_" + std::to_string(i.id) + "_" + std::to_string(j.id);
      add("release_after_comm" + suffix,
          {{1, pair_var("c", i.id, j.id)}, {-1, pair_var("a", i.id, j.id)}},
          'L', 0.0);
      add("release_after_comp" + suffix,
          {{1, pair_var("c", i.id, j.id)}, {-1, pair_var("b", i.id, j.id)}},
          'L', 0.0);
    }
  }

  return model;
}

std::string export_milp(const Instance& instance) {
  const MilpModel model = build_milp(instance);
  std::string out;
  out += "\\ two-resource transfer scheduling model\n";
  out += "Minimize\n obj: " + model.objective + "\n";
  out += "Subject To\n";
  for (const MilpConstraint& c : model.constraints) {
    out += " " + c.name + ":";
    if (c.terms.empty()) {
      out += " 0 " + model.objective;  // degenerate row, keeps parsers happy
    }
    bool first = true;
    for (const MilpTerm& term : c.terms) {
      const double mag = std::fabs(term.coef);
      const bool negative = term.coef < 0.0;
      out += first ? (negative ? " - " : " ") : (negative ? " - " : " + ");
      if (mag != 1.0) out += fmt(mag) + " ";
      out += term.var;
      first = false;
    }
    out += c.sense == 'E' ? " = " : " <= ";
    out += fmt(c.rhs) + "\n";
  }
  out += "Binaries\n";
  std::string line;
  for (const std::string& b : model.binaries) {
    if (line.size() + b.size() + 1 > 78) {
      out += line + "\n";
      line.clear();
    }
    line += " " + b;
  }
  if (!line.empty()) out += line + "\n";
  out += "End\n";
  return out;
}

}  // namespace dtsched
