#include "dtsched/johnson.hpp"

#include <algorithm>

#include "dtsched/engine.hpp"

namespace dtsched {

std::vector<TaskId> johnson_order(std::span<const Task> tasks) {
  std::vector<const Task*> fast_compute;  // comp >= comm
  std::vector<const Task*> fast_transfer;
  for (const Task& t : tasks) {
    if (approx_ge(t.comp_time, t.comm_time)) {
      fast_compute.push_back(&t);
    } else {
      fast_transfer.push_back(&t);
    }
  }
  std::sort(fast_compute.begin(), fast_compute.end(),
            [](const Task* a, const Task* b) {
              if (!approx_eq(a->comm_time, b->comm_time)) {
                return a->comm_time < b->comm_time;
              }
              return a->id < b->id;
            });
  std::sort(fast_transfer.begin(), fast_transfer.end(),
            [](const Task* a, const Task* b) {
              if (!approx_eq(a->comp_time, b->comp_time)) {
                return a->comp_time > b->comp_time;
              }
              return a->id < b->id;
            });

  std::vector<TaskId> order;
  order.reserve(tasks.size());
  for (const Task* t : fast_compute) order.push_back(t->id);
  for (const Task* t : fast_transfer) order.push_back(t->id);
  return order;
}

double omim(std::span<const Task> tasks) {
  return infinite_schedule(tasks, johnson_order(tasks)).makespan();
}

bool check_swap_lemma(const Task& a, const Task& b, double t1, double t2) {
  const bool cond_i = approx_ge(a.comp_time, a.comm_time) &&
                      approx_ge(b.comp_time, b.comm_time) &&
                      approx_le(a.comm_time, b.comm_time);
  const bool cond_ii = approx_lt(a.comp_time, a.comm_time) &&
                       approx_lt(b.comp_time, b.comm_time) &&
                       approx_ge(a.comp_time, b.comp_time);
  const bool cond_iii = approx_ge(a.comp_time, a.comm_time) &&
                        approx_lt(b.comp_time, b.comm_time);
  if (!(cond_i || cond_ii || cond_iii)) {
    throw std::invalid_argument(
        "task pair satisfies none of the exchange conditions");
  }

  // A then B, both transfers back to back from t1, processor free from t2.
  const double comp_a = std::max(t1 + a.comm_time, t2);
  const double comp_b =
      std::max(comp_a + a.comp_time, t1 + a.comm_time + b.comm_time);
  const double original = comp_b + b.comp_time;

  const double comp_b_swapped = std::max(t1 + b.comm_time, t2);
  const double comp_a_swapped = std::max(comp_b_swapped + b.comp_time,
                                         t1 + b.comm_time + a.comm_time);
  const double swapped = comp_a_swapped + a.comp_time;

  return approx_le(original, swapped);
}

}  // namespace dtsched
