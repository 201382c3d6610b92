#include "dtsched/generators.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace dtsched {

long long ThreePartitionInput::sum() const {
  long long s = 0;
  for (long long v : a) s += v;
  return s;
}

long long ThreePartitionInput::max_value() const {
  long long x = 0;
  for (long long v : a) x = std::max(x, v);
  return x;
}

void ThreePartitionInput::check() const {
  if (m < 1) {
    throw std::invalid_argument("m must be at least 1");
  }
  if (a.size() != static_cast<std::size_t>(3 * m)) {
    throw std::invalid_argument("expected exactly 3m = " +
                                std::to_string(3 * m) + " integers, got " +
                                std::to_string(a.size()));
  }
  for (long long v : a) {
    if (v <= 1) {
      throw std::invalid_argument(
          "all integers must exceed 1 (rescale the input); got " +
          std::to_string(v));
    }
  }
  if (sum() % m != 0) {
    throw std::invalid_argument("sum of integers must be divisible by m");
  }
}

GadgetInstance gen_3partition(const ThreePartitionInput& input) {
  input.check();
  const double bp = static_cast<double>(input.b_prime());
  const double x = static_cast<double>(input.max_value());
  const int m = input.m;

  std::vector<Task> tasks;
  tasks.reserve(4 * m + 1);
  tasks.push_back({0, 0.0, 3.0, 0.0});  // zero-transfer starter
  for (int i = 1; i < m; ++i) {
    tasks.push_back({i, bp, 3.0, bp});
  }
  tasks.push_back({m, bp, 0.0, bp});  // closing separator computes nothing
  for (std::size_t i = 0; i < input.a.size(); ++i) {
    const double comp = static_cast<double>(input.a[i]) + 2.0 * x;
    tasks.push_back({m + 1 + static_cast<int>(i), 1.0, comp, 1.0});
  }

  GadgetInstance out{Instance(std::move(tasks), bp + 3.0),
                     m * (bp + 3.0)};
  return out;
}

Schedule schedule_from_triplets(const GadgetInstance& gadget,
                                const ThreePartitionInput& input,
                                std::span<const std::array<int, 3>> triplets) {
  input.check();
  const int m = input.m;
  if (triplets.size() != static_cast<std::size_t>(m)) {
    throw std::invalid_argument("expected " + std::to_string(m) +
                                " triplets, got " +
                                std::to_string(triplets.size()));
  }
  std::vector<bool> used(input.a.size(), false);
  for (const auto& triplet : triplets) {
    long long sum = 0;
    for (int idx : triplet) {
      if (idx < 0 || idx >= static_cast<int>(input.a.size())) {
        throw std::invalid_argument("triplet index out of range: " +
                                    std::to_string(idx));
      }
      if (used[idx]) {
        throw std::invalid_argument("triplet reuses element " +
                                    std::to_string(idx));
      }
      used[idx] = true;
      sum += input.a[idx];
    }
    if (sum != input.b()) {
      throw std::invalid_argument(
          "triplet sums to " + std::to_string(sum) + ", expected " +
          std::to_string(input.b()) + "; not a witness");
    }
  }

  const double bp = static_cast<double>(input.b_prime());
  const double x = static_cast<double>(input.max_value());
  Schedule out;
  // Opening computation [0,3); separator i's transfer spans slot i.
  out.add({0, 0.0, 0.0, 0.0, 3.0});
  for (int i = 1; i <= m; ++i) {
    const double seg = (i - 1) * (bp + 3.0);
    const double comm_start = seg + 3.0;
    const double comp_len = i < m ? 3.0 : 0.0;
    out.add({i, comm_start, comm_start + bp, comm_start + bp,
             comm_start + bp + comp_len});

    // Triplet i-1: transfers ride the previous computation, computations
    // fill this separator's transfer end to end.
    double comp_at = comm_start;
    for (int k = 0; k < 3; ++k) {
      const int idx = triplets[i - 1][k];
      const TaskId id = m + 1 + idx;
      const double comp_len_a = static_cast<double>(input.a[idx]) + 2.0 * x;
      out.add({id, seg + k, seg + k + 1.0, comp_at, comp_at + comp_len_a});
      comp_at += comp_len_a;
    }
  }
  (void)gadget;
  return out;
}

namespace {

// mt19937_64 output mapped to [0,1) the portable way.
class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : engine_(seed) {}
  double next() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace

std::vector<Task> gen_synthetic(SyntheticProfile profile, int n,
                                std::uint64_t seed,
                                double comm_to_comp_bias) {
  if (n < 1) {
    throw std::invalid_argument("workload needs at least one task");
  }
  if (comm_to_comp_bias <= 0.0) {
    throw std::invalid_argument("comm/comp bias must be positive");
  }
  Uniform rng(seed);
  auto draw = [&]() {
    if (profile == SyntheticProfile::Homogeneous) {
      return 0.9 + 0.2 * rng.next();  // spread well under 10% of the mean
    }
    return std::pow(10.0, -1.0 + 2.0 * rng.next());
  };

  std::vector<Task> tasks(n);
  double sum_comm = 0.0;
  double sum_comp = 0.0;
  for (int i = 0; i < n; ++i) {
    tasks[i].id = i;
    tasks[i].comm_time = draw();
    tasks[i].comp_time = draw();
    sum_comm += tasks[i].comm_time;
    sum_comp += tasks[i].comp_time;
  }
  // Rescale transfers so sum_comm / sum_comp hits the requested bias.
  const double factor = comm_to_comp_bias * sum_comp / sum_comm;
  for (Task& t : tasks) {
    t.comm_time *= factor;
    t.mem_req = t.comm_time;
  }
  return tasks;
}

Instance paper_instance(const std::string& name) {
  // Columns: id, comm, comp, mem (memory equals transfer volume).
  if (name == "order-gap") {
    return Instance({{0, 0.0, 5.0, 0.0},
                     {1, 4.0, 3.0, 4.0},
                     {2, 1.0, 6.0, 1.0},
                     {3, 3.0, 7.0, 3.0},
                     {4, 6.0, 0.5, 6.0},
                     {5, 7.0, 0.5, 7.0}},
                    10.0);
  }
  if (name == "static-example") {
    return Instance({{0, 3.0, 2.0, 3.0},
                     {1, 1.0, 3.0, 1.0},
                     {2, 4.0, 4.0, 4.0},
                     {3, 2.0, 1.0, 2.0}},
                    6.0);
  }
  if (name == "dynamic-example") {
    return Instance({{0, 3.0, 2.0, 3.0},
                     {1, 1.0, 6.0, 1.0},
                     {2, 4.0, 6.0, 4.0},
                     {3, 5.0, 1.0, 5.0}},
                    6.0);
  }
  if (name == "corrections-example") {
    return Instance({{0, 4.0, 1.0, 4.0},
                     {1, 2.0, 6.0, 2.0},
                     {2, 8.0, 8.0, 8.0},
                     {3, 5.0, 4.0, 5.0},
                     {4, 3.0, 2.0, 3.0}},
                    9.0);
  }
  throw std::invalid_argument("unknown built-in instance: " + name);
}

std::vector<std::string> paper_instance_names() {
  return {"order-gap", "static-example", "dynamic-example",
          "corrections-example"};
}

}  // namespace dtsched
