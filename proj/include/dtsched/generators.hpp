#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dtsched/core.hpp"

// Instance construction: the hardness gadget built from 3-Partition, its
// witness schedule, the worked example instances, and seeded synthetic
// workloads shaped like dense-chemistry traces.

namespace dtsched {

/// A 3-Partition question: can `a` (3m integers, all > 1, summing to m*b)
/// be split into m triplets of equal sum b?
struct ThreePartitionInput {
  std::vector<long long> a;
  int m = 0;

  long long sum() const;
  long long b() const { return sum() / m; }
  long long max_value() const;
  long long b_prime() const { return b() + 6 * max_value(); }

  /// Throws std::invalid_argument if the shape constraints fail.
  void check() const;
};

struct GadgetInstance {
  Instance instance;
  double target = 0.0;  // makespan achievable exactly when the answer is yes
};

/// Builds the reduction gadget: a zero-transfer starter, m wide separator
/// tasks whose transfers define m slots, and one small task per integer.
/// Task ids 0..m are the separators in order; ids m+1..m+3m map to a[0..].
/// Total transfer time and total computation time both equal the target, so
/// reaching it requires a schedule with no idle time at all.
GadgetInstance gen_3partition(const ThreePartitionInput& input);

/// Builds the witness schedule for a gadget from a claimed partition into
/// triplets (given as indices into the original `a`). Each triplet's
/// transfers ride inside the previous separator's computation and its
/// computations fill the next separator's transfer exactly. Throws
/// std::invalid_argument if the triplets do not partition `a` or a triplet
/// sum is off.
Schedule schedule_from_triplets(const GadgetInstance& gadget,
                                const ThreePartitionInput& input,
                                std::span<const std::array<int, 3>> triplets);

enum class SyntheticProfile {
  Homogeneous,   // tight spread, coefficient of variation under 10%
  Heterogeneous  // log-uniform across two decades
};

/// Seeded, reproducible workload. comm_to_comp_bias fixes the ratio of total
/// transfer time to total computation time; memory equals transfer time.
std::vector<Task> gen_synthetic(SyntheticProfile profile, int n,
                                std::uint64_t seed, double comm_to_comp_bias);

/// The four worked instances used across the test suite, by name:
/// order-gap, static-example, dynamic-example, corrections-example.
Instance paper_instance(const std::string& name);

std::vector<std::string> paper_instance_names();

}  // namespace dtsched
