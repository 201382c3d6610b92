// Command-line front end for the transfer scheduling library: run single
// heuristics, sweep capacity grids, generate workloads, query the exact
// solvers, export the MILP, and validate schedules produced elsewhere.
//
// Exit codes: 0 on success, 1 when an instance is infeasible or a schedule
// fails validation, 2 for usage or input errors.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "dtsched/bench.hpp"
#include "dtsched/core.hpp"
#include "dtsched/engine.hpp"
#include "dtsched/exact.hpp"
#include "dtsched/generators.hpp"
#include "dtsched/heuristics.hpp"
#include "dtsched/johnson.hpp"
#include "dtsched/trace_io.hpp"

namespace {

using namespace dtsched;

constexpr const char* kBuiltinPrefix = "builtin:";

struct LoadedTrace {
  std::string name;
  std::vector<Task> tasks;
  std::optional<double> builtin_capacity;
};

LoadedTrace load_trace(const std::string& spec) {
  if (spec.rfind(kBuiltinPrefix, 0) == 0) {
    const std::string name = spec.substr(std::string(kBuiltinPrefix).size());
    Instance instance = paper_instance(name);
    return {name, instance.tasks(), instance.capacity()};
  }
  return {std::filesystem::path(spec).filename().string(),
          read_trace_file(spec), std::nullopt};
}

double resolve_capacity(const LoadedTrace& trace,
                        const std::optional<double>& flag) {
  if (flag) return *flag;
  if (trace.builtin_capacity) return *trace.builtin_capacity;
  throw std::invalid_argument("--capacity is required for file traces");
}

nlohmann::json schedule_to_json(const Schedule& schedule) {
  nlohmann::json arr = nlohmann::json::array();
  for (const ScheduleEntry& e : schedule.entries()) {
    arr.push_back({{"id", e.id},
                   {"comm_start", e.comm_start},
                   {"comp_start", e.comp_start}});
  }
  return arr;
}

Schedule schedule_from_json(const Instance& instance,
                            const nlohmann::json& doc) {
  if (!doc.is_array()) {
    throw std::invalid_argument("schedule JSON must be an array of entries");
  }
  std::vector<std::tuple<TaskId, double, double>> starts;
  starts.reserve(doc.size());
  for (const auto& item : doc) {
    starts.emplace_back(item.at("id").get<TaskId>(),
                        item.at("comm_start").get<double>(),
                        item.at("comp_start").get<double>());
  }
  return schedule_from_starts(instance, starts);
}

void emit_schedule(const Schedule& schedule, const std::string& path) {
  const std::string text = schedule_to_json(schedule).dump(2) + "\n";
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open " + path);
  out << text;
}

std::vector<HeuristicId> parse_heuristic_list(const std::string& arg) {
  std::vector<HeuristicId> out;
  if (arg == "all") {
    auto span = all_order_heuristics();
    return {span.begin(), span.end()};
  }
  std::stringstream ss(arg);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(parse_heuristic(item));
  }
  if (out.empty()) throw std::invalid_argument("empty heuristic list");
  return out;
}

std::vector<long long> parse_int_list(const std::string& arg) {
  std::vector<long long> out;
  std::stringstream ss(arg);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stoll(item));
  }
  return out;
}

int cmd_run(const std::string& trace_spec, const std::string& heuristic_name,
            std::optional<double> capacity, std::optional<std::size_t> batch,
            const std::string& schedule_out) {
  const LoadedTrace trace = load_trace(trace_spec);
  Instance instance(trace.tasks, resolve_capacity(trace, capacity));
  const HeuristicId id = parse_heuristic(heuristic_name);

  Schedule schedule;
  double lower;
  if (batch) {
    schedule = schedule_in_batches(instance, id, *batch);
    lower = batched_omim(instance.tasks(), *batch);
  } else {
    schedule = run_heuristic(instance, id).schedule;
    lower = omim(instance.tasks());
  }
  const double ms = schedule.makespan();
  std::cout << "heuristic " << to_string(id) << "\n";
  std::cout << "makespan " << ms << "\n";
  std::cout << "omim " << lower << "\n";
  std::cout << "ratio " << (lower > kEps ? ms / lower : 1.0) << "\n";
  if (!schedule_out.empty()) emit_schedule(schedule, schedule_out);
  return 0;
}

int cmd_sweep(const std::vector<std::string>& trace_specs,
              const std::string& heuristics_arg,
              std::optional<std::size_t> batch, int jobs,
              const std::string& out_dir) {
  std::vector<Workload> workloads;
  for (const std::string& spec : trace_specs) {
    LoadedTrace trace = load_trace(spec);
    workloads.push_back({trace.name, std::move(trace.tasks)});
  }
  const std::vector<HeuristicId> heuristics =
      parse_heuristic_list(heuristics_arg);

  const auto rows = sweep(workloads, heuristics, batch, jobs);
  const auto summary = summarize(rows);

  std::filesystem::create_directories(out_dir);
  auto write = [&](const std::string& name, const std::string& text) {
    const auto path = std::filesystem::path(out_dir) / name;
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open " + path.string());
    out << text;
  };
  write("sweep.csv", sweep_csv(rows));
  write("summary.csv", summary_csv(summary));
  write("report.json", report_json(rows, summary) + "\n");
  std::cout << "wrote " << rows.size() << " rows to " << out_dir << "\n";
  return 0;
}

int cmd_gen(bool gadget, const std::string& profile_name, int n,
            std::uint64_t seed, double bias, const std::string& a_arg, int m,
            const std::string& out_path) {
  if (gadget) {
    ThreePartitionInput input{parse_int_list(a_arg), m};
    const GadgetInstance gadget_instance = gen_3partition(input);
    write_trace_file(out_path, gadget_instance.instance.tasks());
    std::cout << "tasks " << gadget_instance.instance.size() << "\n";
    std::cout << "capacity " << gadget_instance.instance.capacity() << "\n";
    std::cout << "target " << gadget_instance.target << "\n";
    return 0;
  }
  SyntheticProfile profile;
  if (profile_name == "homogeneous") {
    profile = SyntheticProfile::Homogeneous;
  } else if (profile_name == "heterogeneous") {
    profile = SyntheticProfile::Heterogeneous;
  } else {
    throw std::invalid_argument("unknown profile: " + profile_name);
  }
  const std::vector<Task> tasks = gen_synthetic(profile, n, seed, bias);
  write_trace_file(out_path, tasks);
  std::cout << "tasks " << tasks.size() << "\n";
  return 0;
}

int cmd_oracle(const std::string& trace_spec, std::optional<double> capacity,
               bool free_order, std::optional<std::size_t> limit) {
  const LoadedTrace trace = load_trace(trace_spec);
  Instance instance(trace.tasks, resolve_capacity(trace, capacity));
  if (free_order) {
    const auto result =
        brute_force_free_order(instance, limit.value_or(6));
    std::cout << "makespan " << result.makespan << "\n";
    std::cout << "comm_order";
    for (TaskId id : result.comm_order) std::cout << " " << id;
    std::cout << "\ncomp_order";
    for (TaskId id : result.comp_order) std::cout << " " << id;
    std::cout << "\n";
  } else {
    const auto result = brute_force_same_order(instance, limit.value_or(8));
    std::cout << "makespan " << result.makespan << "\n";
    std::cout << "order";
    for (TaskId id : result.order) std::cout << " " << id;
    std::cout << "\n";
  }
  return 0;
}

int cmd_export_milp(const std::string& trace_spec,
                    std::optional<double> capacity,
                    const std::string& out_path) {
  const LoadedTrace trace = load_trace(trace_spec);
  Instance instance(trace.tasks, resolve_capacity(trace, capacity));
  const std::string text = export_milp(instance);
  if (out_path == "-") {
    std::cout << text;
  } else {
    std::ofstream out(out_path);
    if (!out) throw std::invalid_argument("cannot open " + out_path);
    out << text;
  }
  return 0;
}

int cmd_validate(const std::string& trace_spec,
                 std::optional<double> capacity,
                 const std::string& schedule_path) {
  const LoadedTrace trace = load_trace(trace_spec);
  Instance instance(trace.tasks, resolve_capacity(trace, capacity));

  std::ifstream in(schedule_path);
  if (!in) {
    throw std::invalid_argument("cannot open schedule file: " +
                                schedule_path);
  }
  nlohmann::json doc;
  in >> doc;
  const Schedule schedule = schedule_from_json(instance, doc);
  const ValidationReport report = validate_schedule(instance, schedule);
  if (report.feasible) {
    std::cout << "feasible (makespan " << schedule.makespan() << ")\n";
    return 0;
  }
  std::cout << "infeasible: " << report.violations.size() << " violation(s)\n";
  for (const Violation& v : report.violations) {
    std::cout << "  " << to_string(v.kind) << " at t=" << v.time << " tasks";
    for (TaskId id : v.tasks) std::cout << " " << id;
    std::cout << "\n";
  }
  return 1;
}

int cmd_characterize(const std::string& trace_spec) {
  const LoadedTrace trace = load_trace(trace_spec);
  const WorkloadBounds bounds = workload_bounds(trace.tasks);
  std::cout << "tasks " << trace.tasks.size() << "\n";
  std::cout << "sum_comm " << bounds.sum_comm << "\n";
  std::cout << "sum_comp " << bounds.sum_comp << "\n";
  std::cout << "lower_bound " << bounds.lower << "\n";
  std::cout << "upper_bound " << bounds.upper << "\n";
  if (!trace.tasks.empty()) {
    std::cout << "min_capacity " << min_capacity(trace.tasks) << "\n";
    std::cout << "omim " << omim(trace.tasks) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scheduling of data transfers against computations under a "
               "memory capacity"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "run one heuristic on a trace");
  std::string run_trace, run_heuristic_name, run_schedule_out;
  std::optional<double> run_capacity;
  std::optional<std::size_t> run_batch;
  run->add_option("--trace", run_trace, "trace file or builtin:<name>")
      ->required();
  run->add_option("--heuristic", run_heuristic_name, "heuristic name")
      ->required();
  run->add_option("--capacity", run_capacity, "memory capacity");
  run->add_option("--batch", run_batch, "apply in batches of this size");
  run->add_option("--schedule-out", run_schedule_out,
                  "write the schedule as JSON ('-' for stdout)");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "capacity sweep over traces");
  std::vector<std::string> sweep_traces;
  std::string sweep_heuristics = "all";
  std::optional<std::size_t> sweep_batch;
  int sweep_jobs = 1;
  std::string sweep_out;
  sweep_cmd->add_option("--trace", sweep_traces, "trace file(s) or builtins")
      ->required();
  sweep_cmd->add_option("--heuristics", sweep_heuristics,
                        "comma-separated names or 'all'");
  sweep_cmd->add_option("--batch", sweep_batch, "batch size");
  sweep_cmd->add_option("--jobs", sweep_jobs, "parallel workers");
  sweep_cmd->add_option("--out", sweep_out, "output directory")->required();

  // gen
  auto* gen = app.add_subcommand("gen", "generate a workload trace");
  bool gen_gadget = false;
  std::string gen_profile = "heterogeneous";
  int gen_n = 300;
  std::uint64_t gen_seed = 1;
  double gen_bias = 1.0;
  std::string gen_a;
  int gen_m = 1;
  std::string gen_out;
  gen->add_flag("--gadget-3par", gen_gadget,
                "build the 3-partition reduction gadget");
  gen->add_option("--profile", gen_profile, "homogeneous | heterogeneous");
  gen->add_option("--n", gen_n, "number of tasks");
  gen->add_option("--seed", gen_seed, "random seed");
  gen->add_option("--bias", gen_bias, "target sum_comm / sum_comp");
  gen->add_option("--a", gen_a, "comma-separated integers (gadget)");
  gen->add_option("--m", gen_m, "number of triplets (gadget)");
  gen->add_option("--out", gen_out, "output trace file")->required();

  // oracle
  auto* oracle = app.add_subcommand("oracle", "exact optimum on a small trace");
  std::string oracle_trace;
  std::optional<double> oracle_capacity;
  bool oracle_free = false;
  std::optional<std::size_t> oracle_limit;
  oracle->add_option("--trace", oracle_trace, "trace file or builtin")
      ->required();
  oracle->add_option("--capacity", oracle_capacity, "memory capacity");
  oracle->add_flag("--free-order", oracle_free,
                   "allow different transfer and computation orders");
  oracle->add_option("--limit", oracle_limit, "max task count");

  // export-milp
  auto* milp = app.add_subcommand("export-milp",
                                  "write the mixed-integer model in LP format");
  std::string milp_trace, milp_out;
  std::optional<double> milp_capacity;
  milp->add_option("--trace", milp_trace, "trace file or builtin")->required();
  milp->add_option("--capacity", milp_capacity, "memory capacity");
  milp->add_option("--out", milp_out, "output .lp file ('-' for stdout)")
      ->required();

  // validate
  auto* validate = app.add_subcommand("validate", "check a schedule JSON");
  std::string validate_trace, validate_schedule_path;
  std::optional<double> validate_capacity;
  validate->add_option("--trace", validate_trace, "trace file or builtin")
      ->required();
  validate->add_option("--schedule", validate_schedule_path, "schedule JSON")
      ->required();
  validate->add_option("--capacity", validate_capacity, "memory capacity");

  // characterize
  auto* characterize =
      app.add_subcommand("characterize", "workload bounds and memory floor");
  std::string characterize_trace;
  characterize->add_option("--trace", characterize_trace,
                           "trace file or builtin")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) {
      return cmd_run(run_trace, run_heuristic_name, run_capacity, run_batch,
                     run_schedule_out);
    }
    if (sweep_cmd->parsed()) {
      return cmd_sweep(sweep_traces, sweep_heuristics, sweep_batch,
                       sweep_jobs, sweep_out);
    }
    if (gen->parsed()) {
      return cmd_gen(gen_gadget, gen_profile, gen_n, gen_seed, gen_bias,
                     gen_a, gen_m, gen_out);
    }
    if (oracle->parsed()) {
      return cmd_oracle(oracle_trace, oracle_capacity, oracle_free,
                        oracle_limit);
    }
    if (milp->parsed()) {
      return cmd_export_milp(milp_trace, milp_capacity, milp_out);
    }
    if (validate->parsed()) {
      return cmd_validate(validate_trace, validate_capacity,
                          validate_schedule_path);
    }
    if (characterize->parsed()) {
      return cmd_characterize(characterize_trace);
    }
  } catch (const infeasible_error& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
