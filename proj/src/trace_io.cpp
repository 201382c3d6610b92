#include "dtsched/trace_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "dtsched/heuristics.hpp"
#include "dtsched/johnson.hpp"

namespace dtsched {

namespace {

constexpr const char* kHeader4 = "task_id,comm_time,comp_time,mem_bytes";
constexpr const char* kHeader3 = "task_id,comm_time,comp_time";

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(trim(line.substr(start)));
      return out;
    }
    out.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

double parse_value(const std::string& field, std::size_t line_no,
                   const char* what) {
  double value = 0.0;
  auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw parse_error("line " + std::to_string(line_no) + ": cannot parse " +
                      std::string(what) + " from '" + field + "'");
  }
  if (value < 0.0) {
    throw std::invalid_argument("line " + std::to_string(line_no) +
                                ": negative " + std::string(what) + " '" +
                                field + "'");
  }
  return value;
}

std::string format_value(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace

std::vector<Task> read_trace(std::istream& in) {
  std::vector<Task> tasks;
  std::unordered_set<TaskId> seen;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  bool has_mem_column = false;

  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.size() >= 3 && line[0] == '\xEF' &&
        line[1] == '\xBB' && line[2] == '\xBF') {
      line.erase(0, 3);  // UTF-8 byte-order mark
    }
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;

    if (!header_seen) {
      if (stripped == kHeader4) {
        has_mem_column = true;
      } else if (stripped == kHeader3) {
        has_mem_column = false;
      } else {
        throw parse_error("line " + std::to_string(line_no) +
                          ": expected header '" + kHeader4 + "' or '" +
                          kHeader3 + "'");
      }
      header_seen = true;
      continue;
    }

    const std::vector<std::string> fields = split_fields(stripped);
    const std::size_t expected = has_mem_column ? 4 : 3;
    if (fields.size() != expected) {
      throw parse_error("line " + std::to_string(line_no) + ": expected " +
                        std::to_string(expected) + " fields, got " +
                        std::to_string(fields.size()));
    }

    long long id = -1;
    {
      const std::string& f = fields[0];
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), id);
      if (ec != std::errc{} || ptr != f.data() + f.size()) {
        throw parse_error("line " + std::to_string(line_no) +
                          ": cannot parse task id from '" + f + "'");
      }
    }
    if (id < 0) {
      throw std::invalid_argument("line " + std::to_string(line_no) +
                                  ": negative task id");
    }
    if (!seen.insert(static_cast<TaskId>(id)).second) {
      throw std::invalid_argument("line " + std::to_string(line_no) +
                                  ": duplicate task id " +
                                  std::to_string(id));
    }

    Task t;
    t.id = static_cast<TaskId>(id);
    t.comm_time = parse_value(fields[1], line_no, "comm_time");
    t.comp_time = parse_value(fields[2], line_no, "comp_time");
    t.mem_req = has_mem_column ? parse_value(fields[3], line_no, "mem_bytes")
                               : t.comm_time;
    tasks.push_back(t);
  }
  if (!header_seen) {
    throw parse_error("line 1: empty trace, expected header '" +
                      std::string(kHeader4) + "'");
  }
  return tasks;
}

std::vector<Task> read_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot open trace file: " + path);
  }
  return read_trace(in);
}

void write_trace(std::ostream& out, std::span<const Task> tasks) {
  out << kHeader4 << '\n';
  for (const Task& t : tasks) {
    out << t.id << ',' << format_value(t.comm_time) << ','
        << format_value(t.comp_time) << ',' << format_value(t.mem_req)
        << '\n';
  }
}

void write_trace_file(const std::string& path, std::span<const Task> tasks) {
  std::ofstream out(path);
  if (!out) {
    throw std::invalid_argument("cannot open output file: " + path);
  }
  write_trace(out, tasks);
}

std::vector<std::vector<Task>> batch_tasks(std::span<const Task> tasks,
                                           std::size_t size) {
  if (size == 0) {
    throw std::invalid_argument("batch size must be at least 1");
  }
  std::vector<std::vector<Task>> out;
  for (std::size_t i = 0; i < tasks.size(); i += size) {
    const std::size_t end = std::min(i + size, tasks.size());
    out.emplace_back(tasks.begin() + i, tasks.begin() + end);
  }
  return out;
}

Schedule schedule_in_batches(const Instance& instance, HeuristicId heuristic,
                             std::size_t size) {
  Schedule out;
  double barrier = 0.0;
  for (auto& batch : batch_tasks(instance.tasks(), size)) {
    Instance sub(std::move(batch), instance.capacity());
    const HeuristicRun run = run_heuristic(sub, heuristic);
    for (ScheduleEntry e : run.schedule.entries()) {
      e.comm_start += barrier;
      e.comm_end += barrier;
      e.comp_start += barrier;
      e.comp_end += barrier;
      out.add(e);
    }
    barrier += run.makespan;
  }
  return out;
}

double batched_omim(std::span<const Task> tasks, std::size_t size) {
  double total = 0.0;
  for (const auto& batch : batch_tasks(tasks, size)) {
    total += omim(batch);
  }
  return total;
}

}  // namespace dtsched
