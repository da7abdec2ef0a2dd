#ifndef TRSP_BENCH_HPP
#define TRSP_BENCH_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "trsp/instance.hpp"

namespace trsp {

struct TraceSample {
  double seconds = 0.0;
  double objective = 0.0;

  friend bool operator==(const TraceSample&, const TraceSample&) = default;
};

// Best-so-far objective over time since submission.
using SolverTrace = std::vector<TraceSample>;

class EmptyTrace : public std::invalid_argument {
 public:
  EmptyTrace() : std::invalid_argument("empty solver trace") {}
};

// Strictly increasing times and non-increasing objectives.
bool is_valid_trace(const SolverTrace& trace);

// Earliest trace time whose objective is at most target; cap_seconds when the
// trace never gets there. Throws EmptyTrace, and std::invalid_argument when
// cap_seconds is not positive.
double relative_runtime(const SolverTrace& trace, double target, double cap_seconds);

// Trace CSV: header "seconds,objective".
std::string write_trace_csv(const SolverTrace& trace);
SolverTrace read_trace_csv(std::string_view text);

struct BenchRecord {
  std::string instance;
  Group group;
  std::string approach;
  double objective = 0.0;
  bool feasible = false;
  double seconds = 0.0;
  std::string trace_file;  // relative to the output directory; may be empty
  std::string error;       // set when the run failed

  friend bool operator==(const BenchRecord&, const BenchRecord&) = default;
};

struct GroupSummary {
  Group group;
  std::string approach;
  int runs = 0;
  int feasible = 0;
  // Over feasible runs; zero when there are none.
  double objective_median = 0.0;
  double objective_mean = 0.0;
  double objective_min = 0.0;
  double objective_max = 0.0;
  // Over all runs.
  double seconds_median = 0.0;
  double seconds_mean = 0.0;
  double seconds_min = 0.0;
  double seconds_max = 0.0;

  friend bool operator==(const GroupSummary&, const GroupSummary&) = default;
};

// One summary per (N, K, approach), sorted by that key.
std::vector<GroupSummary> group_stats(const std::vector<BenchRecord>& records);

// Records CSV: instance,group_n,group_k,approach,objective,feasible,seconds
// followed by trace and error columns. `clock_note` is written as a leading
// comment line.
std::string export_records_csv(const std::vector<BenchRecord>& records,
                               std::string_view clock_note = "");
std::vector<BenchRecord> parse_records_csv(std::string_view text);

std::string export_summary_csv(const std::vector<GroupSummary>& summaries);
std::vector<GroupSummary> parse_summary_csv(std::string_view text);

// Pairwise Welch tests of the objectives of two approaches over the
// instances where both are feasible.
struct Comparison {
  std::string first;
  std::string second;
  int pairs = 0;
  double mean_first = 0.0;
  double mean_second = 0.0;
  double t = 0.0;
  double dof = 0.0;
  double p = 0.5;
  std::string significance;
};

std::vector<Comparison> compare_approaches(const std::vector<BenchRecord>& records);
std::string export_comparisons_csv(const std::vector<Comparison>& comparisons);

// Filesystem-friendly version of an instance id: runs of characters other
// than letters and digits become one '_'.
std::string file_stem(std::string_view id);

}  // namespace trsp

#endif  // TRSP_BENCH_HPP
