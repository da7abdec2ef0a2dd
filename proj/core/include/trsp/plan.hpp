#ifndef TRSP_PLAN_HPP
#define TRSP_PLAN_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "trsp/bench.hpp"
#include "trsp/exact.hpp"
#include "trsp/instance.hpp"
#include "trsp/linear_model.hpp"
#include "trsp/qubo.hpp"

namespace trsp {

// Wall: monotonic seconds. Logical: annealer sweeps and search nodes, which
// makes every output file reproducible byte for byte.
enum class BenchClock { kWall, kLogical };

enum class ApproachKind { kAnneal, kExact, kImport };

struct Approach {
  std::string name;
  ApproachKind kind = ApproachKind::kAnneal;

  // kAnneal
  RhoProfile profile = RhoProfile::kAuto;
  std::optional<std::int64_t> steps;  // none: steps_budget(n)
  enum class TimeCap { kNone, kLeap, kHybrid, kFixed };
  TimeCap time_cap = TimeCap::kNone;
  double cap_seconds = 0.0;  // kFixed only
  int replicas = 1;

  // kExact
  SearchLimits limits;

  // kImport: <dir>/<stem>.lp, <stem>.sol and optionally <stem>.trace.csv,
  // with <stem> = file_stem(instance id).
  ModelKind model = ModelKind::kTimeIndexed;
  std::filesystem::path directory;
};

struct BenchPlan {
  std::uint64_t seed = 1;
  int jobs = 1;
  BenchClock clock = BenchClock::kWall;
  std::vector<Instance> instances;
  std::vector<Approach> approaches;
};

// JSON plan. Relative paths resolve against base_dir. Throws ParseError.
//   {"seed": 1, "jobs": 1, "clock": "wall" | "logical",
//    "library": {<library config>}, "subset": "minor" | "major" | "all",
//    "instances": ["a.trsp", ...],
//    "approaches": [
//      {"name": "sa", "kind": "anneal", "profile": "leap",
//       "steps": "auto" | 100000, "seconds": "leap" | "hybrid" | 10.0,
//       "replicas": 1},
//      {"name": "bnb", "kind": "exact", "max_nodes": 1000000, "max_seconds": 60},
//      {"name": "ext", "kind": "import", "model": "time-indexed", "dir": "ext"}]}
BenchPlan parse_plan(std::string_view json_text, const std::filesystem::path& base_dir = {});

struct TraceFile {
  std::string name;  // relative path inside the output directory
  SolverTrace trace;
};

struct BenchRun {
  std::vector<BenchRecord> records;  // sorted by (instance id, approach)
  std::vector<TraceFile> traces;     // sorted by name
};

// Seed of one (instance, approach) pair; independent of plan order.
std::uint64_t pair_seed(std::uint64_t seed, std::string_view instance_id,
                        std::string_view approach);

// Runs every (instance, approach) pair on up to plan.jobs workers. Failures
// become records with `error` set; the run continues.
BenchRun run_benchmark(const BenchPlan& plan);

std::string clock_note(BenchClock clock);

// records.csv, summary.csv, comparisons.csv and traces/ in out_dir.
void write_bench_outputs(const BenchRun& run, BenchClock clock,
                         const std::filesystem::path& out_dir);

}  // namespace trsp

#endif  // TRSP_PLAN_HPP
