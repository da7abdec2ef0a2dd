#include "trsp/plan.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "trsp/annealer.hpp"
#include "trsp/mip.hpp"
#include "trsp/random.hpp"

namespace trsp {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) h = (h ^ c) * 0x100000001b3ULL;
  return h;
}

// Keeps strict improvements; a later point at the same time replaces the
// earlier one.
SolverTrace normalize(const std::vector<TraceSample>& points) {
  SolverTrace out;
  for (const TraceSample& p : points) {
    if (!out.empty() && p.objective >= out.back().objective) continue;
    if (!out.empty() && p.seconds <= out.back().seconds) {
      out.back().objective = p.objective;
    } else {
      out.push_back(p);
    }
  }
  return out;
}

struct Outcome {
  BenchRecord record;
  std::optional<SolverTrace> trace;
};

Outcome run_anneal(const BenchPlan& plan, const Approach& a, const Instance& inst,
                   bool single_worker) {
  Outcome out;
  const QuboProblem problem = build_qubo(inst, profile_weights(a.profile, inst));
  const std::int64_t n = problem.size();
  AnnealConfig config;
  config.steps = a.steps.value_or(steps_budget(n));
  config.replicas = a.replicas;
  config.seed = pair_seed(plan.seed, inst.id(), a.name);
  config.threads = single_worker ? 0 : 1;
  config.clock = plan.clock == BenchClock::kLogical ? TraceClock::kSweeps : TraceClock::kWall;
  switch (a.time_cap) {
    case Approach::TimeCap::kNone: break;
    case Approach::TimeCap::kLeap: config.max_seconds = time_budget_leap(n); break;
    case Approach::TimeCap::kHybrid: config.max_seconds = time_budget_hybrid(n); break;
    case Approach::TimeCap::kFixed: config.max_seconds = a.cap_seconds; break;
  }
  // A wall-time cap would make logical runs depend on machine speed.
  if (plan.clock == BenchClock::kLogical) config.max_seconds.reset();

  const auto start = Clock::now();
  const AnnealResult result = anneal(problem, config);
  const double wall = elapsed(start);

  const double rho0 = problem.weights()[static_cast<int>(Term::kObjective)];
  std::vector<TraceSample> points;
  for (const TracePoint& p : result.trace) points.push_back({p.seconds, p.energy / rho0});
  out.trace = normalize(points);

  BenchRecord& r = out.record;
  r.seconds = plan.clock == BenchClock::kLogical ? static_cast<double>(result.sweeps) : wall;
  const Decoded decoded = decode(inst, problem, result.best);
  if (const Schedule* s = std::get_if<Schedule>(&decoded)) {
    r.feasible = true;
    r.objective = static_cast<double>(objective(*s));
  } else {
    r.objective = result.best_energy / rho0;
  }
  return out;
}

Outcome run_exact(const BenchPlan& plan, const Approach& a, const Instance& inst) {
  Outcome out;
  SearchLimits limits = a.limits;
  if (plan.clock == BenchClock::kLogical) limits.max_seconds = 1e300;
  const auto start = Clock::now();
  const OracleResult result = branch_and_bound(inst, limits);
  const double wall = elapsed(start);
  const SimulationResult check =
      simulate(inst, result.schedule.program, time_horizon(inst));
  BenchRecord& r = out.record;
  r.feasible = check.feasible();
  r.objective = static_cast<double>(result.objective);
  r.seconds = plan.clock == BenchClock::kLogical ? static_cast<double>(result.nodes) : wall;
  if (!result.proven_optimal) r.error = "search limit reached; incumbent reported";
  out.trace = SolverTrace{{r.seconds, r.objective}};
  return out;
}

Outcome run_import(const Approach& a, const Instance& inst) {
  Outcome out;
  const std::filesystem::path base = a.directory / file_stem(inst.id());
  const LinearModel model = read_lp(read_file(base.string() + ".lp"));
  if (model.kind() != a.model) {
    throw std::runtime_error("LP export is a " + std::string(model_kind_name(model.kind())) +
                             " model, expected " + std::string(model_kind_name(a.model)));
  }
  const LinearModel expected = a.model == ModelKind::kSequence
                                   ? build_sequence_model(inst)
                                   : build_time_indexed_model(inst);
  if (!structurally_equal(model, expected)) {
    throw std::runtime_error("LP export does not match the instance");
  }
  const Assignment assignment = read_solution(model, read_file(base.string() + ".sol"));

  BenchRecord& r = out.record;
  const std::filesystem::path trace_path = base.string() + ".trace.csv";
  if (std::filesystem::exists(trace_path)) {
    SolverTrace trace = read_trace_csv(read_file(trace_path));
    if (!is_valid_trace(trace)) throw std::runtime_error("invalid trace " + trace_path.string());
    if (!trace.empty()) r.seconds = trace.back().seconds;
    out.trace = std::move(trace);
  }
  const auto violations = check_assignment(model, assignment);
  if (!violations.empty()) {
    r.objective = objective_value(model, assignment);
    r.error = std::to_string(violations.size()) + " constraint violations, first " +
              violations.front().name + ": " + violations.front().detail;
    return out;
  }
  try {
    const Schedule s = decode_solution(inst, model.kind(), assignment);
    r.feasible = true;
    r.objective = static_cast<double>(objective(s));
  } catch (const DecodeMismatch& e) {
    r.objective = objective_value(model, assignment);
    r.error = "decoded schedule rejected: " + describe(e.violations().front());
  }
  return out;
}

Approach parse_approach(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  Approach a;
  a.name = j.at("name").get<std::string>();
  if (a.name.empty()) throw ParseError(0, "approach name must not be empty");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "anneal") {
    a.kind = ApproachKind::kAnneal;
    const auto profile = parse_rho_profile(j.value("profile", std::string("auto")));
    if (!profile) throw ParseError(0, "unknown profile in approach " + a.name);
    a.profile = *profile;
    if (j.contains("steps")) {
      const auto& s = j["steps"];
      if (s.is_string()) {
        if (s.get<std::string>() != "auto") throw ParseError(0, "steps must be a number or \"auto\"");
      } else {
        a.steps = s.get<std::int64_t>();
        if (*a.steps < 1) throw ParseError(0, "steps must be positive");
      }
    }
    if (j.contains("seconds")) {
      const auto& s = j["seconds"];
      if (s.is_string()) {
        const std::string v = s.get<std::string>();
        if (v == "leap") {
          a.time_cap = Approach::TimeCap::kLeap;
        } else if (v == "hybrid") {
          a.time_cap = Approach::TimeCap::kHybrid;
        } else {
          throw ParseError(0, "seconds must be a number, \"leap\" or \"hybrid\"");
        }
      } else {
        a.time_cap = Approach::TimeCap::kFixed;
        a.cap_seconds = s.get<double>();
        if (!(a.cap_seconds > 0.0)) throw ParseError(0, "seconds must be positive");
      }
    }
    a.replicas = j.value("replicas", 1);
    if (a.replicas < 1) throw ParseError(0, "replicas must be positive");
  } else if (kind == "exact") {
    a.kind = ApproachKind::kExact;
    a.limits.max_nodes = j.value("max_nodes", a.limits.max_nodes);
    a.limits.max_seconds = j.value("max_seconds", a.limits.max_seconds);
  } else if (kind == "import") {
    a.kind = ApproachKind::kImport;
    const auto model = parse_model_kind(j.at("model").get<std::string>());
    if (!model) throw ParseError(0, "unknown model in approach " + a.name);
    a.model = *model;
    a.directory = base_dir / j.at("dir").get<std::string>();
  } else {
    throw ParseError(0, "unknown approach kind '" + kind + "'");
  }
  return a;
}

}  // namespace

std::uint64_t pair_seed(std::uint64_t seed, std::string_view instance_id,
                        std::string_view approach) {
  return derive_seed(seed, {fnv1a(instance_id), fnv1a(approach)});
}

BenchPlan parse_plan(std::string_view json_text, const std::filesystem::path& base_dir) {
  using nlohmann::json;
  BenchPlan plan;
  try {
    const json doc = json::parse(json_text);
    plan.seed = doc.value("seed", std::uint64_t{1});
    plan.jobs = doc.value("jobs", 1);
    if (plan.jobs < 1) throw ParseError(0, "jobs must be positive");
    const std::string clock = doc.value("clock", std::string("wall"));
    if (clock == "wall") {
      plan.clock = BenchClock::kWall;
    } else if (clock == "logical") {
      plan.clock = BenchClock::kLogical;
    } else {
      throw ParseError(0, "clock must be \"wall\" or \"logical\"");
    }
    if (doc.contains("library")) {
      const Library lib = generate_library(parse_library_config(doc["library"].dump()));
      const std::string subset = doc.value("subset", std::string("all"));
      if (subset != "minor" && subset != "major" && subset != "all") {
        throw ParseError(0, "subset must be minor, major or all");
      }
      if (subset != "major") plan.instances.insert(plan.instances.end(), lib.minor.begin(), lib.minor.end());
      if (subset != "minor") plan.instances.insert(plan.instances.end(), lib.major.begin(), lib.major.end());
    }
    for (const auto& path : doc.value("instances", json::array())) {
      plan.instances.push_back(load_instance((base_dir / path.get<std::string>()).string()));
    }
    for (const auto& a : doc.value("approaches", json::array())) {
      plan.approaches.push_back(parse_approach(a, base_dir));
    }
  } catch (const json::exception& e) {
    throw ParseError(0, std::string("plan: ") + e.what());
  }
  for (std::size_t i = 0; i < plan.approaches.size(); ++i) {
    for (std::size_t k = 0; k < i; ++k) {
      if (plan.approaches[i].name == plan.approaches[k].name) {
        throw ParseError(0, "duplicate approach name '" + plan.approaches[i].name + "'");
      }
    }
  }
  return plan;
}

BenchRun run_benchmark(const BenchPlan& plan) {
  struct Pair {
    const Instance* instance;
    const Approach* approach;
  };
  std::vector<Pair> pairs;
  for (const Instance& inst : plan.instances) {
    for (const Approach& a : plan.approaches) pairs.push_back({&inst, &a});
  }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) {
    return std::tie(x.instance->id(), x.approach->name) < std::tie(y.instance->id(), y.approach->name);
  });

  std::vector<Outcome> outcomes(pairs.size());
  const int workers = std::max(1, std::min<int>(plan.jobs, static_cast<int>(pairs.size())));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < pairs.size(); i = next++) {
      const Instance& inst = *pairs[i].instance;
      const Approach& a = *pairs[i].approach;
      Outcome out;
      try {
        switch (a.kind) {
          case ApproachKind::kAnneal: out = run_anneal(plan, a, inst, workers == 1); break;
          case ApproachKind::kExact: out = run_exact(plan, a, inst); break;
          case ApproachKind::kImport: out = run_import(a, inst); break;
        }
      } catch (const std::exception& e) {
        out = Outcome{};
        out.record.error = e.what();
      }
      out.record.instance = inst.id();
      out.record.group = {inst.num_samples(), inst.num_photos()};
      out.record.approach = a.name;
      outcomes[i] = std::move(out);
    }
  };
  {
    std::vector<std::jthread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
  }

  BenchRun run;
  for (Outcome& o : outcomes) {
    if (o.trace && !o.trace->empty()) {
      o.record.trace_file = "traces/" + file_stem(o.record.instance) + "__" +
                            file_stem(o.record.approach) + ".csv";
      run.traces.push_back({o.record.trace_file, std::move(*o.trace)});
    }
    run.records.push_back(std::move(o.record));
  }
  std::sort(run.traces.begin(), run.traces.end(),
            [](const TraceFile& a, const TraceFile& b) { return a.name < b.name; });
  return run;
}

std::string clock_note(BenchClock clock) {
  return clock == BenchClock::kWall
             ? "clock: local wall seconds from submission to solution; model construction and "
               "network delay excluded"
             : "clock: logical; seconds columns count annealer sweeps and search nodes";
}

void write_bench_outputs(const BenchRun& run, BenchClock clock,
                         const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir / "traces");
  auto write = [&](const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) throw std::runtime_error("cannot write " + path.string());
  };
  write(out_dir / "records.csv", export_records_csv(run.records, clock_note(clock)));
  write(out_dir / "summary.csv", export_summary_csv(group_stats(run.records)));
  write(out_dir / "comparisons.csv", export_comparisons_csv(compare_approaches(run.records)));
  for (const TraceFile& t : run.traces) write(out_dir / t.name, write_trace_csv(t.trace));
}

}  // namespace trsp
