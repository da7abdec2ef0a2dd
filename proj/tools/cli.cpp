#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "trsp/annealer.hpp"
#include "trsp/bench.hpp"
#include "trsp/exact.hpp"
#include "trsp/instance.hpp"
#include "trsp/linear_model.hpp"
#include "trsp/mip.hpp"
#include "trsp/plan.hpp"
#include "trsp/qubo.hpp"
#include "trsp/schedule.hpp"
#include "trsp/version.hpp"

namespace trsp::cli {

namespace {

namespace fs = std::filesystem;

// A domain-level failure whose message has already been reported.
struct DomainFailure {
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path);
}

std::string with_extension(const std::string& path, const std::string& ext) {
  return fs::path(path).replace_extension(ext).string();
}

std::string format_number(double x) {
  std::ostringstream ss;
  ss.precision(17);
  ss << x;
  return ss.str();
}

RhoProfile profile_option(const std::string& name) {
  const auto p = parse_rho_profile(name);
  if (!p) throw CLI::ValidationError("--rho-profile", "unknown profile " + name);
  return *p;
}

struct Options {
  // shared
  std::string instance, out, out_dir, schedule;
  std::uint64_t seed = 1;

  // gen
  int n = 0, k = 0, index = 1;
  // lib
  std::string config;
  // qubo, solve
  std::string rho_profile;
  std::int64_t steps = 0;
  bool auto_budget = false;
  int replicas = 1, threads = 0;
  std::optional<double> max_seconds_opt;
  std::string trace_out, clock = "sweeps";
  // exact
  std::int64_t max_nodes = SearchLimits{}.max_nodes;
  double max_seconds = SearchLimits{}.max_seconds;
  // mip, check
  std::string model = "time-indexed", model_file, solution, solution_out;
  // gantt
  std::string format = "ascii";
  // bench, rel-runtime
  std::string plan, trace;
  std::optional<int> jobs;
  double target = 0.0, cap = 3600.0;
};

void print_violations(std::ostream& out, const std::vector<Violation>& violations) {
  for (const Violation& v : violations) out << "  " << describe(v) << "\n";
}

int cmd_gen(const Options& o, std::ostream& out) {
  const Instance inst = generate_instance({o.n, o.k}, o.seed, {}, o.index);
  save_instance(inst, o.out);
  out << "wrote " << o.out << ": id " << inst.id() << ", T = " << time_horizon(inst)
      << ", QUBO variables = " << qubo_variable_count(inst) << "\n";
  return kExitOk;
}

int cmd_lib(const Options& o, std::ostream& out) {
  const Library lib = generate_library(parse_library_config(read_file(o.config)));
  std::string index = "instance,group_n,group_k,subset,variables,file\n";
  auto emit = [&](const std::vector<Instance>& list, const std::string& subset) {
    for (const Instance& inst : list) {
      const std::string rel = subset + "/" + file_stem(inst.id()) + ".trsp";
      save_instance(inst, (fs::path(o.out_dir) / rel).string());
      index += "\"" + inst.id() + "\"," + std::to_string(inst.num_samples()) + "," +
               std::to_string(inst.num_photos()) + "," + subset + "," +
               std::to_string(qubo_variable_count(inst)) + "," + rel + "\n";
    }
  };
  fs::create_directories(fs::path(o.out_dir) / "minor");
  fs::create_directories(fs::path(o.out_dir) / "major");
  emit(lib.minor, "minor");
  emit(lib.major, "major");
  write_file((fs::path(o.out_dir) / "index.csv").string(), index);
  out << "wrote " << lib.minor.size() << " minor and " << lib.major.size()
      << " major instances to " << o.out_dir << "\n";
  return kExitOk;
}

int cmd_qubo(const Options& o, std::ostream& out) {
  const Instance inst = load_instance(o.instance);
  const RhoProfile profile = profile_option(o.rho_profile.empty() ? "leap" : o.rho_profile);
  const QuboProblem problem = build_qubo(inst, profile_weights(profile, inst));
  write_file(o.out, write_qubo(problem));
  out << "wrote " << o.out << ": " << problem.size() << " variables, " << problem.nonzeros()
      << " nonzeros, profile " << rho_profile_name(profile) << "\n";
  return kExitOk;
}

int cmd_solve(const Options& o, std::ostream& out) {
  const Instance inst = load_instance(o.instance);
  const RhoProfile profile = profile_option(o.rho_profile.empty() ? "auto" : o.rho_profile);
  const QuboProblem problem = build_qubo(inst, profile_weights(profile, inst));

  AnnealConfig config;
  if (o.auto_budget) {
    config.steps = steps_budget(problem.size());
  } else if (o.steps > 0) {
    config.steps = o.steps;
  }
  config.replicas = o.replicas;
  config.seed = o.seed;
  config.threads = o.threads;
  config.max_seconds = o.max_seconds_opt;
  config.clock = o.clock == "wall" ? TraceClock::kWall : TraceClock::kSweeps;
  const AnnealResult result = anneal(problem, config);

  const std::string schedule_path = o.out.empty() ? with_extension(o.instance, ".schedule") : o.out;
  const std::string trace_path =
      o.trace_out.empty() ? with_extension(o.instance, ".trace.csv") : o.trace_out;
  std::string trace = "# clock: " + o.clock + "\nseconds,energy\n";
  for (const TracePoint& p : result.trace) {
    trace += format_number(p.seconds) + "," + format_number(p.energy) + "\n";
  }
  write_file(trace_path, trace);

  out << "instance " << inst.id() << ": " << problem.size() << " variables, " << config.steps
      << " sweeps x " << config.replicas << " replicas, profile " << rho_profile_name(profile)
      << "\n";
  out << "best energy " << format_number(result.best_energy) << " (replica "
      << result.best_replica << ")\n";
  const Decoded decoded = decode(inst, problem, result.best);
  if (const Schedule* s = std::get_if<Schedule>(&decoded)) {
    write_file(schedule_path, write_program(s->program, objective(*s)));
    out << "feasible, objective " << objective(*s) << "; wrote " << schedule_path << " and "
        << trace_path << "\n";
    return kExitOk;
  }
  const auto& report = std::get<InfeasibleReport>(decoded);
  out << "infeasible; penalties:";
  for (int t = 1; t < kTermCount; ++t) {
    out << " " << term_name(static_cast<Term>(t)) << "=" << format_number(report.breakdown[t]);
  }
  out << "\n";
  print_violations(out, report.violations);
  throw DomainFailure{"annealer returned an infeasible assignment"};
}

int cmd_exact(const Options& o, std::ostream& out) {
  const Instance inst = load_instance(o.instance);
  SearchLimits limits;
  limits.max_nodes = o.max_nodes;
  limits.max_seconds = o.max_seconds;
  const OracleResult r = branch_and_bound(inst, limits);
  out << "objective " << r.objective << (r.proven_optimal ? " (optimal)" : " (limit reached)")
      << ", " << r.nodes << " nodes\n";
  if (!o.out.empty()) {
    write_file(o.out, write_program(r.schedule.program, r.objective));
    out << "wrote " << o.out << "\n";
  }
  return kExitOk;
}

int cmd_mip(const Options& o, std::ostream& out) {
  const Instance inst = load_instance(o.instance);
  const auto kind = parse_model_kind(o.model);
  if (!kind) throw CLI::ValidationError("--model", "must be sequence or time-indexed");
  const LinearModel model = *kind == ModelKind::kSequence ? build_sequence_model(inst)
                                                          : build_time_indexed_model(inst);
  write_file(o.out, write_lp(model));
  out << "wrote " << o.out << ": " << model_kind_name(*kind) << " model, "
      << model.variables().size() << " variables (" << model.num_binaries() << " binary), "
      << model.constraints().size() << " constraints\n";
  if (!o.solution_out.empty()) {
    const OracleResult r = branch_and_bound(inst);
    const Assignment a = *kind == ModelKind::kSequence ? sequence_assignment(inst, r.schedule)
                                                       : time_indexed_assignment(inst, r.schedule);
    write_file(o.solution_out, write_solution(model, a));
    out << "wrote " << o.solution_out << ": oracle objective " << r.objective
        << (r.proven_optimal ? " (optimal)" : " (limit reached)") << "\n";
  }
  return kExitOk;
}

int cmd_check(const Options& o, std::ostream& out) {
  if (!o.schedule.empty()) {
    if (o.instance.empty()) throw CLI::ValidationError("--schedule", "requires --instance");
    const Instance inst = load_instance(o.instance);
    const SimulationResult sim = simulate(inst, read_program(read_file(o.schedule)));
    if (sim.feasible()) {
      out << "feasible, objective " << objective(*sim.schedule) << "\n";
      return kExitOk;
    }
    out << sim.violations.size() << " violations:\n";
    print_violations(out, sim.violations);
    throw DomainFailure{"schedule violates the rules"};
  }
  if (o.model_file.empty() || o.solution.empty()) {
    throw CLI::ValidationError("check", "needs --model-file and --solution, or --instance and --schedule");
  }
  const LinearModel model = read_lp(read_file(o.model_file));
  const Assignment a = read_solution(model, read_file(o.solution));
  const auto violations = check_assignment(model, a);
  if (!violations.empty()) {
    out << violations.size() << " violations:\n";
    for (const ConstraintViolation& v : violations) out << "  " << v.name << ": " << v.detail << "\n";
    throw DomainFailure{"solution violates the model"};
  }
  out << "assignment satisfies all " << model.constraints().size() << " constraints, objective "
      << format_number(objective_value(model, a)) << "\n";
  if (!o.instance.empty()) {
    const Instance inst = load_instance(o.instance);
    try {
      const Schedule s = decode_solution(inst, model.kind(), a);
      out << "decoded schedule feasible, objective " << objective(s) << "\n";
    } catch (const DecodeMismatch& e) {
      out << "decoded schedule rejected:\n";
      print_violations(out, e.violations());
      throw DomainFailure{"decoded schedule violates the rules"};
    }
  }
  return kExitOk;
}

int cmd_gantt(const Options& o, std::ostream& out) {
  const Instance inst = load_instance(o.instance);
  const SimulationResult sim = simulate(inst, read_program(read_file(o.schedule)));
  if (!sim.feasible()) {
    out << sim.violations.size() << " violations:\n";
    print_violations(out, sim.violations);
    throw DomainFailure{"schedule violates the rules"};
  }
  if (o.format == "svg") {
    if (o.out.empty()) throw CLI::ValidationError("--format svg", "requires --out");
    write_file(o.out, render_gantt(*sim.schedule, GanttStyle::kSvg));
    out << "wrote " << o.out << "\n";
  } else if (o.out.empty()) {
    out << render_gantt(*sim.schedule, GanttStyle::kAscii);
  } else {
    write_file(o.out, render_gantt(*sim.schedule, GanttStyle::kAscii));
    out << "wrote " << o.out << "\n";
  }
  return kExitOk;
}

int cmd_bench(const Options& o, std::ostream& out) {
  BenchPlan plan = parse_plan(read_file(o.plan), fs::path(o.plan).parent_path());
  if (o.jobs) plan.jobs = *o.jobs;
  const BenchRun run = run_benchmark(plan);
  write_bench_outputs(run, plan.clock, o.out_dir);
  int feasible = 0, failed = 0;
  for (const BenchRecord& r : run.records) {
    feasible += r.feasible;
    failed += !r.error.empty();
  }
  out << run.records.size() << " records (" << feasible << " feasible, " << failed
      << " with errors) written to " << o.out_dir << "\n";
  for (const Comparison& c : compare_approaches(run.records)) {
    out << c.first << " vs " << c.second << ": " << c.significance << "\n";
  }
  return kExitOk;
}

int cmd_rel_runtime(const Options& o, std::ostream& out) {
  const SolverTrace trace = read_trace_csv(read_file(o.trace));
  out << format_number(relative_runtime(trace, o.target, o.cap)) << "\n";
  return kExitOk;
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Transport robot scheduling: instances, QUBO annealing, MIP export, benchmarks",
               "trsp"};
  app.set_version_flag("--version", std::string("trsp ") + kVersion + " (instance " +
                                        kInstanceFormat + ", schedule " + kScheduleFormat +
                                        ", qubo " + kQuboFormat + ", " + kLpFormat + ")");
  app.require_subcommand(1);
  Options o;
  using Handler = int (*)(const Options&, std::ostream&);
  Handler handler = nullptr;
  auto sub = [&](const char* name, const char* help, Handler h) {
    CLI::App* s = app.add_subcommand(name, help);
    s->callback([&handler, h] { handler = h; });
    return s;
  };

  auto* gen = sub("gen", "Generate one instance", cmd_gen);
  gen->add_option("--n", o.n, "Number of samples")->required()->check(CLI::PositiveNumber);
  gen->add_option("--k", o.k, "Number of photos per sample")->required()->check(CLI::PositiveNumber);
  gen->add_option("--seed", o.seed, "Generator seed")->capture_default_str();
  gen->add_option("--index", o.index, "Index within the group")->capture_default_str();
  gen->add_option("--out", o.out, "Instance file to write")->required();

  auto* lib = sub("lib", "Generate an instance library from a JSON config", cmd_lib);
  lib->add_option("--config", o.config, "Library config (JSON)")->required()->check(CLI::ExistingFile);
  lib->add_option("--out-dir", o.out_dir, "Output directory")->required();

  auto* qubo = sub("qubo", "Export the QUBO model", cmd_qubo);
  qubo->add_option("--instance", o.instance)->required()->check(CLI::ExistingFile);
  qubo->add_option("--rho-profile", o.rho_profile, "leap, fda, fdah or auto (default leap)");
  qubo->add_option("--out", o.out, "Coordinate file to write")->required();

  auto* solve = sub("solve", "Solve with parallel-trial annealing", cmd_solve);
  solve->add_option("--instance", o.instance)->required()->check(CLI::ExistingFile);
  solve->add_option("--rho-profile", o.rho_profile, "leap, fda, fdah or auto (default auto)");
  auto* steps = solve->add_option("--steps", o.steps, "Sweeps per replica (default 100000)")
                    ->check(CLI::PositiveNumber);
  solve->add_flag("--auto-budget", o.auto_budget, "Sweeps from the variable-count tiers")
      ->excludes(steps);
  solve->add_option("--replicas", o.replicas)->capture_default_str()->check(CLI::PositiveNumber);
  solve->add_option("--seed", o.seed)->capture_default_str();
  solve->add_option("--threads", o.threads, "Worker threads, 0 for all cores")->capture_default_str();
  solve->add_option("--max-seconds", o.max_seconds_opt, "Wall-time cap")->check(CLI::PositiveNumber);
  solve->add_option("--clock", o.clock, "Trace clock")
      ->capture_default_str()
      ->check(CLI::IsMember({"sweeps", "wall"}));
  solve->add_option("--out", o.out, "Schedule file (default <instance>.schedule)");
  solve->add_option("--trace-out", o.trace_out, "Trace CSV (default <instance>.trace.csv)");

  auto* exact = sub("exact", "Solve exactly by branch and bound", cmd_exact);
  exact->add_option("--instance", o.instance)->required()->check(CLI::ExistingFile);
  exact->add_option("--max-nodes", o.max_nodes)->capture_default_str();
  exact->add_option("--max-seconds", o.max_seconds)->capture_default_str();
  exact->add_option("--out", o.out, "Schedule file to write");

  auto* mip = sub("mip", "Export a MIP model as an LP file", cmd_mip);
  mip->add_option("--instance", o.instance)->required()->check(CLI::ExistingFile);
  mip->add_option("--model", o.model)
      ->capture_default_str()
      ->check(CLI::IsMember({"sequence", "time-indexed"}));
  mip->add_option("--out", o.out, "LP file to write")->required();
  mip->add_option("--solution-out", o.solution_out,
                  "Also write the assignment of the branch-and-bound schedule");

  auto* check = sub("check", "Check a MIP solution or a schedule file", cmd_check);
  check->add_option("--model-file", o.model_file)->check(CLI::ExistingFile);
  check->add_option("--solution", o.solution)->check(CLI::ExistingFile);
  check->add_option("--instance", o.instance, "Decode against this instance")
      ->check(CLI::ExistingFile);
  check->add_option("--schedule", o.schedule, "Simulate this schedule file")
      ->check(CLI::ExistingFile);

  auto* gantt = sub("gantt", "Render a schedule", cmd_gantt);
  gantt->add_option("--instance", o.instance)->required()->check(CLI::ExistingFile);
  gantt->add_option("--schedule", o.schedule)->required()->check(CLI::ExistingFile);
  gantt->add_option("--format", o.format)->capture_default_str()->check(CLI::IsMember({"ascii", "svg"}));
  gantt->add_option("--out", o.out, "Output file (ascii defaults to standard output)");

  auto* bench = sub("bench", "Run a benchmark plan", cmd_bench);
  bench->add_option("--plan", o.plan, "Plan (JSON)")->required()->check(CLI::ExistingFile);
  bench->add_option("--out-dir", o.out_dir)->required();
  bench->add_option("--jobs", o.jobs, "Override the plan's worker count")->check(CLI::PositiveNumber);

  auto* rel = sub("rel-runtime", "Relative runtime of a trace against a target", cmd_rel_runtime);
  rel->add_option("--trace", o.trace, "Trace CSV")->required()->check(CLI::ExistingFile);
  rel->add_option("--target", o.target)->required();
  rel->add_option("--cap", o.cap)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    err << "\n" << app.help();
    return kExitUsage;
  }

  try {
    return handler(o, out);
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainFailure& e) {
    err << "error: " << e.message << "\n";
    return kExitDomain;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  }
}

}  // namespace trsp::cli
