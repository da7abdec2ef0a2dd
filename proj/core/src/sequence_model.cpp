#include <cmath>

#include "trsp/mip.hpp"

namespace trsp {

namespace {

// A robot carry expressed through the event it serves. Its slot is
// tau + shift. The start/end flags are true only when that endpoint is a
// machine for every schedule; the mixer exit may end and the shaker entry may
// start at either the rack or a machine, and both count as rack-side (the
// direct case is caught through the partner event on the same slot).
struct RobotOp {
  Event event;
  int shift;
  bool start_machine;
  bool end_machine;
};

std::vector<RobotOp> robot_ops(int sample, int num_photos) {
  std::vector<RobotOp> ops = {
      {{sample, 1, 0}, -1, false, true},
      {{sample, 1, 1}, 0, true, false},
      {{sample, 2, 0}, -1, false, true},
      {{sample, 2, 1}, 0, true, true},
  };
  for (int k = 1; k <= num_photos; ++k) ops.push_back({{sample, 2 + k, 1}, 0, true, false});
  for (int k = 2; k <= num_photos; ++k) ops.push_back({{sample, 2 + k, 0}, -1, false, true});
  return ops;
}

int separation(const RobotOp& first, const RobotOp& second) {
  return !first.end_machine && !second.start_machine ? 1 : 2;
}

std::string id(int j) { return std::to_string(j + 1); }

double value_of(const Assignment& a, const std::string& name) {
  auto it = a.find(name);
  if (it == a.end()) throw MissingVariable(name);
  return it->second;
}

}  // namespace

std::vector<Event> events(const Instance& instance) {
  std::vector<Event> out;
  for (int j = 0; j < instance.num_samples(); ++j) {
    for (int i = 1; i <= 2 + instance.num_photos(); ++i) {
      out.push_back({j, i, 0});
      out.push_back({j, i, 1});
    }
  }
  return out;
}

std::string event_variable(const Event& e) {
  return "tau_" + id(e.sample) + "_" + std::to_string(e.visit) + "_" + std::to_string(e.action);
}

DecodeMismatch::DecodeMismatch(std::vector<Violation> violations)
    : std::runtime_error("decoded schedule rejected: " +
                         (violations.empty() ? std::string("no program") : describe(violations.front()))),
      violations_(std::move(violations)) {}

ModelSize sequence_model_size(const Instance& instance) {
  const long long n = instance.num_samples();
  const long long k = instance.num_photos();
  const long long pairs = n * (n - 1) / 2;
  const long long ops = 3 + 2 * k;
  ModelSize s;
  s.binaries = pairs * (2 + k * k + ops * ops);
  s.variables = 2 * n * (2 + k) + s.binaries;
  s.constraints = n * (2 + k) + 2 * n + n * (k - 1) + 2 * s.binaries;
  return s;
}

LinearModel build_sequence_model(const Instance& instance) {
  const int n = instance.num_samples();
  const int k = instance.num_photos();
  const int horizon = time_horizon(instance);
  const double big_m = horizon + 2;
  LinearModel model(ModelKind::kSequence);

  for (const Event& e : events(instance)) {
    const double lower = e.visit == 1 && e.action == 0 ? 1.0 : 0.0;
    model.add_variable(event_variable(e), VarKind::kContinuous, lower, horizon - 1.0);
  }
  auto tau = [&](int j, int i, int a) { return model.index(event_variable({j, i, a})); };
  auto proc = [&](int j, int i) {
    return instance.proc(j, i == 1 ? Machine::kMixer : i == 2 ? Machine::kShaker : Machine::kBooth);
  };

  for (int j = 0; j < n; ++j) {
    for (int i = 1; i <= 2 + k; ++i) {
      model.add_constraint("dur_" + id(j) + "_" + std::to_string(i),
                           {{tau(j, i, 1), 1.0}, {tau(j, i, 0), -1.0}}, Sense::kEqual, proc(j, i));
    }
  }
  for (int j = 0; j < n; ++j) {
    model.add_constraint("transfer_" + id(j), {{tau(j, 2, 0), 1.0}, {tau(j, 1, 1), -1.0}},
                         Sense::kGreaterEqual, 1.0);
  }
  for (int j = 0; j < n; ++j) {
    model.add_constraint("photo1_" + id(j), {{tau(j, 3, 0), 1.0}, {tau(j, 2, 1), -1.0}},
                         Sense::kEqual, 1.0);
  }
  for (int j = 0; j < n; ++j) {
    for (int g = 1; g < k; ++g) {
      model.add_constraint("gap_" + id(j) + "_" + std::to_string(g),
                           {{tau(j, 3 + g, 0), 1.0}, {tau(j, 2 + g, 1), -1.0}}, Sense::kEqual,
                           instance.gaps(j)[g - 1]);
    }
  }

  // Either x before y (b = 1): y_place >= x_pick + 1, or the reverse.
  auto disjunction = [&](const std::string& name, int x_place, int x_pick, int y_place, int y_pick) {
    const int b = model.add_variable(name, VarKind::kBinary);
    model.add_constraint(name + "_a", {{y_place, 1.0}, {x_pick, -1.0}, {b, -big_m}},
                         Sense::kGreaterEqual, 1.0 - big_m);
    model.add_constraint(name + "_b", {{x_place, 1.0}, {y_pick, -1.0}, {b, big_m}},
                         Sense::kGreaterEqual, 1.0);
  };
  for (int j = 0; j < n; ++j) {
    for (int jp = j + 1; jp < n; ++jp) {
      for (int m = 1; m <= 2; ++m) {
        disjunction("mo_" + std::to_string(m) + "_" + id(j) + "_" + id(jp), tau(j, m, 0),
                    tau(j, m, 1), tau(jp, m, 0), tau(jp, m, 1));
      }
      for (int a = 1; a <= k; ++a) {
        for (int c = 1; c <= k; ++c) {
          disjunction("po_" + id(j) + "_" + std::to_string(a) + "_" + id(jp) + "_" + std::to_string(c),
                      tau(j, 2 + a, 0), tau(j, 2 + a, 1), tau(jp, 2 + c, 0), tau(jp, 2 + c, 1));
        }
      }
      const auto ops_j = robot_ops(j, k);
      const auto ops_jp = robot_ops(jp, k);
      for (std::size_t x = 0; x < ops_j.size(); ++x) {
        for (std::size_t y = 0; y < ops_jp.size(); ++y) {
          const RobotOp& c = ops_j[x];
          const RobotOp& d = ops_jp[y];
          const std::string name = "ro_" + id(j) + "_" + std::to_string(x + 1) + "_" + id(jp) +
                                   "_" + std::to_string(y + 1);
          const int b = model.add_variable(name, VarKind::kBinary);
          const int tc = tau(c.event.sample, c.event.visit, c.event.action);
          const int td = tau(d.event.sample, d.event.visit, d.event.action);
          // b = 1: slot(d) >= slot(c) + sep(c, d); b = 0: the reverse.
          model.add_constraint(name + "_a", {{td, 1.0}, {tc, -1.0}, {b, -big_m}},
                               Sense::kGreaterEqual,
                               separation(c, d) - big_m - d.shift + c.shift);
          model.add_constraint(name + "_b", {{tc, 1.0}, {td, -1.0}, {b, big_m}},
                               Sense::kGreaterEqual, separation(d, c) - c.shift + d.shift);
        }
      }
    }
  }

  LinearTerms objective;
  for (int j = 0; j < n; ++j) objective.emplace_back(tau(j, 2 + k, 1), 1.0);
  model.set_objective(std::move(objective), n);
  return model;
}

Assignment sequence_assignment(const Instance& instance, const Schedule& schedule) {
  const int n = instance.num_samples();
  const int k = instance.num_photos();
  const std::vector<SampleStarts> starts = starts_of(schedule, n);
  auto start_of = [&](int j, int i) {
    if (i == 1) return starts[j].mixer;
    if (i == 2) return starts[j].shaker;
    return starts[j].photos[i - 3];
  };
  auto time_of = [&](const Event& e) {
    const int s = start_of(e.sample, e.visit);
    if (e.action == 0) return s;
    const Machine m = e.visit == 1 ? Machine::kMixer : e.visit == 2 ? Machine::kShaker : Machine::kBooth;
    return s + instance.proc(e.sample, m);
  };

  Assignment a;
  for (const Event& e : events(instance)) a[event_variable(e)] = time_of(e);
  for (int j = 0; j < n; ++j) {
    for (int jp = j + 1; jp < n; ++jp) {
      for (int m = 1; m <= 2; ++m) {
        a["mo_" + std::to_string(m) + "_" + id(j) + "_" + id(jp)] =
            start_of(j, m) < start_of(jp, m) ? 1.0 : 0.0;
      }
      for (int x = 1; x <= k; ++x) {
        for (int y = 1; y <= k; ++y) {
          a["po_" + id(j) + "_" + std::to_string(x) + "_" + id(jp) + "_" + std::to_string(y)] =
              start_of(j, 2 + x) < start_of(jp, 2 + y) ? 1.0 : 0.0;
        }
      }
      const auto ops_j = robot_ops(j, k);
      const auto ops_jp = robot_ops(jp, k);
      for (std::size_t x = 0; x < ops_j.size(); ++x) {
        for (std::size_t y = 0; y < ops_jp.size(); ++y) {
          const int sc = time_of(ops_j[x].event) + ops_j[x].shift;
          const int sd = time_of(ops_jp[y].event) + ops_jp[y].shift;
          a["ro_" + id(j) + "_" + std::to_string(x + 1) + "_" + id(jp) + "_" + std::to_string(y + 1)] =
              sc < sd ? 1.0 : 0.0;
        }
      }
    }
  }
  return a;
}

Schedule decode_sequence_solution(const Instance& instance, const Assignment& assignment) {
  const int n = instance.num_samples();
  const int k = instance.num_photos();
  // Constraints are differences with integer right-hand sides, so flooring
  // every event time keeps them satisfied.
  auto at = [&](int j, int i) {
    return static_cast<int>(std::floor(value_of(assignment, event_variable({j, i, 0})) + 1e-6));
  };
  std::vector<SampleStarts> starts(n);
  for (int j = 0; j < n; ++j) {
    starts[j].mixer = at(j, 1);
    starts[j].shaker = at(j, 2);
    for (int p = 1; p <= k; ++p) starts[j].photos.push_back(at(j, 2 + p));
  }
  SimulationResult sim = realize(instance, starts, time_horizon(instance));
  if (!sim.feasible()) throw DecodeMismatch(std::move(sim.violations));
  return std::move(*sim.schedule);
}

Schedule decode_solution(const Instance& instance, ModelKind kind, const Assignment& assignment) {
  return kind == ModelKind::kSequence ? decode_sequence_solution(instance, assignment)
                                      : decode_time_indexed_solution(instance, assignment);
}

}  // namespace trsp
