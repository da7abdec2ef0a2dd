#include <array>
#include <cmath>

#include "trsp/mip.hpp"

namespace trsp {

namespace {

using L = Location;

// Route r (1-based) as (from, to).
constexpr std::array<std::pair<Location, Location>, 8> kRoutes = {{
    {L::kRack, L::kMixer},     // r1
    {L::kMixer, L::kRack},     // r2
    {L::kRack, L::kShaker},    // r3
    {L::kMixer, L::kShaker},   // r4
    {L::kShaker, L::kBooth},   // r5
    {L::kBooth, L::kRack},     // r6
    {L::kRack, L::kBooth},     // r7
    {L::kShaker, L::kRack},    // r8
}};

std::string y_name(int j, int r, int t) {
  return "y_" + std::to_string(j + 1) + "_" + std::to_string(r) + "_" + std::to_string(t);
}
std::string z_name(int j) { return "z_" + std::to_string(j + 1); }

}  // namespace

Location route_from(int route) { return kRoutes.at(route - 1).first; }
Location route_to(int route) { return kRoutes.at(route - 1).second; }

int route_of(Location from, Location to) {
  for (int r = 1; r <= 8; ++r) {
    if (kRoutes[r - 1].first == from && kRoutes[r - 1].second == to) return r;
  }
  return 0;
}

ModelSize time_indexed_model_size(const Instance& instance) {
  const long long n = instance.num_samples();
  const long long k = instance.num_photos();
  const long long t = time_horizon(instance);
  ModelSize s;
  s.binaries = 8 * n * t;
  s.variables = s.binaries + n;
  s.constraints = 7 * n + n * t * (k + 4) + 3 * (t - 1) + t + 2 * (t - 1);
  return s;
}

LinearModel build_time_indexed_model(const Instance& instance) {
  const int n = instance.num_samples();
  const int k = instance.num_photos();
  const int horizon = time_horizon(instance);
  LinearModel model(ModelKind::kTimeIndexed);

  std::vector<int> first(n);
  for (int j = 0; j < n; ++j) {
    for (int r = 1; r <= 8; ++r) {
      for (int t = 0; t < horizon; ++t) {
        const int v = model.add_variable(y_name(j, r, t), VarKind::kBinary);
        if (r == 1 && t == 0) first[j] = v;
      }
    }
  }
  for (int j = 0; j < n; ++j) model.add_variable(z_name(j), VarKind::kContinuous);
  auto y = [&](int j, int r, int t) { return first[j] + (r - 1) * horizon + t; };
  auto z = [&](int j) { return 8 * n * horizon + j; };
  auto in_range = [&](int t) { return t >= 0 && t < horizon; };
  const std::string sep = "_";

  // Route counts.
  for (int j = 0; j < n; ++j) {
    const std::string s = std::to_string(j + 1);
    auto count = [&](const std::string& name, std::vector<int> routes, int target) {
      LinearTerms terms;
      for (int r : routes) {
        for (int t = 0; t < horizon; ++t) terms.emplace_back(y(j, r, t), 1.0);
      }
      model.add_constraint(name + sep + s, std::move(terms), Sense::kEqual, target);
    };
    count("enter_m1", {1}, 1);
    count("leave_m1", {2, 4}, 1);
    count("enter_m2", {3, 4}, 1);
    count("leave_m2", {5}, 1);
    count("leave_m3", {6}, k);
    count("enter_m3", {7}, k - 1);
    count("m2_to_rack", {8}, 0);
  }

  // Processing: departure exactly p after arrival.
  for (int j = 0; j < n; ++j) {
    const std::string s = std::to_string(j + 1);
    const int p1 = instance.proc(j, Machine::kMixer);
    const int p2 = instance.proc(j, Machine::kShaker);
    const int p3 = instance.booth_time();
    for (int t = 0; t < horizon; ++t) {
      LinearTerms terms = {{y(j, 1, t), 1.0}};
      if (in_range(t + 1 + p1)) {
        terms.emplace_back(y(j, 2, t + 1 + p1), -1.0);
        terms.emplace_back(y(j, 4, t + 1 + p1), -1.0);
      }
      model.add_constraint("proc_m1_" + s + sep + std::to_string(t), std::move(terms), Sense::kEqual, 0);
    }
    for (int t = 0; t < horizon; ++t) {
      LinearTerms terms = {{y(j, 3, t), 1.0}, {y(j, 4, t), 1.0}};
      if (in_range(t + 1 + p2)) {
        terms.emplace_back(y(j, 5, t + 1 + p2), -1.0);
        terms.emplace_back(y(j, 8, t + 1 + p2), -1.0);
      }
      model.add_constraint("proc_m2_" + s + sep + std::to_string(t), std::move(terms), Sense::kEqual, 0);
    }
    for (int t = 0; t < horizon; ++t) {
      LinearTerms terms = {{y(j, 5, t), 1.0}, {y(j, 7, t), 1.0}};
      if (in_range(t + 1 + p3)) terms.emplace_back(y(j, 6, t + 1 + p3), -1.0);
      model.add_constraint("proc_m3_" + s + sep + std::to_string(t), std::move(terms), Sense::kEqual, 0);
    }
  }

  // Rack-buffered shaker entry only after the mixer exit to the rack.
  for (int j = 0; j < n; ++j) {
    for (int t = 0; t < horizon; ++t) {
      LinearTerms terms = {{y(j, 3, t), 1.0}};
      for (int u = 0; u < t; ++u) terms.emplace_back(y(j, 2, u), -1.0);
      model.add_constraint("buffer_" + std::to_string(j + 1) + sep + std::to_string(t), std::move(terms),
                           Sense::kLessEqual, 0);
    }
  }

  // Photo ladder: the shaker-to-booth carry at slot a fixes every later
  // photo entry at a + offset.
  for (int j = 0; j < n; ++j) {
    for (int p = 1; p < k; ++p) {
      const int off = instance.photo_offset(j, p);
      for (int a = 0; a < horizon; ++a) {
        LinearTerms terms = {{y(j, 5, a), 1.0}};
        if (in_range(a + off)) terms.emplace_back(y(j, 7, a + off), -1.0);
        model.add_constraint("ladder_" + std::to_string(j + 1) + sep + std::to_string(p) + sep +
                                 std::to_string(a),
                             std::move(terms), Sense::kLessEqual, 0);
      }
    }
  }

  // Machine exclusivity per time unit u, i.e. the interval (u, u + 1).
  for (int m = 1; m <= 3; ++m) {
    for (int u = 1; u < horizon; ++u) {
      LinearTerms terms;
      for (int j = 0; j < n; ++j) {
        const int p = instance.proc(j, static_cast<Machine>(m));
        const std::vector<int> arrivals = m == 1 ? std::vector<int>{1}
                                          : m == 2 ? std::vector<int>{3, 4}
                                                   : std::vector<int>{5, 7};
        for (int t = std::max(0, u - p); t <= u - 1; ++t) {
          for (int r : arrivals) terms.emplace_back(y(j, r, t), 1.0);
        }
      }
      model.add_constraint("machine_" + std::to_string(m) + sep + std::to_string(u), std::move(terms),
                           Sense::kLessEqual, 1);
    }
  }

  // Robot: one carry per slot; a carry ending at a machine is not followed
  // by any carry, and no carry is followed by one starting at a machine.
  auto slot_terms = [&](int t, std::initializer_list<int> routes) {
    LinearTerms terms;
    for (int j = 0; j < n; ++j) {
      for (int r : routes) terms.emplace_back(y(j, r, t), 1.0);
    }
    return terms;
  };
  const std::initializer_list<int> all = {1, 2, 3, 4, 5, 6, 7, 8};
  const std::initializer_list<int> ends_at_machine = {1, 3, 4, 5, 7};
  const std::initializer_list<int> starts_at_machine = {2, 4, 5, 6, 8};
  for (int t = 0; t < horizon; ++t) {
    model.add_constraint("robot_" + std::to_string(t), slot_terms(t, all), Sense::kLessEqual, 1);
  }
  for (int t = 0; t + 1 < horizon; ++t) {
    LinearTerms a = slot_terms(t, ends_at_machine);
    LinearTerms b = slot_terms(t + 1, all);
    a.insert(a.end(), b.begin(), b.end());
    model.add_constraint("after_place_" + std::to_string(t), std::move(a), Sense::kLessEqual, 1);
    LinearTerms c = slot_terms(t, all);
    LinearTerms d = slot_terms(t + 1, starts_at_machine);
    c.insert(c.end(), d.begin(), d.end());
    model.add_constraint("before_pick_" + std::to_string(t), std::move(c), Sense::kLessEqual, 1);
  }

  // Completion: z_j bounded below by every return time.
  for (int j = 0; j < n; ++j) {
    for (int t = 0; t < horizon; ++t) {
      model.add_constraint("completion_" + std::to_string(j + 1) + sep + std::to_string(t),
                           {{z(j), 1.0}, {y(j, 6, t), -(t + 1.0)}}, Sense::kGreaterEqual, 0);
    }
  }

  LinearTerms objective;
  for (int j = 0; j < n; ++j) objective.emplace_back(z(j), 1.0);
  model.set_objective(std::move(objective));
  return model;
}

Assignment time_indexed_assignment(const Instance& instance, const Schedule& schedule) {
  const int n = instance.num_samples();
  const int horizon = time_horizon(instance);
  Assignment a;
  for (int j = 0; j < n; ++j) {
    for (int r = 1; r <= 8; ++r) {
      for (int t = 0; t < horizon; ++t) a[y_name(j, r, t)] = 0.0;
    }
    a[z_name(j)] = schedule.completions.at(j);
  }
  for (const RobotAction& act : schedule.program.actions) {
    if (!act.is_carry()) continue;
    const int r = route_of(act.from, act.to);
    if (r == 0 || act.slot >= horizon) {
      throw std::invalid_argument("schedule carry outside the route set or horizon");
    }
    a[y_name(act.sample, r, act.slot)] = 1.0;
  }
  return a;
}

Schedule decode_time_indexed_solution(const Instance& instance, const Assignment& assignment) {
  const int n = instance.num_samples();
  const int horizon = time_horizon(instance);
  std::vector<Carry> carries;
  for (int j = 0; j < n; ++j) {
    for (int r = 1; r <= 8; ++r) {
      for (int t = 0; t < horizon; ++t) {
        const std::string name = y_name(j, r, t);
        auto it = assignment.find(name);
        if (it == assignment.end()) throw MissingVariable(name);
        if (it->second > 0.5) carries.push_back({t, j, route_from(r), route_to(r)});
      }
    }
  }
  Assembly assembly = assemble_carries(std::move(carries));
  if (!assembly.violations.empty()) throw DecodeMismatch(std::move(assembly.violations));
  SimulationResult sim = simulate(instance, assembly.program, horizon);
  if (!sim.feasible()) throw DecodeMismatch(std::move(sim.violations));
  return std::move(*sim.schedule);
}

}  // namespace trsp
