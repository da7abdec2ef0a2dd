#include "trsp/schedule.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <numeric>
#include <sstream>
#include <tuple>

namespace trsp {

namespace {

constexpr std::array<std::string_view, 4> kLocationNames = {"rack", "m1", "m2", "m3"};

std::string sample_label(int j) { return "sample " + std::to_string(j + 1); }

struct SampleState {
  enum class Where { kRack, kMachine, kRobot };
  Where where = Where::kRack;
  Location at = Location::kRack;
  int stage = 0;  // 0 mixer, 1 shaker, 2.. photos, 2+K done
  int visit_start = 0;
  int visit_end = 0;
  int last_end = -1;  // end of the previous visit
  bool overdue_reported = false;
};

struct Occupant {
  int sample;
  int start;
  int end;
};

}  // namespace

std::string_view location_name(Location l) { return kLocationNames[static_cast<int>(l)]; }

std::optional<Location> parse_location(std::string_view name) {
  for (int i = 0; i < 4; ++i) {
    if (kLocationNames[i] == name) return static_cast<Location>(i);
  }
  return std::nullopt;
}

std::string rule_code(Rule rule) {
  if (rule == Rule::kHorizon) return "H";
  return "R" + std::to_string(static_cast<int>(rule));
}

std::string describe(const Violation& v) {
  std::string out = rule_code(v.rule) + " t=" + std::to_string(v.time);
  if (v.sample >= 0) out += " " + sample_label(v.sample);
  if (v.machine) out += " M" + std::to_string(static_cast<int>(*v.machine));
  return out + ": " + v.message;
}

SimulationResult simulate(const Instance& instance, const RobotProgram& program,
                          std::optional<int> horizon) {
  const int n = instance.num_samples();
  const int k = instance.num_photos();
  const int done_stage = 2 + k;

  std::vector<SampleState> samples(n);
  std::array<std::vector<Occupant>, 3> machines;
  std::vector<MachineVisit> visits;
  std::vector<int> completions(n, -1);
  std::vector<Violation> violations;
  auto flag = [&](Rule rule, int time, int sample, std::optional<Machine> m,
                  std::string message) {
    violations.push_back({rule, time, sample, m, std::move(message)});
  };

  Location robot = Location::kRack;
  bool arrived_loaded_at_machine = false;  // previous slot was a carry into a machine

  for (int t = 0; t < program.length(); ++t) {
    const RobotAction& a = program.actions[t];
    if (a.slot != t) {
      throw MalformedProgram("action " + std::to_string(t) + " has slot " +
                             std::to_string(a.slot));
    }
    if (a.from != robot) {
      throw MalformedProgram("slot " + std::to_string(t) + ": robot is at " +
                             std::string(location_name(robot)) + ", not " +
                             std::string(location_name(a.from)));
    }
    if (a.kind == RobotAction::Kind::kIdle && a.to != a.from) {
      throw MalformedProgram("slot " + std::to_string(t) + ": idle action changes location");
    }
    if (a.kind == RobotAction::Kind::kMove && a.from == a.to) {
      throw MalformedProgram("slot " + std::to_string(t) + ": move to the same location");
    }
    if (a.sample >= n) {
      throw MalformedProgram("slot " + std::to_string(t) + ": unknown sample");
    }

    // Samples that finish at t must leave with this very action.
    for (Machine m : kMachines) {
      for (const Occupant& occ : machines[machine_index(m)]) {
        if (occ.end > t) continue;
        const bool lifted = a.is_carry() && a.sample == occ.sample &&
                            a.from == location_of(m);
        SampleState& s = samples[occ.sample];
        if (!lifted && !s.overdue_reported) {
          s.overdue_reported = true;
          flag(Rule::kLiftAtCompletion, occ.end, occ.sample, m,
               "not lifted when processing finished");
        }
      }
    }

    if (a.is_carry()) {
      const int j = a.sample;
      SampleState& s = samples[j];
      if (arrived_loaded_at_machine && is_machine(a.from)) {
        flag(Rule::kNoSwapAtMachine, t, j, machine_at(a.from),
             "placed one sample and picked up another at the same time");
      }
      const bool at_source = (s.where == SampleState::Where::kRack && a.from == Location::kRack) ||
                             (s.where == SampleState::Where::kMachine && a.from == s.at);
      if (!at_source) {
        flag(Rule::kRouteOrder, t, j, std::nullopt,
             "carried from " + std::string(location_name(a.from)) +
                 " but the sample is not there");
      } else if (s.where == SampleState::Where::kMachine) {
        const Machine m = machine_at(a.from);
        auto& occ = machines[machine_index(m)];
        if (t < s.visit_end) {
          flag(Rule::kLiftAtCompletion, t, j, m, "lifted before processing finished");
        }
        occ.erase(std::remove_if(occ.begin(), occ.end(),
                                 [j](const Occupant& o) { return o.sample == j; }),
                  occ.end());
      }
      s.where = SampleState::Where::kRobot;

      const int arrival = t + 1;
      if (a.to == Location::kRack) {
        s.where = SampleState::Where::kRack;
        s.at = Location::kRack;
        if (s.stage == done_stage && completions[j] < 0) completions[j] = arrival;
      } else {
        const Machine m = machine_at(a.to);
        auto& occ = machines[machine_index(m)];
        for (const Occupant& o : occ) {
          if (o.end > arrival) {
            flag(Rule::kMachineExclusive, arrival, j, m,
                 "machine still processing " + sample_label(o.sample));
          }
        }
        const bool expected = (m == Machine::kMixer && s.stage == 0) ||
                              (m == Machine::kShaker && s.stage == 1) ||
                              (m == Machine::kBooth && s.stage >= 2 && s.stage < done_stage);
        if (!expected) {
          flag(Rule::kRouteOrder, arrival, j, m, "visit out of order or repeated");
        }
        int photo = -1;
        if (expected && m == Machine::kBooth) {
          photo = s.stage - 2;
          if (photo == 0 && arrival != s.last_end + 1) {
            flag(Rule::kPhotoImmediate, arrival, j, m,
                 "first photo must start one unit after shaking ends");
          }
          if (photo > 0 && arrival - s.last_end != instance.gaps(j)[photo - 1]) {
            flag(Rule::kPhotoGap, arrival, j, m,
                 "photo gap is " + std::to_string(arrival - s.last_end) + ", expected " +
                     std::to_string(instance.gaps(j)[photo - 1]));
          }
        }
        const int end = arrival + instance.proc(j, m);
        s.where = SampleState::Where::kMachine;
        s.at = a.to;
        s.visit_start = arrival;
        s.visit_end = end;
        s.overdue_reported = false;
        occ.push_back({j, arrival, end});
        if (expected) {
          visits.push_back({j, m, photo, arrival, end});
          s.last_end = end;
          ++s.stage;
        }
      }
    }

    arrived_loaded_at_machine = a.is_carry() && is_machine(a.to);
    robot = a.to;
  }

  const int finish = program.length();
  for (Machine m : kMachines) {
    for (const Occupant& occ : machines[machine_index(m)]) {
      if (occ.end <= finish) {
        if (!samples[occ.sample].overdue_reported) {
          flag(Rule::kLiftAtCompletion, occ.end, occ.sample, m,
               "not lifted when processing finished");
        }
      } else {
        flag(Rule::kReturnToRack, finish, occ.sample, m, "program ends during processing");
      }
    }
  }
  for (int j = 0; j < n; ++j) {
    if (samples[j].stage < done_stage) {
      flag(Rule::kRouteOrder, finish, j, std::nullopt,
           "only " + std::to_string(samples[j].stage) + " of " +
               std::to_string(done_stage) + " visits made");
    } else if (completions[j] < 0 || samples[j].where != SampleState::Where::kRack) {
      flag(Rule::kReturnToRack, finish, j, std::nullopt, "not brought back to the rack");
    }
  }
  if (horizon && finish > *horizon) {
    flag(Rule::kHorizon, finish, -1, std::nullopt,
         "program ends at " + std::to_string(finish) + " after horizon " +
             std::to_string(*horizon));
  }

  SimulationResult result;
  if (violations.empty()) {
    std::sort(visits.begin(), visits.end(), [](const MachineVisit& a, const MachineVisit& b) {
      return std::tuple(a.start, a.machine, a.sample) < std::tuple(b.start, b.machine, b.sample);
    });
    result.schedule = Schedule{std::move(visits), std::move(completions), program};
  }
  result.violations = std::move(violations);
  return result;
}

long long objective(const Schedule& schedule) {
  return std::accumulate(schedule.completions.begin(), schedule.completions.end(), 0LL);
}

std::vector<SampleStarts> starts_of(const Schedule& schedule, int num_samples) {
  std::vector<SampleStarts> starts(num_samples);
  for (const MachineVisit& v : schedule.visits) {
    switch (v.machine) {
      case Machine::kMixer: starts[v.sample].mixer = v.start; break;
      case Machine::kShaker: starts[v.sample].shaker = v.start; break;
      case Machine::kBooth: starts[v.sample].photos.push_back(v.start); break;
    }
  }
  for (auto& s : starts) std::sort(s.photos.begin(), s.photos.end());
  return starts;
}

Assembly assemble_program(const Instance& instance, std::span<const SampleStarts> starts) {
  const int k = instance.num_photos();
  if (static_cast<int>(starts.size()) != instance.num_samples()) {
    throw std::invalid_argument("assemble_program: one SampleStarts per sample required");
  }

  Assembly out;
  std::vector<Carry> carries;
  for (int j = 0; j < instance.num_samples(); ++j) {
    const SampleStarts& s = starts[j];
    if (static_cast<int>(s.photos.size()) != k) {
      out.violations.push_back({Rule::kRouteOrder, 0, j, Machine::kBooth,
                                std::to_string(s.photos.size()) + " photos, expected " +
                                    std::to_string(k)});
      continue;
    }
    std::vector<int> photos = s.photos;
    std::sort(photos.begin(), photos.end());
    auto add = [&](int slot, Location from, Location to) {
      carries.push_back({slot, j, from, to});
    };
    add(s.mixer - 1, Location::kRack, Location::kMixer);
    const int mixer_end = s.mixer + instance.proc(j, Machine::kMixer);
    if (s.shaker == mixer_end + 1) {
      add(mixer_end, Location::kMixer, Location::kShaker);
    } else {
      add(mixer_end, Location::kMixer, Location::kRack);
      add(s.shaker - 1, Location::kRack, Location::kShaker);
    }
    const int shaker_end = s.shaker + instance.proc(j, Machine::kShaker);
    if (photos[0] == shaker_end + 1) {
      add(shaker_end, Location::kShaker, Location::kBooth);
    } else {
      add(shaker_end, Location::kShaker, Location::kRack);
      add(photos[0] - 1, Location::kRack, Location::kBooth);
    }
    for (int i = 0; i < k; ++i) {
      add(photos[i] + instance.booth_time(), Location::kBooth, Location::kRack);
      if (i + 1 < k) add(photos[i + 1] - 1, Location::kRack, Location::kBooth);
    }
  }
  if (!out.violations.empty()) return out;
  return assemble_carries(std::move(carries));
}

Assembly assemble_carries(std::vector<Carry> carries) {
  // Stable: carries of one sample keep their route order on equal slots.
  std::stable_sort(carries.begin(), carries.end(), [](const Carry& a, const Carry& b) {
    return std::tie(a.slot, a.sample) < std::tie(b.slot, b.sample);
  });

  Assembly out;
  Location robot = Location::kRack;
  int now = 0;
  auto& actions = out.program.actions;
  for (const Carry& c : carries) {
    if (c.slot < 0) {
      out.violations.push_back({Rule::kHorizon, c.slot, c.sample, std::nullopt,
                                "carry before time 0"});
      continue;
    }
    if (c.slot < now) {
      out.violations.push_back({Rule::kSingleCarry, c.slot, c.sample, std::nullopt,
                                "robot already busy during slot " + std::to_string(c.slot)});
      continue;
    }
    if (robot != c.from) {
      if (c.slot == now) {
        out.violations.push_back(
            {Rule::kSingleCarry, c.slot, c.sample, std::nullopt,
             "robot cannot be at " + std::string(location_name(c.from)) + " at time " +
                 std::to_string(c.slot)});
        continue;
      }
      actions.push_back(RobotAction::move(now++, robot, c.from));
      robot = c.from;
    }
    while (now < c.slot) actions.push_back(RobotAction::idle(now++, robot));
    actions.push_back(RobotAction::move(now++, c.from, c.to, c.sample));
    robot = c.to;
  }
  return out;
}

SimulationResult realize(const Instance& instance, std::span<const SampleStarts> starts,
                         std::optional<int> horizon) {
  Assembly assembly = assemble_program(instance, starts);
  if (!assembly.violations.empty()) return {std::nullopt, std::move(assembly.violations)};
  return simulate(instance, assembly.program, horizon);
}

std::string write_program(const RobotProgram& program, std::optional<long long> objective) {
  std::ostringstream out;
  out << "trsp-schedule v1\n";
  if (objective) out << "# objective: " << *objective << "\n";
  out << "slots " << program.length() << "\n";
  for (const RobotAction& a : program.actions) {
    out << a.slot << " ";
    if (a.kind == RobotAction::Kind::kIdle) {
      out << "idle " << location_name(a.from) << "\n";
    } else {
      out << "move " << location_name(a.from) << " " << location_name(a.to) << " ";
      if (a.sample >= 0) {
        out << a.sample + 1;
      } else {
        out << "-";
      }
      out << "\n";
    }
  }
  return out.str();
}

RobotProgram read_program(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  bool header = false;
  int expected = -1;
  RobotProgram program;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string first;
    if (!(fields >> first)) continue;
    if (!header) {
      std::string version;
      if (first != "trsp-schedule" || !(fields >> version) || version != "v1") {
        throw ParseError(line_no, "expected header 'trsp-schedule v1'");
      }
      header = true;
      continue;
    }
    if (first == "slots") {
      if (!(fields >> expected) || expected < 0) throw ParseError(line_no, "bad slot count");
      continue;
    }
    RobotAction a;
    auto [ptr, ec] = std::from_chars(first.data(), first.data() + first.size(), a.slot);
    if (ec != std::errc() || ptr != first.data() + first.size()) {
      throw ParseError(line_no, "expected a slot number");
    }
    std::string kind, from, to, cargo;
    fields >> kind >> from;
    auto from_loc = parse_location(from);
    if (!from_loc) throw ParseError(line_no, "unknown location '" + from + "'");
    a.from = *from_loc;
    if (kind == "idle") {
      a.kind = RobotAction::Kind::kIdle;
      a.to = a.from;
    } else if (kind == "move") {
      a.kind = RobotAction::Kind::kMove;
      fields >> to >> cargo;
      auto to_loc = parse_location(to);
      if (!to_loc) throw ParseError(line_no, "unknown location '" + to + "'");
      a.to = *to_loc;
      if (cargo == "-") {
        a.sample = -1;
      } else {
        int sample = 0;
        auto [p, e] = std::from_chars(cargo.data(), cargo.data() + cargo.size(), sample);
        if (e != std::errc() || p != cargo.data() + cargo.size() || sample < 1) {
          throw ParseError(line_no, "bad sample '" + cargo + "'");
        }
        a.sample = sample - 1;
      }
    } else {
      throw ParseError(line_no, "unknown action '" + kind + "'");
    }
    program.actions.push_back(a);
  }
  if (!header) throw ParseError(line_no, "missing header");
  if (expected >= 0 && expected != program.length()) {
    throw ParseError(line_no, "slot count mismatch");
  }
  return program;
}

}  // namespace trsp
