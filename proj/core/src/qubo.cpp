#include "trsp/qubo.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <tuple>

#include "trsp/exact.hpp"

namespace trsp {

namespace {

constexpr std::array<std::string_view, kTermCount> kTermNames = {"F",  "P1", "P2", "P3",
                                                                 "P4", "P5", "P6", "P7"};

class TermBuilder {
 public:
  explicit TermBuilder(double weight) : weight_(weight) {}

  void linear(int i, double c) { entries_.push_back({i, i, weight_ * c}); }
  void pair(int i, int j, double c) {
    if (i > j) std::swap(i, j);
    entries_.push_back({i, j, weight_ * c});
  }
  void constant(double c) { offset_ += weight_ * c; }

  std::vector<QuboEntry> finish(double& offset) {
    offset = offset_;
    std::sort(entries_.begin(), entries_.end(), [](const QuboEntry& a, const QuboEntry& b) {
      return std::tie(a.i, a.j) < std::tie(b.i, b.j);
    });
    std::vector<QuboEntry> out;
    out.reserve(entries_.size());
    for (const QuboEntry& e : entries_) {
      if (!out.empty() && out.back().i == e.i && out.back().j == e.j) {
        out.back().coeff += e.coeff;
      } else {
        out.push_back(e);
      }
    }
    std::erase_if(out, [](const QuboEntry& e) { return e.coeff == 0.0; });
    entries_.clear();
    entries_.shrink_to_fit();
    return out;
  }

 private:
  double weight_;
  double offset_ = 0.0;
  std::vector<QuboEntry> entries_;
};

// (sum of block) - target, squared: linear (1 - 2 target), pairs 2, constant
// target^2.
void count_penalty(TermBuilder& b, const std::vector<int>& block, int target) {
  for (std::size_t a = 0; a < block.size(); ++a) {
    b.linear(block[a], 1.0 - 2.0 * target);
    for (std::size_t c = a + 1; c < block.size(); ++c) b.pair(block[a], block[c], 2.0);
  }
  b.constant(static_cast<double>(target) * target);
}

// A robot carry implied by a start variable.
struct Occupancy {
  int var;
  int sample;
  Machine machine;
  bool incoming;  // into the machine (ends there); otherwise out of it
};

bool direct_transfer_pair(const Occupancy& a, const Occupancy& b) {
  if (a.sample != b.sample || a.incoming == b.incoming) return false;
  const Occupancy& out = a.incoming ? b : a;
  const Occupancy& in = a.incoming ? a : b;
  return (out.machine == Machine::kMixer && in.machine == Machine::kShaker) ||
         (out.machine == Machine::kShaker && in.machine == Machine::kBooth);
}

}  // namespace

std::string_view term_name(Term term) { return kTermNames[static_cast<int>(term)]; }

std::optional<RhoProfile> parse_rho_profile(std::string_view name) {
  if (name == "leap") return RhoProfile::kLeap;
  if (name == "fda") return RhoProfile::kFda;
  if (name == "fdah") return RhoProfile::kFdah;
  if (name == "auto") return RhoProfile::kAuto;
  return std::nullopt;
}

std::string_view rho_profile_name(RhoProfile profile) {
  switch (profile) {
    case RhoProfile::kLeap: return "leap";
    case RhoProfile::kFda: return "fda";
    case RhoProfile::kFdah: return "fdah";
    case RhoProfile::kAuto: return "auto";
  }
  return "";
}

Weights profile_weights(RhoProfile profile, const Instance& instance) {
  switch (profile) {
    case RhoProfile::kLeap:
      return {1, 30000, 10000, 10000, 10000, 10000, 15000, 10000};
    case RhoProfile::kFda:
      return {1000, 4000, 1000, 1000, 1500, 1500, 1500, 1500};
    case RhoProfile::kFdah:
      return {1000, 2000, 500, 500, 750, 750, 750, 750};
    case RhoProfile::kAuto: {
      const double rho = static_cast<double>(objective(sequential_schedule(instance))) + 1.0;
      return {1, rho, rho, rho, rho, rho, rho, rho};
    }
  }
  return {};
}

VarMap::VarMap(int num_samples, int horizon) : num_samples_(num_samples), horizon_(horizon) {
  if (num_samples < 1 || horizon < 2) throw std::invalid_argument("VarMap: empty variable set");
}

VarKey VarMap::key(int index) const {
  const int width = horizon_ - 1;
  const int block = index / width;
  return {block / 3, static_cast<Machine>(block % 3 + 1), index % width + 1};
}

double QuboProblem::offset() const {
  double total = 0.0;
  for (double o : offsets_) total += o;
  return total;
}

std::vector<QuboEntry> QuboProblem::combined() const {
  std::vector<QuboEntry> all;
  for (const auto& term : terms_) all.insert(all.end(), term.begin(), term.end());
  std::sort(all.begin(), all.end(), [](const QuboEntry& a, const QuboEntry& b) {
    return std::tie(a.i, a.j) < std::tie(b.i, b.j);
  });
  std::vector<QuboEntry> out;
  out.reserve(all.size());
  for (const QuboEntry& e : all) {
    if (!out.empty() && out.back().i == e.i && out.back().j == e.j) {
      out.back().coeff += e.coeff;
    } else {
      out.push_back(e);
    }
  }
  std::erase_if(out, [](const QuboEntry& e) { return e.coeff == 0.0; });
  return out;
}

std::size_t QuboProblem::nonzeros() const { return combined().size(); }

QuboProblem build_qubo(const Instance& instance, const Weights& weights) {
  for (double w : weights) {
    if (!(w > 0.0)) throw std::invalid_argument("build_qubo: weights must be positive");
  }
  const int n = instance.num_samples();
  const int k = instance.num_photos();
  const int horizon = time_horizon(instance);
  const int last = horizon - 1;  // last start time and last carry slot
  QuboProblem q{VarMap(n, horizon)};
  q.weights_ = weights;
  const VarMap& map = q.var_map_;
  auto var = [&](int j, Machine m, int t) { return map.index(j, m, t); };
  auto term = [&](Term t) { return TermBuilder(weights[static_cast<int>(t)]); };
  auto store = [&](Term t, TermBuilder& b) {
    const int idx = static_cast<int>(t);
    q.terms_[idx] = b.finish(q.offsets_[idx]);
  };

  // F: completion time is affine in the shaker start.
  {
    TermBuilder b = term(Term::kObjective);
    for (int j = 0; j < n; ++j) {
      for (int t = 1; t <= last; ++t) {
        b.linear(var(j, Machine::kShaker, t), t + instance.completion_after_shaker(j));
      }
    }
    store(Term::kObjective, b);
  }

  // P1: one mixer and one shaker visit per sample.
  {
    TermBuilder b = term(Term::kP1);
    std::vector<int> block;
    for (int j = 0; j < n; ++j) {
      for (Machine m : {Machine::kMixer, Machine::kShaker}) {
        block.clear();
        for (int t = 1; t <= last; ++t) block.push_back(var(j, m, t));
        count_penalty(b, block, 1);
      }
    }
    store(Term::kP1, b);
  }

  // P2: K photos per sample.
  {
    TermBuilder b = term(Term::kP2);
    std::vector<int> block;
    for (int j = 0; j < n; ++j) {
      block.clear();
      for (int t = 1; t <= last; ++t) block.push_back(var(j, Machine::kBooth, t));
      count_penalty(b, block, k);
    }
    store(Term::kP2, b);
  }

  // P3: overlapping visits of two samples on one machine.
  {
    TermBuilder b = term(Term::kP3);
    for (Machine m : kMachines) {
      for (int j = 0; j < n; ++j) {
        for (int i = j + 1; i < n; ++i) {
          const int pj = instance.proc(j, m);
          const int pi = instance.proc(i, m);
          for (int t = 1; t <= last; ++t) {
            for (int u = std::max(1, t - pi + 1); u <= std::min(last, t + pj - 1); ++u) {
              b.pair(var(j, m, t), var(i, m, u), 1.0);
            }
          }
        }
      }
    }
    store(Term::kP3, b);
  }

  // P4: shaker not before mixer end + 1; every photo on the ladder anchored at
  // shaker end + 1.
  {
    TermBuilder b = term(Term::kP4);
    for (int j = 0; j < n; ++j) {
      const int p1 = instance.proc(j, Machine::kMixer);
      const int p2 = instance.proc(j, Machine::kShaker);
      for (int t1 = 1; t1 <= last; ++t1) {
        for (int t2 = 1; t2 <= std::min(last, t1 + p1); ++t2) {
          b.pair(var(j, Machine::kMixer, t1), var(j, Machine::kShaker, t2), 1.0);
        }
      }
      std::vector<char> on_ladder;
      for (int t2 = 1; t2 <= last; ++t2) {
        on_ladder.assign(last + 1, 0);
        for (int a = 0; a < k; ++a) {
          const int u = t2 + p2 + 1 + instance.photo_offset(j, a);
          if (u <= last) on_ladder[u] = 1;
        }
        for (int u = 1; u <= last; ++u) {
          if (!on_ladder[u]) b.pair(var(j, Machine::kShaker, t2), var(j, Machine::kBooth, u), 1.0);
        }
      }
    }
    store(Term::kP4, b);
  }

  // P5: two photos whose distance is not a ladder distance.
  {
    TermBuilder b = term(Term::kP5);
    for (int j = 0; j < n; ++j) {
      std::vector<char> allowed(last + 1, 0);
      for (int a = 0; a < k; ++a) {
        for (int c = a + 1; c < k; ++c) {
          const int d = instance.photo_offset(j, c) - instance.photo_offset(j, a);
          if (d <= last) allowed[d] = 1;
        }
      }
      for (int t = 1; t <= last; ++t) {
        for (int u = t + 1; u <= last; ++u) {
          if (!allowed[u - t]) b.pair(var(j, Machine::kBooth, t), var(j, Machine::kBooth, u), 1.0);
        }
      }
    }
    store(Term::kP5, b);
  }

  // Carry occupancies by slot.
  std::vector<std::vector<Occupancy>> slots(horizon);
  TermBuilder p6 = term(Term::kP6);
  for (int j = 0; j < n; ++j) {
    for (Machine m : kMachines) {
      for (int t = 1; t <= last; ++t) {
        const int v = var(j, m, t);
        slots[t - 1].push_back({v, j, m, true});
        const int out = t + instance.proc(j, m);
        if (out <= last) {
          slots[out].push_back({v, j, m, false});
        } else {
          p6.linear(v, 1.0);  // would leave the horizon
        }
      }
    }
  }

  // P6: two carries on one slot, except the two halves of a direct transfer.
  for (const auto& slot : slots) {
    for (std::size_t a = 0; a < slot.size(); ++a) {
      for (std::size_t c = a + 1; c < slot.size(); ++c) {
        if (direct_transfer_pair(slot[a], slot[c])) continue;
        p6.pair(slot[a].var, slot[c].var, 1.0);
      }
    }
  }
  store(Term::kP6, p6);

  // P7: a carry ending at a machine followed by any carry, or any carry
  // followed by one starting at a machine.
  {
    TermBuilder b = term(Term::kP7);
    for (int s = 0; s + 1 < horizon; ++s) {
      for (const Occupancy& first : slots[s]) {
        for (const Occupancy& second : slots[s + 1]) {
          if (first.incoming || !second.incoming) b.pair(first.var, second.var, 1.0);
        }
      }
    }
    store(Term::kP7, b);
  }
  return q;
}

Breakdown penalty_breakdown(const QuboProblem& problem, const Bits& bits) {
  if (static_cast<int>(bits.size()) != problem.size()) {
    throw LengthMismatch("expected " + std::to_string(problem.size()) + " bits, got " +
                         std::to_string(bits.size()));
  }
  Breakdown out{};
  for (int t = 0; t < kTermCount; ++t) {
    double sum = problem.term_offset(static_cast<Term>(t));
    for (const QuboEntry& e : problem.entries(static_cast<Term>(t))) {
      if (bits[e.i] && bits[e.j]) sum += e.coeff;
    }
    out[t] = sum;
  }
  return out;
}

double energy(const QuboProblem& problem, const Bits& bits) {
  const Breakdown b = penalty_breakdown(problem, bits);
  double sum = 0.0;
  for (double v : b) sum += v;
  return sum;
}

double total_penalty(const Breakdown& breakdown) {
  double sum = 0.0;
  for (int t = 1; t < kTermCount; ++t) sum += breakdown[t];
  return sum;
}

Bits encode(const VarMap& map, const Schedule& schedule) {
  Bits bits(map.size(), 0);
  for (const MachineVisit& v : schedule.visits) {
    if (!map.contains(v.start)) {
      throw OutOfHorizon("start " + std::to_string(v.start) + " outside 1.." +
                         std::to_string(map.horizon() - 1));
    }
    if (v.sample < 0 || v.sample >= map.num_samples()) {
      throw std::invalid_argument("encode: sample index out of range");
    }
    bits[map.index(v.sample, v.machine, v.start)] = 1;
  }
  return bits;
}

Decoded decode(const Instance& instance, const QuboProblem& problem, const Bits& bits) {
  if (static_cast<int>(bits.size()) != problem.size()) {
    throw LengthMismatch("expected " + std::to_string(problem.size()) + " bits, got " +
                         std::to_string(bits.size()));
  }
  const VarMap& map = problem.var_map();
  const int n = instance.num_samples();
  std::vector<SampleStarts> starts(n);
  std::vector<std::array<int, 3>> counts(n, {0, 0, 0});
  for (int i = 0; i < problem.size(); ++i) {
    if (!bits[i]) continue;
    const VarKey key = map.key(i);
    ++counts[key.sample][machine_index(key.machine)];
    SampleStarts& s = starts[key.sample];
    switch (key.machine) {
      case Machine::kMixer: s.mixer = key.time; break;
      case Machine::kShaker: s.shaker = key.time; break;
      case Machine::kBooth: s.photos.push_back(key.time); break;
    }
  }

  InfeasibleReport report;
  for (int j = 0; j < n; ++j) {
    const std::array<int, 3> expected = {1, 1, instance.num_photos()};
    for (Machine m : kMachines) {
      const int got = counts[j][machine_index(m)];
      if (got != expected[machine_index(m)]) {
        report.violations.push_back({Rule::kRouteOrder, 0, j, m,
                                     std::to_string(got) + " visits, expected " +
                                         std::to_string(expected[machine_index(m)])});
      }
    }
  }
  if (report.violations.empty()) {
    SimulationResult sim = realize(instance, starts, map.horizon());
    if (sim.feasible()) return std::move(*sim.schedule);
    report.violations = std::move(sim.violations);
  }
  report.breakdown = penalty_breakdown(problem, bits);
  return report;
}

std::string write_qubo(const QuboProblem& problem) {
  std::ostringstream out;
  out.precision(17);
  out << problem.size() << " " << problem.offset() << "\n";
  for (const QuboEntry& e : problem.combined()) out << e.i << " " << e.j << " " << e.coeff << "\n";
  return out.str();
}

}  // namespace trsp
