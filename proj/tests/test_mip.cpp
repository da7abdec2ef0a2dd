#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include "support.hpp"
#include "trsp/exact.hpp"
#include "trsp/mip.hpp"
#include "trsp/random.hpp"

namespace trsp {
namespace {

LinearModel build(const Instance& inst, ModelKind kind) {
  return kind == ModelKind::kSequence ? build_sequence_model(inst) : build_time_indexed_model(inst);
}

ModelSize size_of(const Instance& inst, ModelKind kind) {
  return kind == ModelKind::kSequence ? sequence_model_size(inst) : time_indexed_model_size(inst);
}

Assignment assignment_of(const Instance& inst, ModelKind kind, const Schedule& s) {
  return kind == ModelKind::kSequence ? sequence_assignment(inst, s) : time_indexed_assignment(inst, s);
}

std::vector<std::string> sorted_tokens(const std::string& text) {
  std::vector<std::string> tokens;
  std::istringstream in(text);
  for (std::string token; in >> token;) tokens.push_back(token);
  std::sort(tokens.begin(), tokens.end());
  return tokens;
}

constexpr ModelKind kKinds[] = {ModelKind::kSequence, ModelKind::kTimeIndexed};

TEST(Names, ModelKindsRoundTrip) {
  for (ModelKind k : kKinds) EXPECT_EQ(parse_model_kind(model_kind_name(k)), k);
  EXPECT_EQ(model_kind_name(ModelKind::kTimeIndexed), "time-indexed");
  EXPECT_FALSE(parse_model_kind("sequential"));
}

TEST(Events, CountAndNames) {
  const Instance inst = testing::worked_example();
  EXPECT_EQ(events(inst).size(), 2u * 2 * (2 + 2));
  EXPECT_EQ(event_variable({0, 1, 0}), "tau_1_1_0");
  EXPECT_EQ(event_variable({1, 4, 1}), "tau_2_4_1");
}

TEST(Routes, EightRoutesAreConsistent) {
  for (int r = 1; r <= 8; ++r) EXPECT_EQ(route_of(route_from(r), route_to(r)), r);
  EXPECT_EQ(route_from(1), Location::kRack);
  EXPECT_EQ(route_to(1), Location::kMixer);
  EXPECT_EQ(route_from(8), Location::kShaker);
  EXPECT_EQ(route_to(8), Location::kRack);
  EXPECT_EQ(route_of(Location::kRack, Location::kRack), 0);
  EXPECT_EQ(route_of(Location::kBooth, Location::kMixer), 0);
}

TEST(Size, SequenceClosedFormByHand) {
  InstanceParams p;
  p.num_photos = 1;
  p.proc_times = {{1, 1, 1}, {2, 1, 1}};
  p.photo_gaps = {{}, {}};
  const ModelSize s = sequence_model_size(Instance::create(p));
  EXPECT_EQ(s.binaries, 2 + 1 + 25);
  EXPECT_EQ(s.variables, 12 + 28);
  EXPECT_EQ(s.constraints, 6 + 4 + 0 + 56);
}

TEST(Size, TimeIndexedClosedFormByHand) {
  const Instance inst = testing::single_unit_instance();  // T = 7
  const ModelSize s = time_indexed_model_size(inst);
  EXPECT_EQ(s.binaries, 56);
  EXPECT_EQ(s.variables, 57);
  EXPECT_EQ(s.constraints, 7 + 7 * 5 + 18 + 7 + 12);
}

TEST(Size, FormulasMatchBuiltModels) {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    const Instance inst = generate_instance({1 + static_cast<int>(seed % 4), 1 + static_cast<int>(seed % 3)}, seed);
    for (ModelKind kind : kKinds) {
      const LinearModel m = build(inst, kind);
      const ModelSize s = size_of(inst, kind);
      EXPECT_EQ(static_cast<long long>(m.variables().size()), s.variables) << inst.id();
      EXPECT_EQ(m.num_binaries(), s.binaries) << inst.id();
      EXPECT_EQ(static_cast<long long>(m.constraints().size()), s.constraints) << inst.id();
    }
  }
}

TEST(Oracle, SingleUnitSampleOptimumIsSeven) {
  const Instance inst = testing::single_unit_instance();
  const Schedule s = branch_and_bound(inst).schedule;
  for (ModelKind kind : kKinds) {
    const LinearModel m = build(inst, kind);
    const Assignment a = assignment_of(inst, kind, s);
    EXPECT_TRUE(check_assignment(m, a).empty());
    EXPECT_DOUBLE_EQ(objective_value(m, a), 7.0);
    EXPECT_EQ(objective(decode_solution(inst, kind, a)), 7);
  }
}

TEST(Oracle, WorkedExampleAssignmentsSetTheExpectedVariables) {
  const Instance inst = testing::worked_example();
  const Schedule s = *realize(inst, testing::worked_example_starts()).schedule;
  const Assignment seq = sequence_assignment(inst, s);
  EXPECT_EQ(seq.at("tau_1_1_0"), 1.0);
  EXPECT_EQ(seq.at("tau_1_1_1"), 4.0);
  const Assignment ti = time_indexed_assignment(inst, s);
  EXPECT_EQ(ti.at("y_1_1_0"), 1.0);
  EXPECT_EQ(ti.at("y_1_2_4"), 1.0);
  EXPECT_EQ(ti.at("y_2_1_5"), 1.0);
  for (ModelKind kind : kKinds) {
    const LinearModel m = build(inst, kind);
    const Assignment a = assignment_of(inst, kind, s);
    EXPECT_TRUE(check_assignment(m, a).empty());
    EXPECT_DOUBLE_EQ(objective_value(m, a), 45.0);
  }
}

// Every feasible schedule induces a zero-violation assignment with the same
// objective, and decoding it returns a schedule with that objective.
TEST(Models, CompleteOnMicroInstances) {
  for (std::uint64_t i = 1; i <= 8; ++i) {
    const Instance inst = testing::micro_instance(i);
    for (ModelKind kind : kKinds) {
      const LinearModel m = build(inst, kind);
      int count = 0;
      for_each_feasible(inst, time_horizon(inst), [&](const EnumeratedSchedule& e) {
        if (++count > 60) return;
        const Assignment a = assignment_of(inst, kind, e.schedule);
        const auto v = check_assignment(m, a);
        ASSERT_TRUE(v.empty()) << inst.id() << " " << model_kind_name(kind) << ": " << v[0].name
                               << " " << v[0].detail;
        ASSERT_DOUBLE_EQ(objective_value(m, a), static_cast<double>(e.objective));
        ASSERT_EQ(objective(decode_solution(inst, kind, a)), e.objective);
      });
    }
  }
}

// Perturbed assignments that still satisfy every constraint must decode to a
// feasible schedule with the model objective.
TEST(Models, SoundUnderPerturbation) {
  SplitMix64 rng(77);
  int accepted = 0, rejected = 0;
  for (std::uint64_t i = 1; i <= 8; ++i) {
    const Instance inst = testing::micro_instance(i);
    const Schedule base = branch_and_bound(inst).schedule;
    for (ModelKind kind : kKinds) {
      const LinearModel m = build(inst, kind);
      const Assignment a0 = assignment_of(inst, kind, base);
      for (int trial = 0; trial < 150; ++trial) {
        Assignment a = a0;
        const int changes = 1 + static_cast<int>(rng.uniform_int(0, 2));
        for (int c = 0; c < changes; ++c) {
          const Variable& v = m.variables()[rng.uniform_int(0, static_cast<std::int64_t>(m.variables().size()) - 1)];
          if (v.kind == VarKind::kBinary) {
            a[v.name] = 1.0 - a[v.name];
          } else {
            a[v.name] += static_cast<double>(rng.uniform_int(-2, 2));
          }
        }
        if (!check_assignment(m, a).empty()) {
          ++rejected;
          continue;
        }
        ++accepted;
        Schedule s;
        ASSERT_NO_THROW(s = decode_solution(inst, kind, a)) << inst.id() << " " << model_kind_name(kind);
        EXPECT_EQ(static_cast<double>(objective(s)), objective_value(m, a));
      }
    }
  }
  EXPECT_GT(rejected, 0);
  RecordProperty("accepted", accepted);
}

TEST(Check, ReportsBoundsIntegralityAndMissingValues) {
  const Instance inst = testing::single_unit_instance();
  const LinearModel m = build_time_indexed_model(inst);
  Assignment a = time_indexed_assignment(inst, branch_and_bound(inst).schedule);
  a["y_1_1_0"] = 0.5;
  const auto v = check_assignment(m, a);
  EXPECT_FALSE(v.empty());
  bool names_variable = false;
  for (const auto& x : v) names_variable |= x.name == "y_1_1_0";
  EXPECT_TRUE(names_variable);
  a.erase("z_1");
  EXPECT_THROW(check_assignment(m, a), MissingVariable);
}

TEST(Check, ToleranceAcceptsRoundingNoise) {
  const Instance inst = testing::worked_example();
  const Schedule s = branch_and_bound(inst).schedule;
  const LinearModel m = build_sequence_model(inst);
  Assignment a = sequence_assignment(inst, s);
  for (auto& [name, value] : a) {
    if (name.starts_with("tau")) value += 1e-8;
  }
  EXPECT_TRUE(check_assignment(m, a).empty());
  EXPECT_EQ(objective(decode_sequence_solution(inst, a)), 45);
}

TEST(LpFormat, RoundTripsBothModels) {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const Instance inst = generate_instance({1 + static_cast<int>(seed % 3), 1 + static_cast<int>(seed % 2)}, seed);
    for (ModelKind kind : kKinds) {
      const LinearModel m = build(inst, kind);
      const std::string text = write_lp(m);
      const LinearModel back = read_lp(text);
      EXPECT_EQ(back.kind(), kind);
      EXPECT_TRUE(structurally_equal(m, back));
      // Variable order, and with it the line wrapping, may change.
      EXPECT_TRUE(sorted_tokens(write_lp(back)) == sorted_tokens(text));
    }
  }
}

TEST(LpFormat, StructuralEqualityNoticesChanges) {
  const Instance inst = testing::worked_example();
  EXPECT_FALSE(structurally_equal(build_sequence_model(inst), build_time_indexed_model(inst)));
  EXPECT_FALSE(structurally_equal(build_sequence_model(inst),
                                  build_sequence_model(testing::micro_instance(2))));
}

TEST(LpFormat, RejectsMalformedText) {
  const std::string good = write_lp(build_sequence_model(testing::single_unit_instance()));
  EXPECT_THROW(read_lp("Minimize\n obj: x\nEnd\n"), ParseError);
  std::string no_end = good.substr(0, good.rfind("End"));
  EXPECT_THROW(read_lp(no_end), ParseError);
  std::string bad = good;
  bad.replace(bad.find("Subject To"), 10, "Subject To\n broken: 3 x ?? 4");
  EXPECT_THROW(read_lp(bad), ParseError);
}

TEST(SolutionFormat, RoundTripsAndDefaultsToZero) {
  const Instance inst = testing::worked_example();
  const LinearModel m = build_time_indexed_model(inst);
  const Assignment a = time_indexed_assignment(inst, branch_and_bound(inst).schedule);
  const Assignment back = read_solution(m, write_solution(m, a));
  for (const Variable& v : m.variables()) EXPECT_EQ(back.at(v.name), a.at(v.name)) << v.name;
  const Assignment sparse = read_solution(m, "# comment\nz_1 19\n");
  EXPECT_EQ(sparse.at("z_1"), 19.0);
  EXPECT_EQ(sparse.at("y_1_1_0"), 0.0);
  EXPECT_THROW(read_solution(m, "nope 1\n"), ParseError);
  EXPECT_THROW(read_solution(m, "z_1 abc\n"), ParseError);
}

}  // namespace
}  // namespace trsp
