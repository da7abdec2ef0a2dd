#include <gtest/gtest.h>

#include <sstream>

#include "fuzz.hpp"
#include "support.hpp"
#include "trsp/exact.hpp"
#include "trsp/qubo.hpp"

namespace trsp {
namespace {

constexpr Weights kUnit = {1, 1, 1, 1, 1, 1, 1, 1};

bool feasible(const Decoded& d) { return std::holds_alternative<Schedule>(d); }

TEST(Profiles, MatchPublishedWeights) {
  const Instance inst = testing::worked_example();
  EXPECT_EQ(profile_weights(RhoProfile::kLeap, inst),
            (Weights{1, 30000, 10000, 10000, 10000, 10000, 15000, 10000}));
  EXPECT_EQ(profile_weights(RhoProfile::kFda, inst),
            (Weights{1000, 4000, 1000, 1000, 1500, 1500, 1500, 1500}));
  EXPECT_EQ(profile_weights(RhoProfile::kFdah, inst),
            (Weights{1000, 2000, 500, 500, 750, 750, 750, 750}));
}

TEST(Profiles, AutoExceedsTheSequentialObjective) {
  const Instance inst = testing::worked_example();
  const double seq = static_cast<double>(objective(sequential_schedule(inst)));
  const Weights w = profile_weights(RhoProfile::kAuto, inst);
  EXPECT_EQ(w[0], 1.0);
  for (int t = 1; t < kTermCount; ++t) EXPECT_EQ(w[t], seq + 1.0);
}

TEST(Profiles, NamesRoundTrip) {
  for (RhoProfile p : {RhoProfile::kLeap, RhoProfile::kFda, RhoProfile::kFdah, RhoProfile::kAuto}) {
    EXPECT_EQ(parse_rho_profile(rho_profile_name(p)), p);
  }
  EXPECT_FALSE(parse_rho_profile("gurobi"));
  EXPECT_EQ(term_name(Term::kObjective), "F");
  EXPECT_EQ(term_name(Term::kP7), "P7");
}

TEST(VarMap, LayoutIsSampleMachineTime) {
  const VarMap map(2, 10);
  EXPECT_EQ(map.size(), 54);
  EXPECT_EQ(map.index(0, Machine::kMixer, 1), 0);
  EXPECT_EQ(map.index(0, Machine::kShaker, 1), 9);
  EXPECT_EQ(map.index(1, Machine::kMixer, 9), 35);
  for (int i = 0; i < map.size(); ++i) {
    const VarKey k = map.key(i);
    EXPECT_EQ(map.index(k.sample, k.machine, k.time), i);
  }
  EXPECT_FALSE(map.contains(0));
  EXPECT_FALSE(map.contains(10));
}

TEST(Build, RejectsNonPositiveWeights) {
  Weights w = kUnit;
  w[3] = 0;
  EXPECT_THROW(build_qubo(testing::worked_example(), w), std::invalid_argument);
}

TEST(Build, SizeIsThreeNTimesHorizonMinusOne) {
  const Instance inst = testing::worked_example();
  const QuboProblem q = build_qubo(inst, kUnit);
  EXPECT_EQ(q.size(), qubo_variable_count(inst));
  EXPECT_EQ(q.size(), 3 * 2 * (time_horizon(inst) - 1));
  for (int t = 0; t < kTermCount; ++t) {
    for (const QuboEntry& e : q.entries(static_cast<Term>(t))) {
      EXPECT_LE(e.i, e.j);
      EXPECT_NE(e.coeff, 0.0);
    }
  }
}

TEST(Energy, FeasibleSchedulesCostTheirObjective) {
  for (std::uint64_t i = 1; i <= 12; ++i) {
    const Instance inst = testing::micro_instance(i);
    const Weights w = profile_weights(RhoProfile::kFda, inst);
    const QuboProblem q = build_qubo(inst, w);
    for_each_feasible(inst, time_horizon(inst), [&](const EnumeratedSchedule& e) {
      const Bits bits = encode(q.var_map(), e.schedule);
      const Breakdown b = penalty_breakdown(q, bits);
      ASSERT_EQ(total_penalty(b), 0.0);
      ASSERT_EQ(energy(q, bits), w[0] * static_cast<double>(e.objective));
      const Decoded d = decode(inst, q, bits);
      ASSERT_TRUE(feasible(d));
      ASSERT_EQ(objective(std::get<Schedule>(d)), e.objective);
    });
  }
}

TEST(Energy, PenaltyIsZeroExactlyWhenDecodeSucceeds) {
  SplitMix64 rng(2024);
  int infeasible = 0, feasible_count = 0;
  for (std::uint64_t i = 1; i <= 8; ++i) {
    const Instance inst = testing::micro_instance(i);
    const QuboProblem q = build_qubo(inst, kUnit);
    std::vector<Bits> seeds;
    for_each_feasible(inst, time_horizon(inst), [&](const EnumeratedSchedule& e) {
      if (seeds.size() < 20) seeds.push_back(encode(q.var_map(), e.schedule));
    });
    for (int trial = 0; trial < 150; ++trial) {
      const Bits bits = trial % 3 == 0 ? testing::random_counted_bits(inst, q.var_map(), rng)
                                       : testing::perturb(seeds[trial % seeds.size()], q.var_map(), rng);
      const bool zero = total_penalty(penalty_breakdown(q, bits)) == 0.0;
      const bool ok = feasible(decode(inst, q, bits));
      ASSERT_EQ(zero, ok) << inst.id() << " trial " << trial;
      ok ? ++feasible_count : ++infeasible;
    }
  }
  EXPECT_GT(infeasible, 100);
  EXPECT_GT(feasible_count, 10);
}

TEST(Energy, LeapWeightsSeparateFeasibleFromInfeasible) {
  SplitMix64 rng(5);
  for (std::uint64_t i = 1; i <= 6; ++i) {
    const Instance inst = testing::micro_instance(i);
    const QuboProblem q = build_qubo(inst, profile_weights(RhoProfile::kLeap, inst));
    for (int trial = 0; trial < 200; ++trial) {
      const Bits bits = testing::random_counted_bits(inst, q.var_map(), rng);
      EXPECT_EQ(energy(q, bits) < 1e4, feasible(decode(inst, q, bits)));
    }
  }
}

TEST(Energy, BreakdownSumsToEnergy) {
  SplitMix64 rng(8);
  const Instance inst = testing::worked_example();
  const QuboProblem q = build_qubo(inst, profile_weights(RhoProfile::kFdah, inst));
  for (int trial = 0; trial < 50; ++trial) {
    const Bits bits = testing::random_counted_bits(inst, q.var_map(), rng);
    const Breakdown b = penalty_breakdown(q, bits);
    double sum = 0;
    for (double x : b) sum += x;
    EXPECT_NEAR(sum, energy(q, bits), 1e-9 * std::abs(sum));
    for (double x : b) EXPECT_GE(x, 0.0);
  }
}

TEST(Energy, RejectsWrongLength) {
  const QuboProblem q = build_qubo(testing::worked_example(), kUnit);
  EXPECT_THROW(energy(q, Bits(3)), LengthMismatch);
  EXPECT_THROW(decode(testing::worked_example(), q, Bits(3)), LengthMismatch);
}

TEST(Decode, WrongCountsAreRouteViolations) {
  const Instance inst = testing::worked_example();
  const QuboProblem q = build_qubo(inst, kUnit);
  const Decoded d = decode(inst, q, Bits(q.size(), 0));
  ASSERT_FALSE(feasible(d));
  const InfeasibleReport& r = std::get<InfeasibleReport>(d);
  EXPECT_FALSE(r.violations.empty());
  for (const Violation& v : r.violations) EXPECT_EQ(v.rule, Rule::kRouteOrder);
  EXPECT_GT(r.breakdown[static_cast<int>(Term::kP1)], 0.0);
}

TEST(Encode, RejectsStartsOutsideTheHorizon) {
  const Instance inst = testing::worked_example();
  const Schedule s = *realize(inst, std::vector<SampleStarts>{{1, 8, {11, 17}}, {40, 49, {55, 58}}}).schedule;
  EXPECT_THROW(encode(VarMap(2, time_horizon(inst)), s), OutOfHorizon);
}

TEST(Export, CoordinateTextReproducesEnergy) {
  const Instance inst = testing::worked_example();
  const QuboProblem q = build_qubo(inst, profile_weights(RhoProfile::kLeap, inst));
  std::istringstream in(write_qubo(q));
  int n = 0;
  double offset = 0;
  in >> n >> offset;
  ASSERT_EQ(n, q.size());
  std::vector<QuboEntry> entries;
  QuboEntry e;
  while (in >> e.i >> e.j >> e.coeff) {
    ASSERT_LE(e.i, e.j);
    entries.push_back(e);
  }
  EXPECT_EQ(entries.size(), q.nonzeros());
  SplitMix64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Bits bits = testing::random_counted_bits(inst, q.var_map(), rng);
    double value = offset;
    for (const QuboEntry& x : entries) value += x.coeff * bits[x.i] * bits[x.j];
    EXPECT_NEAR(value, energy(q, bits), 1e-9 * std::abs(value));
  }
}

}  // namespace
}  // namespace trsp
