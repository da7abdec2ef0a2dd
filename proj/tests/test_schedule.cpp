#include <gtest/gtest.h>

#include <algorithm>

#include "support.hpp"
#include "trsp/exact.hpp"
#include "trsp/random.hpp"
#include "trsp/schedule.hpp"

namespace trsp {
namespace {

using L = Location;

RobotAction carry(int t, L from, L to, int sample) { return RobotAction::move(t, from, to, sample); }
RobotAction empty(int t, L from, L to) { return RobotAction::move(t, from, to); }
RobotAction idle(int t, L at) { return RobotAction::idle(t, at); }

bool has_rule(const SimulationResult& r, Rule rule) {
  return std::any_of(r.violations.begin(), r.violations.end(),
                     [rule](const Violation& v) { return v.rule == rule; });
}

// The only feasible program without waiting for N = 1, K = 1, p = (1,1,1).
RobotProgram unit_program() {
  return {{carry(0, L::kRack, L::kMixer, 0), idle(1, L::kMixer),
           carry(2, L::kMixer, L::kShaker, 0), idle(3, L::kShaker),
           carry(4, L::kShaker, L::kBooth, 0), idle(5, L::kBooth),
           carry(6, L::kBooth, L::kRack, 0)}};
}

Instance two_photo_unit(int gap) {
  InstanceParams p;
  p.num_photos = 2;
  p.proc_times = {{1, 1, 1}};
  p.photo_gaps = {{gap}};
  return Instance::create(p);
}

TEST(Simulate, SingleUnitSample) {
  const SimulationResult r = simulate(testing::single_unit_instance(), unit_program());
  ASSERT_TRUE(r.feasible());
  EXPECT_EQ(r.schedule->completions, std::vector<int>{7});
  EXPECT_EQ(objective(*r.schedule), 7);
  ASSERT_EQ(r.schedule->visits.size(), 3u);
  EXPECT_EQ(r.schedule->visits[0], (MachineVisit{0, Machine::kMixer, -1, 1, 2}));
  EXPECT_EQ(r.schedule->visits[1], (MachineVisit{0, Machine::kShaker, -1, 3, 4}));
  EXPECT_EQ(r.schedule->visits[2], (MachineVisit{0, Machine::kBooth, 0, 5, 6}));
}

TEST(Simulate, LateLiftViolatesR3) {
  RobotProgram p = {{carry(0, L::kRack, L::kMixer, 0), idle(1, L::kMixer), idle(2, L::kMixer),
                     carry(3, L::kMixer, L::kShaker, 0), idle(4, L::kShaker),
                     carry(5, L::kShaker, L::kBooth, 0), idle(6, L::kBooth),
                     carry(7, L::kBooth, L::kRack, 0)}};
  const SimulationResult r = simulate(testing::single_unit_instance(), p);
  EXPECT_FALSE(r.feasible());
  EXPECT_TRUE(has_rule(r, Rule::kLiftAtCompletion));
}

TEST(Simulate, EarlyLiftViolatesR3) {
  InstanceParams params;
  params.num_photos = 1;
  params.proc_times = {{2, 1, 1}};
  params.photo_gaps = {{}};
  const SimulationResult r = simulate(Instance::create(params), unit_program());
  EXPECT_TRUE(has_rule(r, Rule::kLiftAtCompletion));
}

TEST(Simulate, BusyMachineViolatesR1) {
  InstanceParams params;
  params.num_photos = 1;
  params.proc_times = {{3, 1, 1}, {1, 1, 1}};
  params.photo_gaps = {{}, {}};
  RobotProgram p = {{carry(0, L::kRack, L::kMixer, 0), empty(1, L::kMixer, L::kRack),
                     carry(2, L::kRack, L::kMixer, 1)}};
  const SimulationResult r = simulate(Instance::create(params), p);
  EXPECT_TRUE(has_rule(r, Rule::kMachineExclusive));
}

TEST(Simulate, SwapAtMachineViolatesR5) {
  InstanceParams params;
  params.num_photos = 1;
  params.proc_times = {{2, 1, 1}, {1, 1, 1}};
  params.photo_gaps = {{}, {}};
  RobotProgram p = {{carry(0, L::kRack, L::kMixer, 0), empty(1, L::kMixer, L::kRack),
                     carry(2, L::kRack, L::kMixer, 1), carry(3, L::kMixer, L::kShaker, 0)}};
  const SimulationResult r = simulate(Instance::create(params), p);
  EXPECT_TRUE(has_rule(r, Rule::kNoSwapAtMachine));
  EXPECT_FALSE(has_rule(r, Rule::kMachineExclusive));
}

TEST(Simulate, PlacingAfterRackReturnIsNotASwap) {
  // Two adjacent carries through the rack are legal.
  InstanceParams params;
  params.num_photos = 1;
  params.proc_times = {{1, 1, 1}, {1, 1, 1}};
  params.photo_gaps = {{}, {}};
  const Instance inst = Instance::create(params);
  const SimulationResult r = realize(inst, std::vector<SampleStarts>{{1, 4, {6}}, {9, 11, {13}}});
  ASSERT_TRUE(r.feasible()) << describe(r.violations.front());
  EXPECT_EQ(r.schedule->program.actions[2], carry(2, L::kMixer, L::kRack, 0));
  EXPECT_EQ(r.schedule->program.actions[3], carry(3, L::kRack, L::kShaker, 0));
}

TEST(Simulate, WrongRouteViolatesR6) {
  RobotProgram p = {{carry(0, L::kRack, L::kShaker, 0)}};
  const SimulationResult r = simulate(testing::single_unit_instance(), p);
  EXPECT_TRUE(has_rule(r, Rule::kRouteOrder));
}

TEST(Simulate, DelayedFirstPhotoViolatesR7) {
  RobotProgram p = {{carry(0, L::kRack, L::kMixer, 0), idle(1, L::kMixer),
                     carry(2, L::kMixer, L::kShaker, 0), idle(3, L::kShaker),
                     carry(4, L::kShaker, L::kRack, 0), carry(5, L::kRack, L::kBooth, 0),
                     idle(6, L::kBooth), carry(7, L::kBooth, L::kRack, 0)}};
  const SimulationResult r = simulate(testing::single_unit_instance(), p);
  EXPECT_TRUE(has_rule(r, Rule::kPhotoImmediate));
}

RobotProgram two_photo_program(int second_photo_slot) {
  RobotProgram p = {{carry(0, L::kRack, L::kMixer, 0), idle(1, L::kMixer),
                     carry(2, L::kMixer, L::kShaker, 0), idle(3, L::kShaker),
                     carry(4, L::kShaker, L::kBooth, 0), idle(5, L::kBooth),
                     carry(6, L::kBooth, L::kRack, 0)}};
  int t = 7;
  while (t < second_photo_slot) p.actions.push_back(idle(t++, L::kRack));
  p.actions.push_back(carry(t++, L::kRack, L::kBooth, 0));
  p.actions.push_back(idle(t++, L::kBooth));
  p.actions.push_back(carry(t, L::kBooth, L::kRack, 0));
  return p;
}

TEST(Simulate, PhotoGapIsExact) {
  const Instance inst = two_photo_unit(2);
  const SimulationResult ok = simulate(inst, two_photo_program(7));
  ASSERT_TRUE(ok.feasible());
  EXPECT_EQ(objective(*ok.schedule), 10);
  const SimulationResult late = simulate(inst, two_photo_program(8));
  EXPECT_TRUE(has_rule(late, Rule::kPhotoGap));
}

TEST(Simulate, UnreturnedSampleViolatesR9) {
  RobotProgram p = unit_program();
  p.actions.pop_back();
  const SimulationResult r = simulate(testing::single_unit_instance(), p);
  EXPECT_TRUE(has_rule(r, Rule::kLiftAtCompletion) || has_rule(r, Rule::kReturnToRack));
  p.actions.pop_back();
  EXPECT_TRUE(has_rule(simulate(testing::single_unit_instance(), p), Rule::kReturnToRack));
}

TEST(Simulate, HorizonIsEnforcedWhenGiven) {
  const Instance inst = testing::single_unit_instance();
  EXPECT_TRUE(simulate(inst, unit_program(), 7).feasible());
  EXPECT_TRUE(has_rule(simulate(inst, unit_program(), 6), Rule::kHorizon));
}

TEST(Simulate, RejectsLocationInconsistentPrograms) {
  const Instance inst = testing::single_unit_instance();
  EXPECT_THROW(simulate(inst, {{carry(0, L::kMixer, L::kShaker, 0)}}), MalformedProgram);
  EXPECT_THROW(simulate(inst, {{idle(1, L::kRack)}}), MalformedProgram);
  EXPECT_THROW(simulate(inst, {{carry(0, L::kRack, L::kMixer, 3)}}), MalformedProgram);
}

TEST(Simulate, ReportsAllViolations) {
  RobotProgram p = {{carry(0, L::kRack, L::kShaker, 0), idle(1, L::kShaker), idle(2, L::kShaker)}};
  const SimulationResult r = simulate(testing::single_unit_instance(), p);
  EXPECT_GE(r.violations.size(), 2u);
  for (const Violation& v : r.violations) EXPECT_FALSE(describe(v).empty());
}

TEST(Realize, ReproducesWorkedExample) {
  const Instance inst = testing::worked_example();
  const SimulationResult r = realize(inst, testing::worked_example_starts(), time_horizon(inst));
  ASSERT_TRUE(r.feasible());
  EXPECT_EQ(r.schedule->completions, (std::vector<int>{19, 26}));
  EXPECT_EQ(objective(*r.schedule), 45);
  EXPECT_EQ(starts_of(*r.schedule, 2), testing::worked_example_starts());
}

TEST(Realize, RandomStartsNeverBreakProgramConsistency) {
  SplitMix64 rng(11);
  int feasible = 0;
  for (std::uint64_t i = 1; i <= 40; ++i) {
    const Instance inst = testing::micro_instance(i);
    const int horizon = time_horizon(inst);
    for (int trial = 0; trial < 300; ++trial) {
      std::vector<SampleStarts> starts;
      for (int j = 0; j < inst.num_samples(); ++j) {
        SampleStarts s;
        s.mixer = static_cast<int>(rng.uniform_int(1, horizon / 2));
        s.shaker = s.mixer + inst.proc(j, Machine::kMixer) + static_cast<int>(rng.uniform_int(1, 4));
        const int first = s.shaker + inst.proc(j, Machine::kShaker) + 1;
        for (int k = 0; k < inst.num_photos(); ++k) s.photos.push_back(first + inst.photo_offset(j, k));
        starts.push_back(s);
      }
      SimulationResult r;
      ASSERT_NO_THROW(r = realize(inst, starts));
      if (r.feasible()) {
        ++feasible;
        EXPECT_EQ(starts_of(*r.schedule, inst.num_samples()), starts);
      }
    }
  }
  EXPECT_GT(feasible, 0);
}

TEST(AssembleCarries, FlagsCarriesInTheSameSlot) {
  const Assembly a = assemble_carries({{0, 0, L::kRack, L::kMixer}, {0, 1, L::kRack, L::kMixer}});
  ASSERT_EQ(a.violations.size(), 1u);
  EXPECT_EQ(a.violations[0].rule, Rule::kSingleCarry);
}

TEST(AssembleCarries, InsertsEmptyMovesAndIdles) {
  const Assembly a = assemble_carries({{0, 0, L::kRack, L::kMixer}, {4, 0, L::kRack, L::kShaker}});
  ASSERT_TRUE(a.violations.empty());
  ASSERT_EQ(a.program.length(), 5);
  EXPECT_EQ(a.program.actions[1], empty(1, L::kMixer, L::kRack));
  EXPECT_EQ(a.program.actions[3], idle(3, L::kRack));
  const Assembly blocked = assemble_carries({{0, 0, L::kRack, L::kMixer}, {1, 1, L::kRack, L::kMixer}});
  EXPECT_EQ(blocked.violations.size(), 1u);
}

TEST(ProgramFormat, RoundTrips) {
  const Instance inst = testing::worked_example();
  const Schedule s = *realize(inst, testing::worked_example_starts()).schedule;
  const std::string text = write_program(s.program, objective(s));
  EXPECT_NE(text.find("# objective: 45"), std::string::npos);
  EXPECT_EQ(read_program(text), s.program);
}

TEST(ProgramFormat, RejectsMalformedText) {
  EXPECT_THROW(read_program("0 idle rack\n"), ParseError);
  EXPECT_THROW(read_program("trsp-schedule v1\n0 fly rack\n"), ParseError);
  EXPECT_THROW(read_program("trsp-schedule v1\n0 move rack attic 1\n"), ParseError);
  EXPECT_THROW(read_program("trsp-schedule v1\n0 move rack m1 0\n"), ParseError);
  EXPECT_THROW(read_program("trsp-schedule v1\nslots 2\n0 idle rack\n"), ParseError);
}

// Minimal XML well-formedness: balanced tags, quoted attributes, one root.
bool well_formed_xml(const std::string& text, std::string& root) {
  std::vector<std::string> stack;
  int roots = 0;
  std::size_t i = 0;
  while ((i = text.find('<', i)) != std::string::npos) {
    const std::size_t end = text.find('>', i);
    if (end == std::string::npos) return false;
    std::string tag = text.substr(i + 1, end - i - 1);
    i = end + 1;
    if (tag.starts_with("?") || tag.starts_with("!--")) continue;
    if (std::count(tag.begin(), tag.end(), '"') % 2 != 0) return false;
    if (tag.starts_with("/")) {
      if (stack.empty() || stack.back() != tag.substr(1)) return false;
      stack.pop_back();
      continue;
    }
    const bool self_closing = tag.ends_with("/");
    const std::string name = tag.substr(0, tag.find_first_of(" /\n"));
    if (stack.empty()) {
      ++roots;
      root = name;
    }
    if (!self_closing) stack.push_back(name);
  }
  return stack.empty() && roots == 1;
}

TEST(Gantt, SvgIsWellFormed) {
  const Instance inst = testing::worked_example();
  const Schedule s = *realize(inst, testing::worked_example_starts()).schedule;
  const std::string svg = render_gantt(s, GanttStyle::kSvg);
  std::string root;
  EXPECT_TRUE(well_formed_xml(svg, root));
  EXPECT_EQ(root, "svg");
  // One bar per carry plus one per machine visit.
  int titles = 0;
  for (std::size_t at = 0; (at = svg.find("<title>", at)) != std::string::npos; ++at) ++titles;
  EXPECT_EQ(titles, 13 + 8);
}

TEST(Gantt, AsciiHasOneRowPerResource) {
  const Schedule s = *simulate(testing::single_unit_instance(), unit_program()).schedule;
  const std::string ascii = render_gantt(s, GanttStyle::kAscii);
  for (const char* row : {"robot ", "M1    ", "M2    ", "M3    "}) {
    EXPECT_NE(ascii.find(row), std::string::npos) << row;
  }
  EXPECT_THROW(render_gantt(Schedule{}, GanttStyle::kAscii), std::invalid_argument);
}

}  // namespace
}  // namespace trsp
