#ifndef TRSP_SCHEDULE_HPP
#define TRSP_SCHEDULE_HPP

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "trsp/instance.hpp"

namespace trsp {

// Places the robot can be. Every pair is one time unit apart.
enum class Location : int { kRack = 0, kMixer = 1, kShaker = 2, kBooth = 3 };

inline constexpr Location location_of(Machine m) {
  return static_cast<Location>(static_cast<int>(m));
}
inline constexpr bool is_machine(Location l) { return l != Location::kRack; }
inline constexpr Machine machine_at(Location l) { return static_cast<Machine>(static_cast<int>(l)); }

std::string_view location_name(Location l);  // rack, m1, m2, m3
std::optional<Location> parse_location(std::string_view name);

// What the robot does during the unit interval (slot, slot + 1).
struct RobotAction {
  enum class Kind { kIdle, kMove };

  int slot = 0;
  Kind kind = Kind::kIdle;
  Location from = Location::kRack;  // for kIdle: the robot's position
  Location to = Location::kRack;
  int sample = -1;  // carried sample (0-based), -1 when driving empty

  static RobotAction idle(int slot, Location at) {
    return {slot, Kind::kIdle, at, at, -1};
  }
  static RobotAction move(int slot, Location from, Location to, int sample = -1) {
    return {slot, Kind::kMove, from, to, sample};
  }
  bool is_carry() const { return kind == Kind::kMove && sample >= 0; }

  friend bool operator==(const RobotAction&, const RobotAction&) = default;
};

// Actions for slots 0, 1, ..., size-1. The robot starts at the rack.
struct RobotProgram {
  std::vector<RobotAction> actions;

  int length() const { return static_cast<int>(actions.size()); }
  friend bool operator==(const RobotProgram&, const RobotProgram&) = default;
};

struct MachineVisit {
  int sample = 0;
  Machine machine = Machine::kMixer;
  int photo = -1;  // 0-based photo index on the booth, -1 otherwise
  int start = 0;
  int end = 0;

  friend bool operator==(const MachineVisit&, const MachineVisit&) = default;
};

struct Schedule {
  std::vector<MachineVisit> visits;  // sorted by (start, machine)
  std::vector<int> completions;      // rack arrival after the last photo
  RobotProgram program;
};

// Rules of the problem. kHorizon flags activity past a supplied time horizon.
enum class Rule {
  kMachineExclusive = 1,   // R1
  kStartOnArrival = 2,     // R2
  kLiftAtCompletion = 3,   // R3
  kSingleCarry = 4,        // R4
  kNoSwapAtMachine = 5,    // R5
  kRouteOrder = 6,         // R6
  kPhotoImmediate = 7,     // R7
  kPhotoGap = 8,           // R8
  kReturnToRack = 9,       // R9
  kHorizon = 10,
};

std::string rule_code(Rule rule);  // "R1".."R9", "H"

struct Violation {
  Rule rule = Rule::kRouteOrder;
  int time = 0;
  int sample = -1;
  std::optional<Machine> machine;
  std::string message;
};

std::string describe(const Violation& v);

// The program is not location-consistent (or has non-contiguous slots).
class MalformedProgram : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SimulationResult {
  std::optional<Schedule> schedule;  // set iff violations is empty
  std::vector<Violation> violations;

  bool feasible() const { return schedule.has_value(); }
};

// Replays `program` and checks every rule, collecting all violations.
// Throws MalformedProgram on location-inconsistent action sequences.
SimulationResult simulate(const Instance& instance, const RobotProgram& program,
                          std::optional<int> horizon = std::nullopt);

// Sum of completion times.
long long objective(const Schedule& schedule);

// Start times of one sample's visits: mixer, shaker and each photo.
struct SampleStarts {
  int mixer = 0;
  int shaker = 0;
  std::vector<int> photos;

  friend bool operator==(const SampleStarts&, const SampleStarts&) = default;
};

std::vector<SampleStarts> starts_of(const Schedule& schedule, int num_samples);

// Deterministic robot program realizing the given start times: the implied
// carries at their fixed slots, shaker transfers direct when the shaker start
// is the mixer end + 1 and via the rack otherwise, empty moves made as early
// as possible toward the next pickup. Conflicts that prevent building a
// location-consistent program are reported as violations.
struct Assembly {
  RobotProgram program;
  std::vector<Violation> violations;
};

Assembly assemble_program(const Instance& instance,
                          std::span<const SampleStarts> starts);

// A loaded move during one slot.
struct Carry {
  int slot = 0;
  int sample = 0;
  Location from = Location::kRack;
  Location to = Location::kRack;
};

// Orders the carries by slot and fills the remaining slots with idling and
// with empty moves made as early as possible toward the next pickup.
Assembly assemble_carries(std::vector<Carry> carries);

// assemble_program followed by simulate when assembly succeeded.
SimulationResult realize(const Instance& instance, std::span<const SampleStarts> starts,
                         std::optional<int> horizon = std::nullopt);

// Schedule file ("trsp-schedule v1"): one robot action per line.
std::string write_program(const RobotProgram& program, std::optional<long long> objective = {});
RobotProgram read_program(std::string_view text);

// Gantt rendering. Throws std::invalid_argument on an empty schedule.
enum class GanttStyle { kAscii, kSvg };
std::string render_gantt(const Schedule& schedule, GanttStyle style);

}  // namespace trsp

#endif  // TRSP_SCHEDULE_HPP
