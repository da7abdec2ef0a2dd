#ifndef TRSP_EXACT_HPP
#define TRSP_EXACT_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "trsp/instance.hpp"
#include "trsp/schedule.hpp"

namespace trsp {

// Samples one after another in id order with no waiting: always feasible and
// finished by time_horizon(instance).
Schedule sequential_schedule(const Instance& instance);

struct SearchLimits {
  std::int64_t max_nodes = 50'000'000;
  double max_seconds = 60.0;
  // Only solutions with objective strictly below the cutoff are searched for.
  std::optional<long long> incumbent_cutoff;
};

struct OracleResult {
  Schedule schedule;
  long long objective = 0;
  bool proven_optimal = false;
  std::int64_t nodes = 0;
};

// Depth-first search over robot decisions with dominance pruning on repeated
// states and an admissible completion-time bound. When a limit is hit the
// best incumbent is returned with proven_optimal = false.
OracleResult branch_and_bound(const Instance& instance, const SearchLimits& limits = {});

// The admissible bound used by branch_and_bound at the root: every sample
// needs at least its chain length from time 0.
long long root_lower_bound(const Instance& instance);

class TooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EnumeratedSchedule {
  Schedule schedule;
  long long objective = 0;
};

// Every feasible schedule whose robot program ends by `horizon`, keyed by
// its visit times. Throws TooLarge when the candidate count exceeds
// max_candidates.
void for_each_feasible(const Instance& instance, int horizon,
                       const std::function<void(const EnumeratedSchedule&)>& visit,
                       std::int64_t max_candidates = 50'000'000);

std::vector<EnumeratedSchedule> enumerate_all(const Instance& instance, int horizon,
                                              std::int64_t max_candidates = 50'000'000);

}  // namespace trsp

#endif  // TRSP_EXACT_HPP
