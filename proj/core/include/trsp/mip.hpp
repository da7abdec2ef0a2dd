#ifndef TRSP_MIP_HPP
#define TRSP_MIP_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "trsp/instance.hpp"
#include "trsp/linear_model.hpp"
#include "trsp/schedule.hpp"

namespace trsp {

// Place (a = 0) or pick (a = 1) event of sample j (0-based) at visit i:
// i = 1 mixer, i = 2 shaker, i = 2 + k photo k (k = 1..K).
struct Event {
  int sample = 0;
  int visit = 1;
  int action = 0;
};

std::vector<Event> events(const Instance& instance);  // 2 N (2 + K) events
std::string event_variable(const Event& e);           // "tau_<j>_<i>_<a>", 1-based j

struct ModelSize {
  long long variables = 0;
  long long binaries = 0;
  long long constraints = 0;
};

// Event-time model with machine-order, photo-interleaving and robot-order
// binaries.
LinearModel build_sequence_model(const Instance& instance);
ModelSize sequence_model_size(const Instance& instance);

// Route-indexed model: y_{j,r,t} = 1 when sample j travels route r during
// slot t, plus completion variables z_j.
LinearModel build_time_indexed_model(const Instance& instance);
ModelSize time_indexed_model_size(const Instance& instance);

// Routes r = 1..8.
Location route_from(int route);
Location route_to(int route);
// 0 when (from, to) is not a route.
int route_of(Location from, Location to);

// Assignments induced by a feasible schedule.
Assignment sequence_assignment(const Instance& instance, const Schedule& schedule);
Assignment time_indexed_assignment(const Instance& instance, const Schedule& schedule);

// The simulator rejected a decoded assignment.
class DecodeMismatch : public std::runtime_error {
 public:
  explicit DecodeMismatch(std::vector<Violation> violations);
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

// Both decoders require an assignment that passes check_assignment.
Schedule decode_sequence_solution(const Instance& instance, const Assignment& assignment);
Schedule decode_time_indexed_solution(const Instance& instance, const Assignment& assignment);
Schedule decode_solution(const Instance& instance, ModelKind kind, const Assignment& assignment);

}  // namespace trsp

#endif  // TRSP_MIP_HPP
