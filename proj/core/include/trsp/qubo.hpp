#ifndef TRSP_QUBO_HPP
#define TRSP_QUBO_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "trsp/instance.hpp"
#include "trsp/schedule.hpp"

namespace trsp {

// Term tags of the penalized objective: F is the completion-time objective,
// P1..P7 are constraint penalties.
enum class Term : int { kObjective = 0, kP1, kP2, kP3, kP4, kP5, kP6, kP7 };
inline constexpr int kTermCount = 8;

std::string_view term_name(Term term);  // "F", "P1".."P7"

// rho_0 (objective) .. rho_7.
using Weights = std::array<double, kTermCount>;
using Breakdown = std::array<double, kTermCount>;

enum class RhoProfile { kLeap, kFda, kFdah, kAuto };

std::optional<RhoProfile> parse_rho_profile(std::string_view name);
std::string_view rho_profile_name(RhoProfile profile);

// Weights of a named profile. kAuto puts rho_0 = 1 and every penalty weight
// one above the sequential-schedule objective, so that every infeasible
// assignment has a higher energy than any feasible one.
Weights profile_weights(RhoProfile profile, const Instance& instance);

struct VarKey {
  int sample = 0;
  Machine machine = Machine::kMixer;
  int time = 1;

  friend bool operator==(const VarKey&, const VarKey&) = default;
};

// Start variable x_{j,m,t} for t in 1..T-1, laid out sample-major, then
// machine, then time.
class VarMap {
 public:
  VarMap(int num_samples, int horizon);

  int size() const { return 3 * num_samples_ * (horizon_ - 1); }
  int horizon() const { return horizon_; }
  int num_samples() const { return num_samples_; }
  bool contains(int time) const { return time >= 1 && time <= horizon_ - 1; }

  int index(int sample, Machine m, int time) const {
    return (sample * 3 + machine_index(m)) * (horizon_ - 1) + time - 1;
  }
  VarKey key(int index) const;

 private:
  int num_samples_;
  int horizon_;
};

using Bits = std::vector<std::uint8_t>;

// One coefficient: i == j is the linear coefficient of x_i.
struct QuboEntry {
  std::int32_t i = 0;
  std::int32_t j = 0;
  double coeff = 0.0;
};

class LengthMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class QuboProblem {
 public:
  int size() const { return var_map_.size(); }
  const VarMap& var_map() const { return var_map_; }
  const Weights& weights() const { return weights_; }

  // Weighted coefficients of one term, sorted by (i, j) with i <= j.
  std::span<const QuboEntry> entries(Term term) const {
    return terms_[static_cast<int>(term)];
  }
  double term_offset(Term term) const { return offsets_[static_cast<int>(term)]; }
  double offset() const;

  // Q with all terms summed, sorted by (i, j); zero sums are dropped.
  std::vector<QuboEntry> combined() const;
  std::size_t nonzeros() const;  // entries of combined()

 private:
  friend QuboProblem build_qubo(const Instance& instance, const Weights& weights);
  explicit QuboProblem(VarMap map) : var_map_(map) {}

  VarMap var_map_;
  Weights weights_{};
  std::array<std::vector<QuboEntry>, kTermCount> terms_;
  std::array<double, kTermCount> offsets_{};
};

// Throws std::invalid_argument when a weight is not positive.
QuboProblem build_qubo(const Instance& instance, const Weights& weights);

double energy(const QuboProblem& problem, const Bits& bits);
Breakdown penalty_breakdown(const QuboProblem& problem, const Bits& bits);
// Sum of the P1..P7 entries.
double total_penalty(const Breakdown& breakdown);

class OutOfHorizon : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

Bits encode(const VarMap& map, const Schedule& schedule);

struct InfeasibleReport {
  std::vector<Violation> violations;
  Breakdown breakdown{};
};

using Decoded = std::variant<Schedule, InfeasibleReport>;

// Reads the start times, checks the visit counts, builds the implied robot
// program and simulates it within the time horizon.
Decoded decode(const Instance& instance, const QuboProblem& problem, const Bits& bits);

// Sparse coordinate text: "n offset" then "i j coeff" lines with i <= j.
std::string write_qubo(const QuboProblem& problem);

}  // namespace trsp

#endif  // TRSP_QUBO_HPP
