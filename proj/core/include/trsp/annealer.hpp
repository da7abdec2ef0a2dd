#ifndef TRSP_ANNEALER_HPP
#define TRSP_ANNEALER_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "trsp/qubo.hpp"

namespace trsp {

// Trace timestamps: monotonic wall-clock seconds, or the sweep count, which
// makes traces reproducible byte for byte.
enum class TraceClock { kWall, kSweeps };

struct AnnealConfig {
  std::int64_t steps = 100'000;  // sweeps per replica
  int replicas = 1;
  std::uint64_t seed = 1;
  // Replicas run with indices first_replica .. first_replica + replicas - 1;
  // replica i always uses replica_seed(seed, i).
  int first_replica = 0;
  std::optional<double> t_initial;        // default: max |coefficient|
  double t_final = 0.01;
  std::optional<double> offset_increase;  // default: t_final
  std::optional<double> max_seconds;      // stop early on wall time
  int threads = 0;                        // 0: one per hardware thread
  TraceClock clock = TraceClock::kWall;
};

struct TracePoint {
  double seconds = 0.0;
  double energy = 0.0;
};

struct AnnealResult {
  Bits best;
  double best_energy = 0.0;
  int best_replica = 0;
  std::vector<double> replica_energies;
  std::vector<TracePoint> trace;  // best-so-far over all replicas
  std::int64_t sweeps = 0;        // summed over replicas
};

std::uint64_t replica_seed(std::uint64_t seed, int replica);

// Throws std::invalid_argument on an invalid configuration.
AnnealResult anneal(const QuboProblem& problem, const AnnealConfig& config);

// Solver budgets as a function of the variable count.
std::int64_t steps_budget(std::int64_t n);
double time_budget_leap(std::int64_t n);
double time_budget_hybrid(std::int64_t n);

}  // namespace trsp

#endif  // TRSP_ANNEALER_HPP
