#include "trsp/annealer.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "trsp/random.hpp"

namespace trsp {

namespace {

using Clock = std::chrono::steady_clock;

// Symmetric sparse form of Q: linear terms plus neighbour lists.
struct Couplings {
  std::vector<double> linear;
  std::vector<std::int64_t> row;
  std::vector<std::int32_t> col;
  std::vector<double> weight;
  double max_abs = 0.0;
};

Couplings make_couplings(const QuboProblem& problem) {
  const int n = problem.size();
  Couplings c;
  c.linear.assign(n, 0.0);
  c.row.assign(n + 1, 0);
  const std::vector<QuboEntry> q = problem.combined();
  for (const QuboEntry& e : q) {
    c.max_abs = std::max(c.max_abs, std::abs(e.coeff));
    if (e.i == e.j) {
      c.linear[e.i] += e.coeff;
    } else {
      ++c.row[e.i + 1];
      ++c.row[e.j + 1];
    }
  }
  for (int i = 0; i < n; ++i) c.row[i + 1] += c.row[i];
  c.col.resize(c.row[n]);
  c.weight.resize(c.row[n]);
  std::vector<std::int64_t> fill(c.row.begin(), c.row.end() - 1);
  for (const QuboEntry& e : q) {
    if (e.i == e.j) continue;
    c.col[fill[e.i]] = e.j;
    c.weight[fill[e.i]++] = e.coeff;
    c.col[fill[e.j]] = e.i;
    c.weight[fill[e.j]++] = e.coeff;
  }
  return c;
}

struct ReplicaOutcome {
  Bits best;
  double best_energy = 0.0;
  std::vector<TracePoint> trace;
  std::int64_t sweeps = 0;
};

ReplicaOutcome run_replica(const Couplings& c, double offset, const AnnealConfig& config,
                           double t0, double t1, double offset_step, std::uint64_t seed,
                           Clock::time_point start) {
  const int n = static_cast<int>(c.linear.size());
  SplitMix64 rng(seed);
  Bits x(n, 0);
  std::vector<double> delta = c.linear;  // energy change of flipping each bit
  double e = offset;

  ReplicaOutcome out;
  out.best = x;
  out.best_energy = e;
  auto stamp = [&](std::int64_t sweep) {
    if (config.clock == TraceClock::kSweeps) return static_cast<double>(sweep);
    return std::chrono::duration<double>(Clock::now() - start).count();
  };
  out.trace.push_back({stamp(0), e});

  const double ratio = config.steps > 1 ? std::log(t1 / t0) / static_cast<double>(config.steps - 1)
                                        : 0.0;
  std::vector<std::int32_t> accepted;
  accepted.reserve(n);
  double escape = 0.0;
  std::int64_t sweep = 0;
  for (; sweep < config.steps; ++sweep) {
    if (config.max_seconds && (sweep & 255) == 0 &&
        std::chrono::duration<double>(Clock::now() - start).count() > *config.max_seconds) {
      break;
    }
    const double temp = t0 * std::exp(ratio * static_cast<double>(sweep));
    // Beyond 40 temperatures the acceptance probability is below 1e-17.
    const double window = escape + 40.0 * temp;
    accepted.clear();
    for (int i = 0; i < n; ++i) {
      if (delta[i] >= window) continue;
      const double d = (delta[i] - escape) / temp;
      if (d <= 0.0) {
        accepted.push_back(i);
        continue;
      }
      // Metropolis test; 1 - d <= exp(-d) <= 1 / (1 + d) settles most draws
      // without evaluating the exponential.
      const double u = rng.uniform01();
      if (u < 1.0 - d || (u * (1.0 + d) < 1.0 && u < std::exp(-d))) accepted.push_back(i);
    }
    if (accepted.empty()) {
      escape += offset_step;
      continue;
    }
    escape = 0.0;
    const int i = accepted.size() == 1
                      ? accepted.front()
                      : accepted[rng.uniform_int(0, static_cast<std::int64_t>(accepted.size()) - 1)];
    e += delta[i];
    const double sign = x[i] ? -1.0 : 1.0;
    x[i] ^= 1;
    delta[i] = -delta[i];
    for (std::int64_t k = c.row[i]; k < c.row[i + 1]; ++k) {
      const int j = c.col[k];
      delta[j] += x[j] ? -sign * c.weight[k] : sign * c.weight[k];
    }
    if (e < out.best_energy) {
      out.best_energy = e;
      out.best = x;
      out.trace.push_back({stamp(sweep + 1), e});
    }
  }
  out.sweeps = sweep;
  return out;
}

}  // namespace

std::uint64_t replica_seed(std::uint64_t seed, int replica) {
  return derive_seed(seed, {static_cast<std::uint64_t>(replica)});
}

AnnealResult anneal(const QuboProblem& problem, const AnnealConfig& config) {
  if (config.steps < 1) throw std::invalid_argument("anneal: steps must be positive");
  if (config.replicas < 1) throw std::invalid_argument("anneal: replicas must be positive");
  if (!(config.t_final > 0.0)) throw std::invalid_argument("anneal: final temperature must be positive");

  const Clock::time_point start = Clock::now();
  const Couplings c = make_couplings(problem);
  const double t0 = config.t_initial.value_or(std::max(c.max_abs, config.t_final * 2.0));
  if (!(t0 > config.t_final)) {
    throw std::invalid_argument("anneal: initial temperature must exceed the final one");
  }
  const double step = config.offset_increase.value_or(config.t_final);
  if (step < 0.0) throw std::invalid_argument("anneal: offset increase must be nonnegative");

  std::vector<ReplicaOutcome> outcomes(config.replicas);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int r = next++; r < config.replicas; r = next++) {
      outcomes[r] = run_replica(c, problem.offset(), config, t0, config.t_final, step,
                                replica_seed(config.seed, config.first_replica + r), start);
    }
  };
  int threads = config.threads > 0 ? config.threads
                                   : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, config.replicas);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  AnnealResult result;
  result.best_replica = 0;
  for (int r = 0; r < config.replicas; ++r) {
    result.replica_energies.push_back(outcomes[r].best_energy);
    result.sweeps += outcomes[r].sweeps;
    if (outcomes[r].best_energy < outcomes[result.best_replica].best_energy) result.best_replica = r;
  }
  result.best = outcomes[result.best_replica].best;
  result.best_energy = outcomes[result.best_replica].best_energy;

  // Merge the replica traces into one best-so-far trace.
  struct Stamped {
    double seconds;
    int replica;
    double energy;
  };
  std::vector<Stamped> points;
  for (int r = 0; r < config.replicas; ++r) {
    for (const TracePoint& p : outcomes[r].trace) points.push_back({p.seconds, r, p.energy});
  }
  std::sort(points.begin(), points.end(), [](const Stamped& a, const Stamped& b) {
    return std::tie(a.seconds, a.replica) < std::tie(b.seconds, b.replica);
  });
  for (const Stamped& p : points) {
    if (result.trace.empty() || p.energy < result.trace.back().energy) {
      result.trace.push_back({p.seconds, p.energy});
    }
  }
  return result;
}

std::int64_t steps_budget(std::int64_t n) {
  if (n <= 4096) return 10'000'000;
  if (n <= 6000) return 50'000'000;
  return 100'000'000;
}

double time_budget_leap(std::int64_t n) { return std::min(100.0, 1.5 * static_cast<double>(n) / 100.0); }

double time_budget_hybrid(std::int64_t n) { return 0.0117 * static_cast<double>(n); }

}  // namespace trsp
