#include "trsp/exact.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <unordered_map>

namespace trsp {

namespace {

SampleStarts chain_from(const Instance& instance, int j, int mixer_start, int shaker_start) {
  SampleStarts s;
  s.mixer = mixer_start;
  s.shaker = shaker_start;
  const int first_photo = shaker_start + instance.proc(j, Machine::kShaker) + 1;
  for (int k = 0; k < instance.num_photos(); ++k) {
    s.photos.push_back(first_photo + instance.photo_offset(j, k));
  }
  return s;
}

// A robot commitment on one slot. start/end flags say whether the carry
// begins or ends at a machine; a mixer exit with undecided destination has
// end_machine = false.
struct Entry {
  int sample = -1;
  Location from = Location::kRack;
  Location to = Location::kRack;
  bool start_machine = false;
  bool end_machine = false;
  bool mixer_exit = false;
};

bool compatible(const Entry& first, const Entry& second) {
  return !first.end_machine && !second.start_machine;
}

class Search {
 public:
  Search(const Instance& instance, const SearchLimits& limits)
      : inst_(instance),
        limits_(limits),
        n_(instance.num_samples()),
        stage_(n_, Stage::kWaiting),
        mixer_start_(n_, 0),
        shaker_start_(n_, 0),
        start_time_(std::chrono::steady_clock::now()) {
    completion_offset_.resize(n_);
    for (int j = 0; j < n_; ++j) completion_offset_[j] = instance.completion_after_shaker(j);
    order_.resize(n_);
    std::iota(order_.begin(), order_.end(), 0);
    std::stable_sort(order_.begin(), order_.end(), [&](int a, int b) {
      return instance.chain_length(a) < instance.chain_length(b);
    });
  }

  void run(long long incumbent, std::vector<SampleStarts> incumbent_starts) {
    best_ = incumbent;
    best_starts_ = std::move(incumbent_starts);
    dfs(0, Location::kRack, false, 0);
  }

  long long best() const { return best_; }
  const std::vector<SampleStarts>& best_starts() const { return best_starts_; }
  bool exhausted() const { return exhausted_; }
  std::int64_t nodes() const { return nodes_; }

 private:
  enum class Stage { kWaiting, kMixing, kBuffered, kCommitted };

  int mixer_end(int j) const { return mixer_start_[j] + inst_.proc(j, Machine::kMixer); }
  int shaker_end(int j) const { return shaker_start_[j] + inst_.proc(j, Machine::kShaker); }
  int completion(int j) const { return shaker_start_[j] + completion_offset_[j]; }

  // Commitments of sample j at or after time t.
  void entries_of(int j, std::map<int, Entry>& cal, int t) const {
    auto put = [&](int slot, Entry e) {
      if (slot >= t) cal.emplace(slot, e);
    };
    if (stage_[j] == Stage::kMixing) {
      put(mixer_end(j), {j, Location::kMixer, Location::kRack, true, false, true});
    } else if (stage_[j] == Stage::kCommitted) {
      for (auto& [slot, e] : chain_entries(j, shaker_start_[j])) put(slot, e);
    }
  }

  std::vector<std::pair<int, Entry>> chain_entries(int j, int shaker_start) const {
    std::vector<std::pair<int, Entry>> out;
    const int p3 = inst_.booth_time();
    const int first_photo = shaker_start + inst_.proc(j, Machine::kShaker) + 1;
    out.push_back({first_photo - 1, {j, Location::kShaker, Location::kBooth, true, true, false}});
    for (int k = 0; k < inst_.num_photos(); ++k) {
      const int u = first_photo + inst_.photo_offset(j, k);
      out.push_back({u + p3, {j, Location::kBooth, Location::kRack, true, false, false}});
      if (k + 1 < inst_.num_photos()) {
        const int next = first_photo + inst_.photo_offset(j, k + 1);
        out.push_back({next - 1, {j, Location::kRack, Location::kBooth, false, true, false}});
      }
    }
    return out;
  }

  std::map<int, Entry> calendar(int t) const {
    std::map<int, Entry> cal;
    for (int j = 0; j < n_; ++j) entries_of(j, cal, t);
    return cal;
  }

  static const Entry* at(const std::map<int, Entry>& cal, int slot) {
    auto it = cal.find(slot);
    return it == cal.end() ? nullptr : &it->second;
  }

  bool insertable(const std::map<int, Entry>& cal,
                  const std::vector<std::pair<int, Entry>>& fresh) const {
    std::map<int, Entry> merged = cal;
    for (const auto& [slot, e] : fresh) {
      if (!merged.emplace(slot, e).second) return false;
    }
    for (const auto& [slot, e] : fresh) {
      if (const Entry* prev = at(merged, slot - 1); prev && !compatible(*prev, e)) return false;
      if (const Entry* next = at(merged, slot + 1); next && !compatible(e, *next)) return false;
    }
    return true;
  }

  // Can sample j start on the shaker at t + 1, arriving with the carry in
  // slot t? `first` is that carry.
  bool shaker_commit_ok(int j, int t, const std::map<int, Entry>& cal, const Entry& first) const {
    const int s2 = t + 1;
    const int e2 = s2 + inst_.proc(j, Machine::kShaker);
    const int p3 = inst_.booth_time();
    for (int c = 0; c < n_; ++c) {
      if (c == j || stage_[c] != Stage::kCommitted) continue;
      if (shaker_start_[c] < e2 && s2 < shaker_end(c)) return false;
      const int c_first = shaker_end(c) + 1;
      for (int a = 0; a < inst_.num_photos(); ++a) {
        const int uc = c_first + inst_.photo_offset(c, a);
        for (int b = 0; b < inst_.num_photos(); ++b) {
          const int u = e2 + 1 + inst_.photo_offset(j, b);
          if (uc < u + p3 && u < uc + p3) return false;
        }
      }
    }
    auto fresh = chain_entries(j, s2);
    fresh.push_back({t, first});
    return insertable(cal, fresh);
  }

  long long lower_bound(int t, long long cost) const {
    long long lb = cost;
    for (int j = 0; j < n_; ++j) {
      switch (stage_[j]) {
        case Stage::kWaiting: lb += t + inst_.chain_length(j); break;
        case Stage::kMixing: lb += mixer_end(j) + 1 + completion_offset_[j]; break;
        case Stage::kBuffered: lb += t + 1 + completion_offset_[j]; break;
        case Stage::kCommitted: break;
      }
    }
    return lb;
  }

  std::string state_key(int t, Location robot, bool locked) const {
    std::string key;
    key.reserve(16 + 8 * n_);
    auto put = [&key](int v) { key.append(reinterpret_cast<const char*>(&v), sizeof v); };
    put(t);
    put(static_cast<int>(robot) * 2 + (locked ? 1 : 0));
    for (int j = 0; j < n_; ++j) {
      switch (stage_[j]) {
        case Stage::kWaiting: put(-1); break;
        case Stage::kBuffered: put(-2); break;
        case Stage::kMixing: put(mixer_start_[j]); put(0); break;
        case Stage::kCommitted: put(completion(j) <= t ? -3 : shaker_start_[j]); put(1); break;
      }
    }
    return key;
  }

  bool out_of_budget() {
    if (exhausted_) return true;
    if (nodes_ >= limits_.max_nodes) exhausted_ = true;
    if ((nodes_ & 1023) == 0) {
      const double elapsed = std::chrono::duration<double>(
                                 std::chrono::steady_clock::now() - start_time_)
                                 .count();
      if (elapsed > limits_.max_seconds) exhausted_ = true;
    }
    return exhausted_;
  }

  void record_leaf(long long cost) {
    if (cost >= best_) return;
    best_ = cost;
    best_starts_.assign(n_, {});
    for (int j = 0; j < n_; ++j) {
      best_starts_[j] = chain_from(inst_, j, mixer_start_[j], shaker_start_[j]);
    }
  }

  void dfs(int t, Location robot, bool locked, long long cost) {
    ++nodes_;
    if (out_of_budget()) return;
    if (std::all_of(stage_.begin(), stage_.end(),
                    [](Stage s) { return s == Stage::kCommitted; })) {
      record_leaf(cost);
      return;
    }
    if (lower_bound(t, cost) >= best_) return;
    {
      std::string key = state_key(t, robot, locked);
      auto it = seen_.find(key);
      if (it != seen_.end()) {
        if (it->second <= cost) return;
        it->second = cost;
      } else if (seen_.size() < kMaxMemo) {
        seen_.emplace(std::move(key), cost);
      }
    }

    const auto cal = calendar(t);
    const Entry* forced = at(cal, t);
    const Entry* next = at(cal, t + 1);

    if (forced) {
      if (robot != forced->from || (locked && forced->start_machine)) return;
      const int j = forced->sample;
      if (forced->mixer_exit) {
        // Direct transfer to the shaker.
        Entry direct{j, Location::kMixer, Location::kShaker, true, true, false};
        auto without = cal;
        without.erase(t);
        if (!next && shaker_commit_ok(j, t, without, direct)) {
          stage_[j] = Stage::kCommitted;
          shaker_start_[j] = t + 1;
          dfs(t + 1, Location::kShaker, true, cost + completion(j));
          stage_[j] = Stage::kMixing;
        }
        // Buffer at the rack.
        if (!next || next->from == Location::kRack) {
          stage_[j] = Stage::kBuffered;
          dfs(t + 1, Location::kRack, false, cost);
          stage_[j] = Stage::kMixing;
        }
        return;
      }
      if (next && (forced->to != next->from || !compatible(*forced, *next))) return;
      dfs(t + 1, forced->to, forced->end_machine, cost);
      return;
    }

    if (next) {
      dfs(t + 1, next->from, false, cost);
      return;
    }

    if (robot != Location::kRack) {
      dfs(t + 1, Location::kRack, false, cost);
      return;
    }

    // Robot at the rack with a free next slot.
    for (int j = 0; j < n_; ++j) {
      if (stage_[j] != Stage::kBuffered) continue;
      Entry carry{j, Location::kRack, Location::kShaker, false, true, false};
      if (!shaker_commit_ok(j, t, cal, carry)) continue;
      stage_[j] = Stage::kCommitted;
      shaker_start_[j] = t + 1;
      dfs(t + 1, Location::kShaker, true, cost + completion(j));
      stage_[j] = Stage::kBuffered;
    }
    const bool mixer_busy = std::any_of(stage_.begin(), stage_.end(),
                                        [](Stage s) { return s == Stage::kMixing; });
    if (!mixer_busy) {
      for (int j : order_) {
        if (stage_[j] != Stage::kWaiting) continue;
        const int exit_slot = t + 1 + inst_.proc(j, Machine::kMixer);
        std::vector<std::pair<int, Entry>> fresh = {
            {t, {j, Location::kRack, Location::kMixer, false, true, false}},
            {exit_slot, {j, Location::kMixer, Location::kRack, true, false, true}}};
        if (at(cal, exit_slot - 1) || !insertable(cal, fresh)) continue;
        stage_[j] = Stage::kMixing;
        mixer_start_[j] = t + 1;
        dfs(t + 1, Location::kMixer, true, cost);
        stage_[j] = Stage::kWaiting;
      }
    }
    dfs(t + 1, Location::kRack, false, cost);
  }

  static constexpr std::size_t kMaxMemo = 4'000'000;

  const Instance& inst_;
  SearchLimits limits_;
  int n_;
  std::vector<Stage> stage_;
  std::vector<int> mixer_start_;
  std::vector<int> shaker_start_;
  std::vector<int> completion_offset_;
  std::vector<int> order_;
  std::unordered_map<std::string, long long> seen_;
  long long best_ = std::numeric_limits<long long>::max();
  std::vector<SampleStarts> best_starts_;
  std::int64_t nodes_ = 0;
  bool exhausted_ = false;
  std::chrono::steady_clock::time_point start_time_;
};

}  // namespace

Schedule sequential_schedule(const Instance& instance) {
  std::vector<SampleStarts> starts;
  int now = 0;
  for (int j = 0; j < instance.num_samples(); ++j) {
    const int mixer = now + 1;
    const int shaker = mixer + instance.proc(j, Machine::kMixer) + 1;
    starts.push_back(chain_from(instance, j, mixer, shaker));
    now = shaker + instance.completion_after_shaker(j);
  }
  SimulationResult result = realize(instance, starts);
  if (!result.feasible()) {
    throw std::logic_error("sequential schedule rejected: " +
                           describe(result.violations.front()));
  }
  return std::move(*result.schedule);
}

long long root_lower_bound(const Instance& instance) {
  long long lb = 0;
  for (int j = 0; j < instance.num_samples(); ++j) lb += instance.chain_length(j);
  return lb;
}

OracleResult branch_and_bound(const Instance& instance, const SearchLimits& limits) {
  Schedule seq = sequential_schedule(instance);
  const long long seq_objective = objective(seq);
  long long cutoff = seq_objective;
  std::vector<SampleStarts> seed_starts = starts_of(seq, instance.num_samples());
  bool have_incumbent = true;
  if (limits.incumbent_cutoff && *limits.incumbent_cutoff < cutoff) {
    cutoff = *limits.incumbent_cutoff;
    have_incumbent = false;
  }

  Search search(instance, limits);
  search.run(cutoff, seed_starts);

  OracleResult result;
  result.nodes = search.nodes();
  result.proven_optimal = !search.exhausted();
  if (search.best() < cutoff || have_incumbent) {
    SimulationResult sim = realize(instance, search.best() < cutoff ? search.best_starts() : seed_starts);
    if (!sim.feasible()) {
      throw std::logic_error("branch_and_bound produced an infeasible schedule: " +
                             describe(sim.violations.front()));
    }
    result.schedule = std::move(*sim.schedule);
    result.objective = objective(result.schedule);
  } else {
    // Nothing below the external cutoff exists (or was found).
    result.schedule = std::move(seq);
    result.objective = seq_objective;
  }
  return result;
}

void for_each_feasible(const Instance& instance, int horizon,
                       const std::function<void(const EnumeratedSchedule&)>& visit,
                       std::int64_t max_candidates) {
  const int n = instance.num_samples();
  struct Option {
    int mixer;
    int shaker;
  };
  std::vector<std::vector<Option>> options(n);
  double candidates = 1.0;
  for (int j = 0; j < n; ++j) {
    const int p1 = instance.proc(j, Machine::kMixer);
    const int tail = instance.completion_after_shaker(j);
    for (int s1 = 1; s1 + p1 + 1 + tail <= horizon; ++s1) {
      for (int s2 = s1 + p1 + 1; s2 + tail <= horizon; ++s2) {
        options[j].push_back({s1, s2});
      }
    }
    candidates *= static_cast<double>(options[j].size());
  }
  if (candidates > static_cast<double>(max_candidates)) {
    throw TooLarge("enumeration would visit " + std::to_string(candidates) + " candidates");
  }
  if (std::any_of(options.begin(), options.end(), [](const auto& o) { return o.empty(); })) {
    return;
  }

  // Busy intervals of each chosen sample, used to skip obviously clashing
  // combinations before the full simulation.
  struct Busy {
    int machine;
    int start;
    int end;
  };
  std::vector<SampleStarts> chosen(n);
  std::vector<std::vector<Busy>> busy(n);
  std::vector<std::vector<int>> slots(n);

  auto describe_sample = [&](int j, const Option& o) {
    chosen[j] = chain_from(instance, j, o.mixer, o.shaker);
    busy[j].clear();
    slots[j].clear();
    const SampleStarts& s = chosen[j];
    busy[j].push_back({0, s.mixer, s.mixer + instance.proc(j, Machine::kMixer)});
    busy[j].push_back({1, s.shaker, s.shaker + instance.proc(j, Machine::kShaker)});
    for (int u : s.photos) busy[j].push_back({2, u, u + instance.booth_time()});
    slots[j].push_back(s.mixer - 1);
    slots[j].push_back(s.mixer + instance.proc(j, Machine::kMixer));
    slots[j].push_back(s.shaker - 1);
    slots[j].push_back(s.shaker + instance.proc(j, Machine::kShaker));
    for (int u : s.photos) slots[j].push_back(u + instance.booth_time());
    for (std::size_t k = 1; k < s.photos.size(); ++k) slots[j].push_back(s.photos[k] - 1);
  };
  auto clashes = [&](int j) {
    for (int i = 0; i < j; ++i) {
      for (const Busy& a : busy[i]) {
        for (const Busy& b : busy[j]) {
          if (a.machine == b.machine && a.start < b.end && b.start < a.end) return true;
        }
      }
      for (int a : slots[i]) {
        for (int b : slots[j]) {
          if (a == b) return true;
        }
      }
    }
    return false;
  };

  std::function<void(int)> recurse = [&](int j) {
    if (j == n) {
      SimulationResult sim = realize(instance, chosen, horizon);
      if (sim.feasible()) {
        EnumeratedSchedule item{std::move(*sim.schedule), 0};
        item.objective = objective(item.schedule);
        visit(item);
      }
      return;
    }
    for (const Option& o : options[j]) {
      describe_sample(j, o);
      if (clashes(j)) continue;
      recurse(j + 1);
    }
  };
  recurse(0);
}

std::vector<EnumeratedSchedule> enumerate_all(const Instance& instance, int horizon,
                                              std::int64_t max_candidates) {
  std::vector<EnumeratedSchedule> out;
  for_each_feasible(
      instance, horizon, [&](const EnumeratedSchedule& s) { out.push_back(s); },
      max_candidates);
  return out;
}

}  // namespace trsp
