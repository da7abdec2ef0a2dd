#ifndef TRSP_INSTANCE_HPP
#define TRSP_INSTANCE_HPP

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace trsp {

// Processing stations. Numbering matches the usual M1/M2/M3 naming.
enum class Machine : int { kMixer = 1, kShaker = 2, kBooth = 3 };

inline constexpr std::array<Machine, 3> kMachines = {
    Machine::kMixer, Machine::kShaker, Machine::kBooth};

inline constexpr int machine_index(Machine m) { return static_cast<int>(m) - 1; }

// One violated instance invariant.
struct ParameterIssue {
  std::string name;
  long long value = 0;
  std::string reason;
};

class InvalidInstance : public std::invalid_argument {
 public:
  explicit InvalidInstance(std::vector<ParameterIssue> issues);
  const std::vector<ParameterIssue>& issues() const { return issues_; }

 private:
  std::vector<ParameterIssue> issues_;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& reason);
  int line() const { return line_; }

 private:
  int line_;
};

// Unchecked instance parameters, as read from a file or produced by the
// generator. Samples are indexed from 0.
struct InstanceParams {
  std::string id;
  int num_photos = 0;
  std::vector<std::array<int, 3>> proc_times;  // (mixer, shaker, booth)
  std::vector<std::vector<int>> photo_gaps;    // K-1 entries per sample
};

// Every violated invariant of `params`; empty when valid.
std::vector<ParameterIssue> validate_parameters(const InstanceParams& params);

// A checked, immutable problem instance.
class Instance {
 public:
  // Throws InvalidInstance listing every violated invariant.
  static Instance create(InstanceParams params);

  const std::string& id() const { return params_.id; }
  int num_samples() const { return static_cast<int>(params_.proc_times.size()); }
  int num_photos() const { return params_.num_photos; }

  int proc(int sample, Machine m) const {
    return params_.proc_times[sample][machine_index(m)];
  }
  int booth_time() const { return params_.proc_times.front()[2]; }
  std::span<const int> gaps(int sample) const { return params_.photo_gaps[sample]; }
  int gap_sum(int sample) const;

  // Start offset of photo `k` (0-based) relative to the first photo start.
  int photo_offset(int sample, int k) const;

  // Shortest rack-to-rack duration of one sample with no waiting:
  // four carries, both processing steps, K photos and the gaps between them.
  int chain_length(int sample) const;

  // Completion time minus shaker start; constant once the shaker start is
  // fixed because the photo timing is rigid.
  int completion_after_shaker(int sample) const;

  const InstanceParams& params() const { return params_; }

  friend bool operator==(const Instance&, const Instance&);

 private:
  explicit Instance(InstanceParams params) : params_(std::move(params)) {}
  InstanceParams params_;
};

bool operator==(const Instance& a, const Instance& b);

// Time horizon T: sum over samples of chain_length + (K-1) slack units.
int time_horizon(const Instance& instance);

// Number of binary start variables of the QUBO model: 3 N (T-1).
std::int64_t qubo_variable_count(const Instance& instance);

// Instance text format ("trsp v1").
Instance read_instance(std::string_view text);
std::string write_instance(const Instance& instance);
Instance load_instance(const std::string& path);
void save_instance(const Instance& instance, const std::string& path);

// ---------------------------------------------------------------------------
// Generator

struct Range {
  int lo = 1;
  int hi = 1;
};

struct GeneratorRanges {
  Range mixer{1, 8};
  Range shaker{1, 4};
  Range booth{1, 3};
  // Ranges of the gaps g_1, g_2, ...; when K-1 exceeds the list, the last
  // range is extended by doubling its upper bound.
  std::vector<Range> gaps{{2, 5}, {2, 12}, {2, 24}};

  Range gap_range(int k) const;
};

class InvalidRange : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Group {
  int num_samples = 1;
  int num_photos = 1;
  friend auto operator<=>(const Group&, const Group&) = default;
};

// Pure function of its arguments. The id is "(N,K,p3)(index)".
Instance generate_instance(Group group, std::uint64_t seed,
                           const GeneratorRanges& ranges = {}, int index = 1);

struct LibraryGroup {
  Group group;
  int count = 1;
};

struct LibraryConfig {
  std::uint64_t seed = 1;
  std::vector<LibraryGroup> groups;
  GeneratorRanges ranges;
  std::int64_t split_threshold = 8192;
};

struct Library {
  std::vector<Instance> minor;
  std::vector<Instance> major;
};

// Instances with at most split_threshold QUBO variables are minor.
Library generate_library(const LibraryConfig& config);

LibraryConfig parse_library_config(std::string_view json_text);

}  // namespace trsp

#endif  // TRSP_INSTANCE_HPP
