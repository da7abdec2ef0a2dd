#include "trsp/instance.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <limits>
#include <tuple>
#include <fstream>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "trsp/random.hpp"

namespace trsp {

namespace {

std::string join_issues(const std::vector<ParameterIssue>& issues) {
  std::string msg = "invalid instance:";
  for (const auto& issue : issues) {
    msg += " " + issue.name + "=" + std::to_string(issue.value) + " (" +
           issue.reason + ");";
  }
  return msg;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<long long> parse_ints(std::string_view line, int line_no) {
  std::vector<long long> out;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) {
      ++pos;
    }
    if (pos >= line.size()) break;
    std::size_t end = pos;
    while (end < line.size() && !std::isspace(static_cast<unsigned char>(line[end]))) {
      ++end;
    }
    long long value = 0;
    const auto* first = line.data() + pos;
    const auto* last = line.data() + end;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
      throw ParseError(line_no, "expected an integer, got '" +
                                    std::string(line.substr(pos, end - pos)) + "'");
    }
    out.push_back(value);
    pos = end;
  }
  return out;
}

int checked_int(long long v, int line_no) {
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    throw ParseError(line_no, "integer out of range");
  }
  return static_cast<int>(v);
}

}  // namespace

InvalidInstance::InvalidInstance(std::vector<ParameterIssue> issues)
    : std::invalid_argument(join_issues(issues)), issues_(std::move(issues)) {}

ParseError::ParseError(int line, const std::string& reason)
    : std::runtime_error("line " + std::to_string(line) + ": " + reason), line_(line) {}

std::vector<ParameterIssue> validate_parameters(const InstanceParams& params) {
  std::vector<ParameterIssue> issues;
  const auto n = static_cast<long long>(params.proc_times.size());
  if (n < 1) issues.push_back({"N", n, "must be >= 1"});
  if (params.num_photos < 1) issues.push_back({"K", params.num_photos, "must be >= 1"});
  if (params.photo_gaps.size() != params.proc_times.size()) {
    issues.push_back({"g", static_cast<long long>(params.photo_gaps.size()),
                      "need one gap vector per sample"});
  }
  for (std::size_t j = 0; j < params.proc_times.size(); ++j) {
    for (int m = 0; m < 3; ++m) {
      if (params.proc_times[j][m] < 1) {
        issues.push_back({"p", params.proc_times[j][m], "must be >= 1"});
      }
    }
    if (params.proc_times[j][2] != params.proc_times.front()[2]) {
      issues.push_back({"p3", params.proc_times[j][2],
                        "booth time must agree for all samples"});
    }
  }
  for (const auto& gaps : params.photo_gaps) {
    if (params.num_photos >= 1 &&
        static_cast<long long>(gaps.size()) != params.num_photos - 1) {
      issues.push_back({"g", static_cast<long long>(gaps.size()),
                        "need exactly K-1 gaps per sample"});
    }
    for (int g : gaps) {
      if (g < 2) issues.push_back({"g", g, "must be >= 2"});
    }
  }
  return issues;
}

Instance Instance::create(InstanceParams params) {
  auto issues = validate_parameters(params);
  if (!issues.empty()) throw InvalidInstance(std::move(issues));
  if (params.id.empty()) {
    params.id = "(" + std::to_string(params.proc_times.size()) + "," +
                std::to_string(params.num_photos) + "," +
                std::to_string(params.proc_times.front()[2]) + ")(1)";
  }
  return Instance(std::move(params));
}

int Instance::gap_sum(int sample) const {
  const auto g = gaps(sample);
  return std::accumulate(g.begin(), g.end(), 0);
}

int Instance::photo_offset(int sample, int k) const {
  int offset = 0;
  const auto g = gaps(sample);
  for (int i = 0; i < k; ++i) offset += booth_time() + g[i];
  return offset;
}

int Instance::chain_length(int sample) const {
  return 4 + proc(sample, Machine::kMixer) + proc(sample, Machine::kShaker) +
         num_photos() * booth_time() + gap_sum(sample);
}

int Instance::completion_after_shaker(int sample) const {
  return proc(sample, Machine::kShaker) + 2 + num_photos() * booth_time() +
         gap_sum(sample);
}

bool operator==(const Instance& a, const Instance& b) {
  return a.params_.id == b.params_.id && a.params_.num_photos == b.params_.num_photos &&
         a.params_.proc_times == b.params_.proc_times &&
         a.params_.photo_gaps == b.params_.photo_gaps;
}

int time_horizon(const Instance& instance) {
  int total = 0;
  for (int j = 0; j < instance.num_samples(); ++j) {
    total += instance.chain_length(j) + instance.num_photos() - 1;
  }
  return total;
}

std::int64_t qubo_variable_count(const Instance& instance) {
  return 3LL * instance.num_samples() * (time_horizon(instance) - 1);
}

// Format: "trsp v1", "N K", N lines "p1 p2 p3", N lines of K-1 gaps (empty
// when K = 1). '#' starts a comment; "# id: <id>" carries the instance id.
// Blank lines are ignored, so trailing blank lines are accepted.
Instance read_instance(std::string_view text) {
  struct Line {
    int number;
    std::string_view body;
  };
  std::vector<Line> lines;
  std::string id;
  int number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(pos, end - pos);
    ++number;
    if (auto hash = raw.find('#'); hash != std::string_view::npos) {
      std::string_view comment = trim(raw.substr(hash + 1));
      if (comment.starts_with("id:")) id = std::string(trim(comment.substr(3)));
      raw = raw.substr(0, hash);
    }
    raw = trim(raw);
    if (!raw.empty()) lines.push_back({number, raw});
    if (end == text.size()) break;
    pos = end + 1;
  }

  std::size_t cursor = 0;
  auto next = [&](const char* what) -> const Line& {
    if (cursor >= lines.size()) {
      throw ParseError(number, std::string("unexpected end of input, expected ") + what);
    }
    return lines[cursor++];
  };

  const Line& header = next("header");
  if (header.body != "trsp v1") {
    throw ParseError(header.number, "expected header 'trsp v1'");
  }
  const Line& sizes = next("'N K'");
  auto nk = parse_ints(sizes.body, sizes.number);
  if (nk.size() != 2) throw ParseError(sizes.number, "expected 'N K'");
  if (nk[0] < 1 || nk[0] > 100000) throw ParseError(sizes.number, "N out of range");
  if (nk[1] < 1 || nk[1] > 100000) throw ParseError(sizes.number, "K out of range");
  const int n = static_cast<int>(nk[0]);
  const int k = static_cast<int>(nk[1]);

  InstanceParams params;
  params.id = id;
  params.num_photos = k;
  for (int j = 0; j < n; ++j) {
    const Line& line = next("processing times");
    auto p = parse_ints(line.body, line.number);
    if (p.size() != 3) throw ParseError(line.number, "expected 'p1 p2 p3'");
    params.proc_times.push_back({checked_int(p[0], line.number),
                                 checked_int(p[1], line.number),
                                 checked_int(p[2], line.number)});
  }
  for (int j = 0; j < n; ++j) {
    if (k == 1) {
      params.photo_gaps.emplace_back();
      continue;
    }
    const Line& line = next("photo gaps");
    auto g = parse_ints(line.body, line.number);
    if (static_cast<int>(g.size()) != k - 1) {
      throw ParseError(line.number, "expected " + std::to_string(k - 1) + " gap values");
    }
    std::vector<int> gaps;
    for (auto v : g) gaps.push_back(checked_int(v, line.number));
    params.photo_gaps.push_back(std::move(gaps));
  }
  if (cursor != lines.size()) {
    throw ParseError(lines[cursor].number, "unexpected trailing content");
  }
  return Instance::create(std::move(params));
}

std::string write_instance(const Instance& instance) {
  std::ostringstream out;
  out << "trsp v1\n";
  out << "# id: " << instance.id() << "\n";
  out << instance.num_samples() << " " << instance.num_photos() << "\n";
  for (const auto& p : instance.params().proc_times) {
    out << p[0] << " " << p[1] << " " << p[2] << "\n";
  }
  for (const auto& gaps : instance.params().photo_gaps) {
    for (std::size_t i = 0; i < gaps.size(); ++i) {
      out << (i ? " " : "") << gaps[i];
    }
    out << "\n";
  }
  return out.str();
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open instance file " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return read_instance(buffer.str());
}

void save_instance(const Instance& instance, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write instance file " + path);
  out << write_instance(instance);
}

Range GeneratorRanges::gap_range(int k) const {
  if (gaps.empty()) return {2, 2};
  if (k < static_cast<int>(gaps.size())) return gaps[k];
  Range range = gaps.back();
  for (int i = static_cast<int>(gaps.size()) - 1; i < k; ++i) {
    range.hi = std::min(range.hi * 2, std::numeric_limits<int>::max() / 4);
  }
  return range;
}

Instance generate_instance(Group group, std::uint64_t seed,
                           const GeneratorRanges& ranges, int index) {
  if (group.num_samples < 1 || group.num_photos < 1) {
    throw InvalidRange("group needs N >= 1 and K >= 1");
  }
  auto check = [](const Range& r, const char* name, int floor) {
    if (r.lo > r.hi || r.lo < floor) {
      throw InvalidRange(std::string("empty or illegal range for ") + name);
    }
  };
  check(ranges.mixer, "p1", 1);
  check(ranges.shaker, "p2", 1);
  check(ranges.booth, "p3", 1);
  for (int k = 0; k + 1 < group.num_photos; ++k) {
    check(ranges.gap_range(k), ("g" + std::to_string(k + 1)).c_str(), 2);
  }

  SplitMix64 rng(derive_seed(seed, {static_cast<std::uint64_t>(group.num_samples),
                                    static_cast<std::uint64_t>(group.num_photos)}));
  InstanceParams params;
  params.num_photos = group.num_photos;
  const int booth =
      static_cast<int>(rng.uniform_int(ranges.booth.lo, ranges.booth.hi));
  for (int j = 0; j < group.num_samples; ++j) {
    const int mixer =
        static_cast<int>(rng.uniform_int(ranges.mixer.lo, ranges.mixer.hi));
    const int shaker =
        static_cast<int>(rng.uniform_int(ranges.shaker.lo, ranges.shaker.hi));
    params.proc_times.push_back({mixer, shaker, booth});
    std::vector<int> gaps;
    for (int k = 0; k + 1 < group.num_photos; ++k) {
      const Range r = ranges.gap_range(k);
      gaps.push_back(static_cast<int>(rng.uniform_int(r.lo, r.hi)));
    }
    params.photo_gaps.push_back(std::move(gaps));
  }
  params.id = "(" + std::to_string(group.num_samples) + "," +
              std::to_string(group.num_photos) + "," + std::to_string(booth) + ")(" +
              std::to_string(index) + ")";
  return Instance::create(std::move(params));
}

Library generate_library(const LibraryConfig& config) {
  Library library;
  for (const auto& entry : config.groups) {
    for (int i = 0; i < entry.count; ++i) {
      const std::uint64_t seed = derive_seed(
          config.seed, {static_cast<std::uint64_t>(entry.group.num_samples),
                        static_cast<std::uint64_t>(entry.group.num_photos),
                        static_cast<std::uint64_t>(i)});
      Instance inst = generate_instance(entry.group, seed, config.ranges, i + 1);
      if (qubo_variable_count(inst) <= config.split_threshold) {
        library.minor.push_back(std::move(inst));
      } else {
        library.major.push_back(std::move(inst));
      }
    }
  }
  auto order = [](const Instance& a, const Instance& b) {
    return std::tuple(a.num_samples(), a.num_photos(), a.id()) <
           std::tuple(b.num_samples(), b.num_photos(), b.id());
  };
  std::sort(library.minor.begin(), library.minor.end(), order);
  std::sort(library.major.begin(), library.major.end(), order);
  return library;
}

LibraryConfig parse_library_config(std::string_view json_text) {
  using nlohmann::json;
  LibraryConfig config;
  json doc;
  try {
    doc = json::parse(json_text);
    config.seed = doc.value("seed", std::uint64_t{1});
    config.split_threshold = doc.value("split_threshold", std::int64_t{8192});
    for (const auto& g : doc.at("groups")) {
      LibraryGroup entry;
      entry.group.num_samples = g.at("n").get<int>();
      entry.group.num_photos = g.at("k").get<int>();
      entry.count = g.value("count", 1);
      config.groups.push_back(entry);
    }
    if (doc.contains("ranges")) {
      const auto& r = doc["ranges"];
      auto read_range = [&](const char* key, Range& range) {
        if (r.contains(key)) {
          range.lo = r[key].at(0).get<int>();
          range.hi = r[key].at(1).get<int>();
        }
      };
      read_range("mixer", config.ranges.mixer);
      read_range("shaker", config.ranges.shaker);
      read_range("booth", config.ranges.booth);
      if (r.contains("gaps")) {
        config.ranges.gaps.clear();
        for (const auto& g : r["gaps"]) {
          config.ranges.gaps.push_back({g.at(0).get<int>(), g.at(1).get<int>()});
        }
      }
    }
  } catch (const json::exception& e) {
    throw ParseError(0, std::string("library config: ") + e.what());
  }
  return config;
}

}  // namespace trsp
