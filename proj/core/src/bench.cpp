#include "trsp/bench.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "trsp/stats.hpp"

namespace trsp {

namespace {

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

double parse_double(const std::string& s, int line) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  double x = 0.0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || end != s.data() + s.size()) {
    throw ParseError(line, "bad number '" + s + "'");
  }
  return x;
}

int parse_int(const std::string& s, int line) {
  int x = 0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || end != s.data() + s.size()) {
    throw ParseError(line, "bad integer '" + s + "'");
  }
  return x;
}

std::string field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_line(const std::string& line, int line_no) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  if (quoted) throw ParseError(line_no, "unterminated quote");
  out.push_back(std::move(cur));
  return out;
}

// Data rows of a CSV text after checking the header; '#' lines are comments.
std::vector<std::pair<int, std::vector<std::string>>> rows(std::string_view text,
                                                          std::string_view header) {
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  bool seen_header = false;
  std::vector<std::pair<int, std::vector<std::string>>> out;
  const std::size_t width = split_line(std::string(header), 0).size();
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!seen_header) {
      if (line != header) throw ParseError(line_no, "expected header '" + std::string(header) + "'");
      seen_header = true;
      continue;
    }
    auto cells = split_line(line, line_no);
    if (cells.size() != width) throw ParseError(line_no, "wrong number of columns");
    out.emplace_back(line_no, std::move(cells));
  }
  if (!seen_header) throw ParseError(line_no, "missing header");
  return out;
}

constexpr std::string_view kTraceHeader = "seconds,objective";
constexpr std::string_view kRecordHeader =
    "instance,group_n,group_k,approach,objective,feasible,seconds,trace,error";
constexpr std::string_view kSummaryHeader =
    "group_n,group_k,approach,runs,feasible,objective_median,objective_mean,objective_min,"
    "objective_max,seconds_median,seconds_mean,seconds_min,seconds_max";

}  // namespace

bool is_valid_trace(const SolverTrace& trace) {
  for (std::size_t i = 1; i < trace.size(); ++i) {
    if (!(trace[i].seconds > trace[i - 1].seconds) ||
        trace[i].objective > trace[i - 1].objective) {
      return false;
    }
  }
  return true;
}

double relative_runtime(const SolverTrace& trace, double target, double cap_seconds) {
  if (trace.empty()) throw EmptyTrace();
  if (!(cap_seconds > 0.0)) throw std::invalid_argument("cap_seconds must be positive");
  for (const TraceSample& s : trace) {
    if (s.objective <= target) return std::min(s.seconds, cap_seconds);
  }
  return cap_seconds;
}

std::string write_trace_csv(const SolverTrace& trace) {
  std::string out = std::string(kTraceHeader) + "\n";
  for (const TraceSample& s : trace) out += num(s.seconds) + "," + num(s.objective) + "\n";
  return out;
}

SolverTrace read_trace_csv(std::string_view text) {
  SolverTrace out;
  for (const auto& [line, cells] : rows(text, kTraceHeader)) {
    out.push_back({parse_double(cells[0], line), parse_double(cells[1], line)});
  }
  return out;
}

std::vector<GroupSummary> group_stats(const std::vector<BenchRecord>& records) {
  std::map<std::tuple<Group, std::string>, std::vector<const BenchRecord*>> by_key;
  for (const BenchRecord& r : records) by_key[{r.group, r.approach}].push_back(&r);
  std::vector<GroupSummary> out;
  for (const auto& [key, list] : by_key) {
    GroupSummary s;
    s.group = std::get<0>(key);
    s.approach = std::get<1>(key);
    s.runs = static_cast<int>(list.size());
    std::vector<double> objectives, seconds;
    for (const BenchRecord* r : list) {
      seconds.push_back(r->seconds);
      if (r->feasible) objectives.push_back(r->objective);
    }
    s.feasible = static_cast<int>(objectives.size());
    if (!objectives.empty()) {
      s.objective_median = median(objectives);
      s.objective_mean = mean(objectives);
      s.objective_min = *std::min_element(objectives.begin(), objectives.end());
      s.objective_max = *std::max_element(objectives.begin(), objectives.end());
    }
    s.seconds_median = median(seconds);
    s.seconds_mean = mean(seconds);
    s.seconds_min = *std::min_element(seconds.begin(), seconds.end());
    s.seconds_max = *std::max_element(seconds.begin(), seconds.end());
    out.push_back(std::move(s));
  }
  return out;
}

std::string export_records_csv(const std::vector<BenchRecord>& records, std::string_view clock_note) {
  std::string out;
  if (!clock_note.empty()) out += "# " + std::string(clock_note) + "\n";
  out += std::string(kRecordHeader) + "\n";
  for (const BenchRecord& r : records) {
    out += field(r.instance) + "," + std::to_string(r.group.num_samples) + "," +
           std::to_string(r.group.num_photos) + "," + field(r.approach) + "," + num(r.objective) +
           "," + (r.feasible ? "1" : "0") + "," + num(r.seconds) + "," + field(r.trace_file) + "," +
           field(r.error) + "\n";
  }
  return out;
}

std::vector<BenchRecord> parse_records_csv(std::string_view text) {
  std::vector<BenchRecord> out;
  for (const auto& [line, c] : rows(text, kRecordHeader)) {
    BenchRecord r;
    r.instance = c[0];
    r.group = {parse_int(c[1], line), parse_int(c[2], line)};
    r.approach = c[3];
    r.objective = parse_double(c[4], line);
    if (c[5] != "0" && c[5] != "1") throw ParseError(line, "feasible must be 0 or 1");
    r.feasible = c[5] == "1";
    r.seconds = parse_double(c[6], line);
    r.trace_file = c[7];
    r.error = c[8];
    out.push_back(std::move(r));
  }
  return out;
}

std::string export_summary_csv(const std::vector<GroupSummary>& summaries) {
  std::string out = std::string(kSummaryHeader) + "\n";
  for (const GroupSummary& s : summaries) {
    out += std::to_string(s.group.num_samples) + "," + std::to_string(s.group.num_photos) + "," +
           field(s.approach) + "," + std::to_string(s.runs) + "," + std::to_string(s.feasible) +
           "," + num(s.objective_median) + "," + num(s.objective_mean) + "," +
           num(s.objective_min) + "," + num(s.objective_max) + "," + num(s.seconds_median) + "," +
           num(s.seconds_mean) + "," + num(s.seconds_min) + "," + num(s.seconds_max) + "\n";
  }
  return out;
}

std::vector<GroupSummary> parse_summary_csv(std::string_view text) {
  std::vector<GroupSummary> out;
  for (const auto& [line, c] : rows(text, kSummaryHeader)) {
    GroupSummary s;
    s.group = {parse_int(c[0], line), parse_int(c[1], line)};
    s.approach = c[2];
    s.runs = parse_int(c[3], line);
    s.feasible = parse_int(c[4], line);
    s.objective_median = parse_double(c[5], line);
    s.objective_mean = parse_double(c[6], line);
    s.objective_min = parse_double(c[7], line);
    s.objective_max = parse_double(c[8], line);
    s.seconds_median = parse_double(c[9], line);
    s.seconds_mean = parse_double(c[10], line);
    s.seconds_min = parse_double(c[11], line);
    s.seconds_max = parse_double(c[12], line);
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<Comparison> compare_approaches(const std::vector<BenchRecord>& records) {
  std::set<std::string> approaches;
  std::map<std::pair<std::string, std::string>, double> objective;  // (approach, instance)
  for (const BenchRecord& r : records) {
    approaches.insert(r.approach);
    if (r.feasible) objective[{r.approach, r.instance}] = r.objective;
  }
  std::set<std::string> instances;
  for (const BenchRecord& r : records) instances.insert(r.instance);

  std::vector<Comparison> out;
  for (auto a = approaches.begin(); a != approaches.end(); ++a) {
    for (auto b = std::next(a); b != approaches.end(); ++b) {
      std::vector<double> xs, ys;
      for (const std::string& id : instances) {
        auto x = objective.find({*a, id});
        auto y = objective.find({*b, id});
        if (x != objective.end() && y != objective.end()) {
          xs.push_back(x->second);
          ys.push_back(y->second);
        }
      }
      Comparison c;
      c.first = *a;
      c.second = *b;
      c.pairs = static_cast<int>(xs.size());
      if (xs.empty()) {
        c.p = std::numeric_limits<double>::quiet_NaN();
        c.significance = "no common feasible instances";
      } else {
        c.mean_first = mean(xs);
        c.mean_second = mean(ys);
        try {
          const WelchResult w = welch_t_test(xs, ys);
          c.t = w.t;
          c.dof = w.dof;
          c.p = w.p;
          c.significance = significance_phrase(w.p);
        } catch (const DegenerateSample&) {
          c.p = std::numeric_limits<double>::quiet_NaN();
          c.significance = "degenerate";
        }
      }
      out.push_back(std::move(c));
    }
  }
  return out;
}

std::string export_comparisons_csv(const std::vector<Comparison>& comparisons) {
  std::string out = "first,second,pairs,mean_first,mean_second,t,dof,p_one_sided,significance\n";
  for (const Comparison& c : comparisons) {
    out += field(c.first) + "," + field(c.second) + "," + std::to_string(c.pairs) + "," +
           num(c.mean_first) + "," + num(c.mean_second) + "," + num(c.t) + "," + num(c.dof) + "," +
           num(c.p) + "," + field(c.significance) + "\n";
  }
  return out;
}

std::string file_stem(std::string_view id) {
  std::string out;
  for (char c : id) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      out += c;
    } else if (!out.empty() && out.back() != '_') {
      out += '_';
    }
  }
  while (!out.empty() && out.back() == '_') out.pop_back();
  return out.empty() ? "instance" : out;
}

}  // namespace trsp
