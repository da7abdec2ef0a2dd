#include <array>
#include <sstream>
#include <stdexcept>

#include "trsp/schedule.hpp"

namespace trsp {

namespace {

char sample_glyph(int j) {
  static constexpr std::string_view kGlyphs =
      "123456789abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ";
  return j < static_cast<int>(kGlyphs.size()) ? kGlyphs[j] : '#';
}

std::string sample_color(int j) {
  static constexpr std::array<const char*, 10> kPalette = {
      "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
      "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  return kPalette[j % kPalette.size()];
}

int span_of(const Schedule& schedule) {
  int span = schedule.program.length();
  for (const auto& v : schedule.visits) span = std::max(span, v.end);
  return span;
}

std::string render_ascii(const Schedule& schedule) {
  const int span = span_of(schedule);
  std::array<std::string, 3> machine_rows;
  machine_rows.fill(std::string(span, '.'));
  for (const auto& v : schedule.visits) {
    for (int t = v.start; t < v.end; ++t) {
      machine_rows[machine_index(v.machine)][t] = sample_glyph(v.sample);
    }
  }
  std::string robot_row(span, ' ');
  for (const auto& a : schedule.program.actions) {
    if (a.is_carry()) {
      robot_row[a.slot] = sample_glyph(a.sample);
    } else if (a.kind == RobotAction::Kind::kMove) {
      robot_row[a.slot] = '-';
    } else {
      robot_row[a.slot] = '.';
    }
  }

  std::string axis(span + 1, ' ');
  std::string ticks(span + 1, ' ');
  for (int t = 0; t <= span; t += 5) {
    ticks[t] = '|';
    const std::string label = std::to_string(t);
    for (std::size_t i = 0; i < label.size() && t + i < axis.size(); ++i) {
      axis[t + i] = label[i];
    }
  }
  std::ostringstream out;
  out << "time  " << axis << "\n";
  out << "      " << ticks << "\n";
  out << "robot " << robot_row << "\n";
  out << "M1    " << machine_rows[0] << "\n";
  out << "M2    " << machine_rows[1] << "\n";
  out << "M3    " << machine_rows[2] << "\n";
  return out.str();
}

std::string render_svg(const Schedule& schedule) {
  constexpr int kUnit = 20;
  constexpr int kRow = 28;
  constexpr int kLeft = 60;
  constexpr int kTop = 24;
  const int span = span_of(schedule);
  const int width = kLeft + span * kUnit + 20;
  const int height = kTop + 4 * kRow + 30;
  const std::array<const char*, 4> labels = {"Robot", "M1", "M2", "M3"};

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width
      << "\" height=\"" << height << "\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
      << "\" fill=\"white\"/>\n";
  for (int r = 0; r < 4; ++r) {
    out << "<text x=\"4\" y=\"" << kTop + r * kRow + 18 << "\" font-family=\"monospace\""
        << " font-size=\"12\">" << labels[r] << "</text>\n";
  }
  for (int t = 0; t <= span; t += 5) {
    const int x = kLeft + t * kUnit;
    out << "<line x1=\"" << x << "\" y1=\"" << kTop - 4 << "\" x2=\"" << x << "\" y2=\""
        << kTop + 4 * kRow << "\" stroke=\"#dddddd\"/>\n";
    out << "<text x=\"" << x << "\" y=\"" << kTop + 4 * kRow + 16
        << "\" font-family=\"monospace\" font-size=\"10\">" << t << "</text>\n";
  }
  auto bar = [&](int row, int from, int to, int sample) {
    out << "<rect x=\"" << kLeft + from * kUnit << "\" y=\"" << kTop + row * kRow + 4
        << "\" width=\"" << (to - from) * kUnit << "\" height=\"" << kRow - 8
        << "\" fill=\"" << sample_color(sample) << "\" stroke=\"black\"><title>sample "
        << sample + 1 << " [" << from << "," << to << "]</title></rect>\n";
  };
  for (const auto& a : schedule.program.actions) {
    if (a.is_carry()) {
      bar(0, a.slot, a.slot + 1, a.sample);
    } else if (a.kind == RobotAction::Kind::kMove) {
      const int y = kTop + kRow / 2;
      out << "<line x1=\"" << kLeft + a.slot * kUnit << "\" y1=\"" << y << "\" x2=\""
          << kLeft + (a.slot + 1) * kUnit << "\" y2=\"" << y
          << "\" stroke=\"black\" stroke-dasharray=\"3,3\"/>\n";
    }
  }
  for (const auto& v : schedule.visits) bar(machine_index(v.machine) + 1, v.start, v.end, v.sample);
  out << "</svg>\n";
  return out.str();
}

}  // namespace

std::string render_gantt(const Schedule& schedule, GanttStyle style) {
  if (schedule.visits.empty() || schedule.completions.empty()) {
    throw std::invalid_argument("render_gantt: empty schedule");
  }
  return style == GanttStyle::kAscii ? render_ascii(schedule) : render_svg(schedule);
}

}  // namespace trsp
