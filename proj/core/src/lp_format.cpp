#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "trsp/linear_model.hpp"

namespace trsp {

namespace {

std::string number(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

// Appends " + 3 x" style terms, wrapping long expressions.
void write_terms(std::ostringstream& out, const LinearModel& m, const LinearTerms& terms) {
  int on_line = 0;
  bool first = true;
  for (const auto& [v, c] : terms) {
    if (on_line == 8) {
      out << "\n   ";
      on_line = 0;
    }
    const double mag = std::abs(c);
    if (first) {
      out << (c < 0 ? " -" : "");
    } else {
      out << (c < 0 ? " -" : " +");
    }
    if (mag != 1.0) out << " " << number(mag);
    out << " " << m.variables()[v].name;
    first = false;
    ++on_line;
  }
  if (first) out << " 0 " << m.variables().front().name;
}

std::string trim_lower(std::string_view s) {
  std::string out;
  for (char c : s) out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  const auto b = out.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = out.find_last_not_of(" \t\r");
  return out.substr(b, e - b + 1);
}

enum class Section { kNone, kObjective, kConstraints, kBounds, kBinaries, kGenerals, kEnd };

std::optional<Section> section_keyword(std::string_view line) {
  const std::string s = trim_lower(line);
  if (s == "minimize" || s == "minimise" || s == "minimum" || s == "min") return Section::kObjective;
  if (s == "maximize" || s == "maximise" || s == "maximum" || s == "max") return Section::kNone;
  if (s == "subject to" || s == "such that" || s == "st" || s == "s.t.") return Section::kConstraints;
  if (s == "bounds" || s == "bound") return Section::kBounds;
  if (s == "binaries" || s == "binary" || s == "bin") return Section::kBinaries;
  if (s == "generals" || s == "general" || s == "gen") return Section::kGenerals;
  if (s == "end") return Section::kEnd;
  return std::nullopt;
}

struct Token {
  enum class Kind { kName, kNumber, kPlus, kMinus, kColon, kSense };
  Kind kind;
  std::string text;
  double value = 0.0;
  Sense sense = Sense::kEqual;
  int line = 0;
};

bool name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '[' ||
         c == ']';
}

void tokenize(std::string_view line, int line_no, std::vector<Token>& out) {
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '+') {
      out.push_back({Token::Kind::kPlus, "+", 0, Sense::kEqual, line_no});
      ++i;
    } else if (c == '-') {
      out.push_back({Token::Kind::kMinus, "-", 0, Sense::kEqual, line_no});
      ++i;
    } else if (c == ':') {
      out.push_back({Token::Kind::kColon, ":", 0, Sense::kEqual, line_no});
      ++i;
    } else if (c == '<' || c == '>' || c == '=') {
      std::size_t j = i + 1;
      if (j < line.size() && (line[j] == '=' || line[j] == '<' || line[j] == '>')) ++j;
      const std::string op(line.substr(i, j - i));
      Sense s;
      if (op == "<" || op == "<=" || op == "=<") {
        s = Sense::kLessEqual;
      } else if (op == ">" || op == ">=" || op == "=>") {
        s = Sense::kGreaterEqual;
      } else if (op == "=") {
        s = Sense::kEqual;
      } else {
        throw ParseError(line_no, "unknown operator '" + op + "'");
      }
      out.push_back({Token::Kind::kSense, op, 0, s, line_no});
      i = j;
    } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      double v = 0.0;
      auto [end, ec] = std::from_chars(line.data() + i, line.data() + line.size(), v);
      if (ec != std::errc()) throw ParseError(line_no, "bad number");
      const std::size_t len = static_cast<std::size_t>(end - (line.data() + i));
      out.push_back({Token::Kind::kNumber, std::string(line.substr(i, len)), v, Sense::kEqual,
                     line_no});
      i += len;
    } else if (name_start(c)) {
      std::size_t j = i + 1;
      while (j < line.size() && name_char(line[j])) ++j;
      std::string text(line.substr(i, j - i));
      const std::string lower = trim_lower(text);
      if (lower == "inf" || lower == "infinity") {
        out.push_back({Token::Kind::kNumber, text, std::numeric_limits<double>::infinity(),
                       Sense::kEqual, line_no});
      } else {
        out.push_back({Token::Kind::kName, text, 0, Sense::kEqual, line_no});
      }
      i = j;
    } else {
      throw ParseError(line_no, std::string("unexpected character '") + c + "'");
    }
  }
}

struct RawExpr {
  std::vector<std::pair<std::string, double>> terms;
  double constant = 0.0;
};

class TokenStream {
 public:
  explicit TokenStream(const std::vector<Token>& t) : t_(t) {}
  bool done() const { return pos_ >= t_.size(); }
  const Token& peek(std::size_t ahead = 0) const { return t_[pos_ + ahead]; }
  bool has(std::size_t ahead) const { return pos_ + ahead < t_.size(); }
  const Token& take() { return t_[pos_++]; }
  int line() const { return done() ? (t_.empty() ? 0 : t_.back().line) : peek().line; }

 private:
  const std::vector<Token>& t_;
  std::size_t pos_ = 0;
};

std::optional<std::string> take_label(TokenStream& ts) {
  if (ts.has(1) && ts.peek().kind == Token::Kind::kName && ts.peek(1).kind == Token::Kind::kColon) {
    std::string name = ts.take().text;
    ts.take();
    return name;
  }
  return std::nullopt;
}

// Reads signed terms until a sense operator, a label or the end.
RawExpr read_expression(TokenStream& ts) {
  RawExpr e;
  while (!ts.done()) {
    if (ts.peek().kind == Token::Kind::kSense) break;
    if (ts.has(1) && ts.peek().kind == Token::Kind::kName &&
        ts.peek(1).kind == Token::Kind::kColon) {
      break;
    }
    double sign = 1.0;
    while (!ts.done() && (ts.peek().kind == Token::Kind::kPlus || ts.peek().kind == Token::Kind::kMinus)) {
      if (ts.take().kind == Token::Kind::kMinus) sign = -sign;
    }
    if (ts.done()) throw ParseError(ts.line(), "expression ends after a sign");
    double coeff = 1.0;
    bool has_number = false;
    if (ts.peek().kind == Token::Kind::kNumber) {
      coeff = ts.take().value;
      has_number = true;
    }
    if (!ts.done() && ts.peek().kind == Token::Kind::kName &&
        !(ts.has(1) && ts.peek(1).kind == Token::Kind::kColon)) {
      e.terms.emplace_back(ts.take().text, sign * coeff);
    } else if (has_number) {
      e.constant += sign * coeff;
    } else {
      throw ParseError(ts.line(), "expected a term");
    }
  }
  return e;
}

double read_signed_number(TokenStream& ts) {
  double sign = 1.0;
  while (!ts.done() && (ts.peek().kind == Token::Kind::kPlus || ts.peek().kind == Token::Kind::kMinus)) {
    if (ts.take().kind == Token::Kind::kMinus) sign = -sign;
  }
  if (ts.done() || ts.peek().kind != Token::Kind::kNumber) {
    throw ParseError(ts.line(), "expected a number");
  }
  return sign * ts.take().value;
}

struct RawVariable {
  VarKind kind = VarKind::kContinuous;
  double lower = 0.0;
  std::optional<double> upper;
};

}  // namespace

std::string write_lp(const LinearModel& model) {
  if (model.variables().empty()) throw std::invalid_argument("write_lp: model has no variables");
  std::ostringstream out;
  out << "\\ trsp " << model_kind_name(model.kind()) << " model\n";
  out << "\\ decode: " << model_kind_name(model.kind()) << "\n";
  out << "Minimize\n obj:";
  write_terms(out, model, model.objective());
  if (model.objective_offset() != 0.0) {
    out << (model.objective_offset() < 0 ? " - " : " + ") << number(std::abs(model.objective_offset()));
  }
  out << "\nSubject To\n";
  for (const Constraint& c : model.constraints()) {
    out << " " << c.name << ":";
    write_terms(out, model, c.terms);
    out << (c.sense == Sense::kLessEqual ? " <= " : c.sense == Sense::kEqual ? " = " : " >= ")
        << number(c.rhs) << "\n";
  }
  out << "Bounds\n";
  for (const Variable& v : model.variables()) {
    if (v.kind == VarKind::kBinary) continue;
    const std::string lo = std::isinf(v.lower) ? "-inf" : number(v.lower);
    if (v.upper) {
      out << " " << lo << " <= " << v.name << " <= " << number(*v.upper) << "\n";
    } else {
      out << " " << v.name << " >= " << lo << "\n";
    }
  }
  const bool has_binaries = model.num_binaries() > 0;
  if (has_binaries) {
    out << "Binaries\n";
    int on_line = 0;
    for (const Variable& v : model.variables()) {
      if (v.kind != VarKind::kBinary) continue;
      out << (on_line == 0 ? " " : " ") << v.name;
      if (++on_line == 10) {
        out << "\n";
        on_line = 0;
      }
    }
    if (on_line) out << "\n";
  }
  bool has_generals = false;
  for (const Variable& v : model.variables()) has_generals |= v.kind == VarKind::kInteger;
  if (has_generals) {
    out << "Generals\n";
    for (const Variable& v : model.variables()) {
      if (v.kind == VarKind::kInteger) out << " " << v.name << "\n";
    }
  }
  out << "End\n";
  return out.str();
}

LinearModel read_lp(std::string_view text) {
  std::optional<ModelKind> kind;
  std::map<Section, std::vector<Token>> tokens;
  std::vector<std::vector<Token>> bound_lines;
  Section section = Section::kNone;
  bool seen_objective = false;
  bool ended = false;

  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto bs = line.find('\\'); bs != std::string::npos) {
      std::string comment = trim_lower(line.substr(bs + 1));
      if (comment.rfind("decode:", 0) == 0) {
        kind = parse_model_kind(trim_lower(comment.substr(7)));
        if (!kind) throw ParseError(line_no, "unknown decode tag");
      }
      line.erase(bs);
    }
    if (trim_lower(line).empty()) continue;
    if (ended) throw ParseError(line_no, "content after End");
    if (auto s = section_keyword(line)) {
      if (*s == Section::kNone) throw ParseError(line_no, "only minimization models are supported");
      section = *s;
      if (section == Section::kObjective) {
        if (seen_objective) throw ParseError(line_no, "second objective section");
        seen_objective = true;
      }
      if (section == Section::kEnd) ended = true;
      continue;
    }
    if (section == Section::kNone) throw ParseError(line_no, "text before the objective section");
    if (section == Section::kBounds) {
      bound_lines.emplace_back();
      tokenize(line, line_no, bound_lines.back());
    } else {
      tokenize(line, line_no, tokens[section]);
    }
  }
  if (!seen_objective) throw ParseError(line_no, "missing Minimize section");
  if (!ended) throw ParseError(line_no, "missing End");
  if (!kind) throw ParseError(1, "missing '\\ decode:' comment naming the model kind");

  std::vector<std::string> order;
  std::map<std::string, RawVariable> vars;
  auto touch = [&](const std::string& name) -> RawVariable& {
    auto [it, inserted] = vars.try_emplace(name);
    if (inserted) order.push_back(name);
    return it->second;
  };

  // Objective.
  RawExpr objective;
  {
    TokenStream ts(tokens[Section::kObjective]);
    take_label(ts);
    objective = read_expression(ts);
    if (!ts.done()) throw ParseError(ts.line(), "unexpected token in objective");
    for (const auto& [name, c] : objective.terms) touch(name);
  }

  // Constraints.
  struct RawConstraint {
    std::string name;
    RawExpr expr;
    Sense sense;
    double rhs;
  };
  std::vector<RawConstraint> constraints;
  {
    TokenStream ts(tokens[Section::kConstraints]);
    while (!ts.done()) {
      RawConstraint c;
      auto label = take_label(ts);
      c.name = label ? *label : "c" + std::to_string(constraints.size() + 1);
      c.expr = read_expression(ts);
      if (ts.done() || ts.peek().kind != Token::Kind::kSense) {
        throw ParseError(ts.line(), "constraint " + c.name + " lacks a sense");
      }
      c.sense = ts.take().sense;
      c.rhs = read_signed_number(ts) - c.expr.constant;
      for (const auto& [name, coeff] : c.expr.terms) touch(name);
      constraints.push_back(std::move(c));
    }
  }

  // Bounds, one per line.
  for (const auto& toks : bound_lines) {
    TokenStream ts(toks);
    const int ln = toks.front().line;
    auto name_at = [&](std::size_t k) { return k < toks.size() && toks[k].kind == Token::Kind::kName; };
    if (toks.size() == 2 && name_at(0) && trim_lower(toks[1].text) == "free") {
      RawVariable& v = touch(toks[0].text);
      v.lower = -std::numeric_limits<double>::infinity();
      v.upper.reset();
      continue;
    }
    if (name_at(0)) {
      RawVariable& v = touch(ts.take().text);
      if (ts.done() || ts.peek().kind != Token::Kind::kSense) throw ParseError(ln, "bad bound");
      const Sense s = ts.take().sense;
      const double x = read_signed_number(ts);
      if (!ts.done()) throw ParseError(ln, "trailing tokens in bound");
      if (s == Sense::kLessEqual) {
        v.upper = x;
      } else if (s == Sense::kGreaterEqual) {
        v.lower = x;
      } else {
        v.lower = x;
        v.upper = x;
      }
      continue;
    }
    const double lo = read_signed_number(ts);
    if (ts.done() || ts.peek().kind != Token::Kind::kSense) throw ParseError(ln, "bad bound");
    const Sense s1 = ts.take().sense;
    if (ts.done() || ts.peek().kind != Token::Kind::kName) throw ParseError(ln, "bad bound");
    RawVariable& v = touch(ts.take().text);
    if (s1 == Sense::kLessEqual) {
      v.lower = lo;
    } else if (s1 == Sense::kGreaterEqual) {
      v.upper = lo;
    } else {
      v.lower = lo;
      v.upper = lo;
    }
    if (!ts.done()) {
      if (ts.peek().kind != Token::Kind::kSense || ts.peek().sense != Sense::kLessEqual) {
        throw ParseError(ln, "bad bound");
      }
      ts.take();
      v.upper = read_signed_number(ts);
      if (!ts.done()) throw ParseError(ln, "trailing tokens in bound");
    }
    if (v.upper && std::isinf(*v.upper)) v.upper.reset();
  }

  for (Section s : {Section::kBinaries, Section::kGenerals}) {
    for (const Token& t : tokens[s]) {
      if (t.kind != Token::Kind::kName) throw ParseError(t.line, "expected a variable name");
      RawVariable& v = touch(t.text);
      v.kind = s == Section::kBinaries ? VarKind::kBinary : VarKind::kInteger;
    }
  }

  LinearModel model(*kind);
  for (const std::string& name : order) {
    const RawVariable& v = vars[name];
    model.add_variable(name, v.kind, v.lower, v.upper);
  }
  auto resolve = [&](const RawExpr& e) {
    LinearTerms out;
    for (const auto& [name, c] : e.terms) out.emplace_back(model.index(name), c);
    return out;
  };
  for (const RawConstraint& c : constraints) model.add_constraint(c.name, resolve(c.expr), c.sense, c.rhs);
  model.set_objective(resolve(objective), objective.constant);
  return model;
}

Assignment read_solution(const LinearModel& model, std::string_view text) {
  Assignment out;
  for (const Variable& v : model.variables()) out[v.name] = 0.0;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string name, value, extra;
    if (!(fields >> name)) continue;
    if (!(fields >> value) || (fields >> extra)) {
      throw ParseError(line_no, "expected 'name value'");
    }
    if (!model.find(name)) throw ParseError(line_no, "unknown variable " + name);
    double x = 0.0;
    auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), x);
    if (ec != std::errc() || end != value.data() + value.size()) {
      throw ParseError(line_no, "bad value '" + value + "'");
    }
    out[name] = x;
  }
  return out;
}

std::string write_solution(const LinearModel& model, const Assignment& assignment) {
  std::ostringstream out;
  for (const Variable& v : model.variables()) {
    auto it = assignment.find(v.name);
    if (it == assignment.end()) throw MissingVariable(v.name);
    if (it->second != 0.0) out << v.name << " " << number(it->second) << "\n";
  }
  return out.str();
}

}  // namespace trsp
