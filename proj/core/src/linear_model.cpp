#include "trsp/linear_model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace trsp {

std::string_view model_kind_name(ModelKind kind) {
  return kind == ModelKind::kSequence ? "sequence" : "time-indexed";
}

std::optional<ModelKind> parse_model_kind(std::string_view name) {
  if (name == "sequence") return ModelKind::kSequence;
  if (name == "time-indexed") return ModelKind::kTimeIndexed;
  return std::nullopt;
}

int LinearModel::add_variable(std::string name, VarKind kind, double lower,
                              std::optional<double> upper) {
  const int idx = static_cast<int>(variables_.size());
  if (!by_name_.emplace(name, idx).second) {
    throw std::invalid_argument("duplicate variable " + name);
  }
  if (kind == VarKind::kBinary) {
    lower = 0.0;
    upper = 1.0;
  }
  variables_.push_back({std::move(name), kind, lower, upper});
  return idx;
}

void LinearModel::add_constraint(std::string name, LinearTerms terms, Sense sense, double rhs) {
  for (const auto& [v, c] : terms) {
    if (v < 0 || v >= static_cast<int>(variables_.size())) {
      throw std::invalid_argument("constraint " + name + " references an unknown variable");
    }
  }
  constraints_.push_back({std::move(name), std::move(terms), sense, rhs});
}

void LinearModel::set_objective(LinearTerms terms, double offset) {
  objective_ = std::move(terms);
  offset_ = offset;
}

std::optional<int> LinearModel::find(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

int LinearModel::index(std::string_view name) const {
  if (auto i = find(name)) return *i;
  throw std::out_of_range("unknown variable " + std::string(name));
}

int LinearModel::num_binaries() const {
  return static_cast<int>(std::count_if(variables_.begin(), variables_.end(), [](const Variable& v) {
    return v.kind == VarKind::kBinary;
  }));
}

namespace {

std::map<std::string, double> by_name(const LinearModel& m, const LinearTerms& terms) {
  std::map<std::string, double> out;
  for (const auto& [v, c] : terms) out[m.variables()[v].name] += c;
  std::erase_if(out, [](const auto& kv) { return kv.second == 0.0; });
  return out;
}

}  // namespace

bool structurally_equal(const LinearModel& a, const LinearModel& b) {
  if (a.kind() != b.kind() || a.variables().size() != b.variables().size() ||
      a.constraints().size() != b.constraints().size() ||
      a.objective_offset() != b.objective_offset()) {
    return false;
  }
  for (const Variable& v : a.variables()) {
    auto idx = b.find(v.name);
    if (!idx) return false;
    const Variable& w = b.variables()[*idx];
    if (v.kind != w.kind || v.lower != w.lower || v.upper != w.upper) return false;
  }
  if (by_name(a, a.objective()) != by_name(b, b.objective())) return false;
  for (std::size_t i = 0; i < a.constraints().size(); ++i) {
    const Constraint& c = a.constraints()[i];
    const Constraint& d = b.constraints()[i];
    if (c.name != d.name || c.sense != d.sense || c.rhs != d.rhs ||
        by_name(a, c.terms) != by_name(b, d.terms)) {
      return false;
    }
  }
  return true;
}

std::vector<ConstraintViolation> check_assignment(const LinearModel& model,
                                                  const Assignment& assignment) {
  std::vector<long double> value(model.variables().size());
  for (std::size_t i = 0; i < value.size(); ++i) {
    const Variable& v = model.variables()[i];
    auto it = assignment.find(v.name);
    if (it == assignment.end()) throw MissingVariable(v.name);
    value[i] = it->second;
  }

  auto show = [](long double x) {
    std::ostringstream s;
    s.precision(12);
    s << static_cast<double>(x);
    return s.str();
  };
  const long double tol = kFeasibilityTolerance;
  std::vector<ConstraintViolation> out;
  for (std::size_t i = 0; i < value.size(); ++i) {
    const Variable& v = model.variables()[i];
    const long double x = value[i];
    if (!std::isfinite(static_cast<double>(x))) {
      out.push_back({v.name, "value is not finite"});
      continue;
    }
    if (x < v.lower - tol) out.push_back({v.name, show(x) + " below lower bound " + show(v.lower)});
    if (v.upper && x > *v.upper + tol) {
      out.push_back({v.name, show(x) + " above upper bound " + show(*v.upper)});
    }
    if (v.kind != VarKind::kContinuous && std::abs(x - std::round(x)) > tol) {
      out.push_back({v.name, show(x) + " is not integral"});
    }
  }
  for (const Constraint& c : model.constraints()) {
    long double lhs = 0.0L;
    for (const auto& [v, coeff] : c.terms) lhs += static_cast<long double>(coeff) * value[v];
    const long double rhs = c.rhs;
    const long double slack = tol * std::max(1.0L, std::abs(rhs));
    bool ok = true;
    switch (c.sense) {
      case Sense::kLessEqual: ok = lhs <= rhs + slack; break;
      case Sense::kGreaterEqual: ok = lhs >= rhs - slack; break;
      case Sense::kEqual: ok = std::abs(lhs - rhs) <= slack; break;
    }
    if (!ok) {
      const char* op = c.sense == Sense::kLessEqual ? " <= " : c.sense == Sense::kEqual ? " = " : " >= ";
      out.push_back({c.name, "lhs " + show(lhs) + " violates" + op + show(rhs)});
    }
  }
  return out;
}

double objective_value(const LinearModel& model, const Assignment& assignment) {
  long double sum = model.objective_offset();
  for (const auto& [v, c] : model.objective()) {
    const std::string& name = model.variables()[v].name;
    auto it = assignment.find(name);
    if (it == assignment.end()) throw MissingVariable(name);
    sum += static_cast<long double>(c) * it->second;
  }
  return static_cast<double>(sum);
}

}  // namespace trsp
