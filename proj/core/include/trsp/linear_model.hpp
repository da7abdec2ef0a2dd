#ifndef TRSP_LINEAR_MODEL_HPP
#define TRSP_LINEAR_MODEL_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "trsp/instance.hpp"

namespace trsp {

enum class VarKind { kContinuous, kBinary, kInteger };
enum class Sense { kLessEqual, kEqual, kGreaterEqual };
enum class ModelKind { kSequence, kTimeIndexed };

std::string_view model_kind_name(ModelKind kind);  // "sequence", "time-indexed"
std::optional<ModelKind> parse_model_kind(std::string_view name);

struct Variable {
  std::string name;
  VarKind kind = VarKind::kContinuous;
  double lower = 0.0;
  std::optional<double> upper;  // none: unbounded above
};

using LinearTerms = std::vector<std::pair<int, double>>;

struct Constraint {
  std::string name;
  LinearTerms terms;
  Sense sense = Sense::kLessEqual;
  double rhs = 0.0;
};

// A minimization MILP. Variables are addressed by index; names are unique.
class LinearModel {
 public:
  explicit LinearModel(ModelKind kind) : kind_(kind) {}

  ModelKind kind() const { return kind_; }

  // Throws std::invalid_argument on a duplicate name.
  int add_variable(std::string name, VarKind kind, double lower = 0.0,
                   std::optional<double> upper = std::nullopt);
  // Throws std::invalid_argument on a duplicate name or unknown index.
  void add_constraint(std::string name, LinearTerms terms, Sense sense, double rhs);
  void set_objective(LinearTerms terms, double offset = 0.0);

  std::optional<int> find(std::string_view name) const;
  int index(std::string_view name) const;  // throws std::out_of_range

  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const LinearTerms& objective() const { return objective_; }
  double objective_offset() const { return offset_; }

  int num_binaries() const;

 private:
  ModelKind kind_;
  std::vector<Variable> variables_;
  std::unordered_map<std::string, int> by_name_;
  std::vector<Constraint> constraints_;
  LinearTerms objective_;
  double offset_ = 0.0;
};

// Same variables (by name, kind and bounds), constraints in the same order
// with the same coefficients, and the same objective, ignoring the order of
// variables and of terms inside one expression.
bool structurally_equal(const LinearModel& a, const LinearModel& b);

// Variable values keyed by name.
using Assignment = std::unordered_map<std::string, double>;

class MissingVariable : public std::invalid_argument {
 public:
  explicit MissingVariable(const std::string& name)
      : std::invalid_argument("assignment has no value for " + name), name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

struct ConstraintViolation {
  std::string name;    // constraint or variable name
  std::string detail;  // human-readable reason
};

inline constexpr double kFeasibilityTolerance = 1e-6;

// Every violated constraint, bound and integrality requirement. Throws
// MissingVariable when a model variable has no value.
std::vector<ConstraintViolation> check_assignment(const LinearModel& model,
                                                  const Assignment& assignment);

double objective_value(const LinearModel& model, const Assignment& assignment);

// LP text ("Minimize / Subject To / Bounds / Binaries / End"). The model kind
// travels in a "\ decode:" comment line.
std::string write_lp(const LinearModel& model);
// Throws ParseError on malformed input.
LinearModel read_lp(std::string_view text);

// Whitespace-separated "name value" lines; '#' starts a comment. Variables
// not listed are 0. Throws ParseError on unknown names or bad numbers.
Assignment read_solution(const LinearModel& model, std::string_view text);
std::string write_solution(const LinearModel& model, const Assignment& assignment);

}  // namespace trsp

#endif  // TRSP_LINEAR_MODEL_HPP
