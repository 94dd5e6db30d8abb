#pragma once

#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace hetsched {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class Sense { le, eq, ge };

struct LinearTerm {
  int var = 0;
  double coef = 0;
};

struct Variable {
  std::string name;
  double lo = 0;
  double hi = kInfinity;
};

struct Constraint {
  std::string name;
  std::vector<LinearTerm> terms;
  Sense sense = Sense::le;
  double rhs = 0;
};

/// A minimization LP over bounded continuous variables.
class LinearProgram {
 public:
  int add_variable(std::string name, double lo = 0, double hi = kInfinity, double cost = 0);
  void set_cost(int var, double cost);
  void add_constraint(std::vector<LinearTerm> terms, Sense sense, double rhs, std::string name = {});

  std::size_t num_variables() const { return vars_.size(); }
  const std::vector<Variable>& variables() const { return vars_; }
  const std::vector<double>& costs() const { return costs_; }
  const std::vector<Constraint>& constraints() const { return rows_; }

 private:
  std::vector<Variable> vars_;
  std::vector<double> costs_;
  std::vector<Constraint> rows_;
};

enum class LpStatus { optimal, infeasible, unbounded };
const char* to_string(LpStatus status);

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  double objective = 0;
  std::vector<double> values;
};

class LpError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense two-phase simplex. Dantzig pricing with lowest-index ties, falling
/// back to Bland's rule after a run of degenerate pivots.
LpResult solve(const LinearProgram& lp);

/// Same, but throws LpError unless the status is optimal.
LpResult solve_or_throw(const LinearProgram& lp);

/// CPLEX LP text; identical input gives identical text.
std::string export_lp_text(const LinearProgram& lp, const std::string& title = "hetsched");

}  // namespace hetsched
