#include "hetsched/lp.hpp"

#include <cmath>
#include <sstream>

#include "hetsched/io.hpp"

namespace hetsched {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kCostTol = 1e-9;
constexpr int kDegenerateBeforeBland = 50;

// How an original variable is expressed through nonnegative columns:
// x = offset + sign * y[col] (- y[col2] when free).
struct VarMap {
  int col = -1;
  int col2 = -1;
  double sign = 1;
  double offset = 0;
};

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * (cols + 1), 0.0) {}

  double& at(std::size_t r, std::size_t c) { return data_[r * (cols_ + 1) + c]; }
  double at(std::size_t r, std::size_t c) const { return data_[r * (cols_ + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, cols_); }
  double rhs(std::size_t r) const { return at(r, cols_); }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  void pivot(std::size_t pr, std::size_t pc, std::vector<double>& reduced) {
    double p = at(pr, pc);
    double* prow = &data_[pr * (cols_ + 1)];
    for (std::size_t c = 0; c <= cols_; ++c) prow[c] /= p;
    prow[pc] = 1.0;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r == pr) continue;
      double* row = &data_[r * (cols_ + 1)];
      double f = row[pc];
      if (f == 0.0) continue;
      for (std::size_t c = 0; c <= cols_; ++c) row[c] -= f * prow[c];
      row[pc] = 0.0;
    }
    double f = reduced[pc];
    if (f != 0.0) {
      for (std::size_t c = 0; c <= cols_; ++c) reduced[c] -= f * prow[c];
      reduced[pc] = 0.0;
    }
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

enum class PhaseResult { optimal, unbounded };

// Reduced-cost row has the objective value (negated) in its last slot.
std::vector<double> reduced_costs(const Tableau& t, const std::vector<double>& cost, const std::vector<int>& basis) {
  std::vector<double> d(t.cols() + 1, 0.0);
  for (std::size_t c = 0; c < t.cols(); ++c) d[c] = cost[c];
  for (std::size_t r = 0; r < t.rows(); ++r) {
    double cb = cost[basis[r]];
    if (cb == 0.0) continue;
    for (std::size_t c = 0; c <= t.cols(); ++c) d[c] -= cb * t.at(r, c);
  }
  return d;
}

PhaseResult run_phase(Tableau& t, std::vector<int>& basis, std::vector<double>& d, const std::vector<bool>& allowed) {
  const std::size_t limit = 50000 + 200 * (t.rows() + t.cols());
  bool bland = false;
  int degenerate = 0;
  for (std::size_t iter = 0; iter < limit; ++iter) {
    int enter = -1;
    double best = -kCostTol;
    for (std::size_t c = 0; c < t.cols(); ++c) {
      if (!allowed[c] || d[c] >= -kCostTol) continue;
      if (bland) {
        enter = static_cast<int>(c);
        break;
      }
      if (d[c] < best) {
        best = d[c];
        enter = static_cast<int>(c);
      }
    }
    if (enter < 0) return PhaseResult::optimal;

    int leave = -1;
    double best_ratio = 0;
    for (std::size_t r = 0; r < t.rows(); ++r) {
      double a = t.at(r, enter);
      if (a <= kPivotTol) continue;
      double ratio = t.rhs(r) / a;
      if (leave < 0 || ratio < best_ratio - 1e-12 ||
          (ratio <= best_ratio + 1e-12 && basis[r] < basis[leave])) {
        leave = static_cast<int>(r);
        best_ratio = ratio;
      }
    }
    if (leave < 0) return PhaseResult::unbounded;
    if (best_ratio <= 1e-12) {
      if (++degenerate >= kDegenerateBeforeBland) bland = true;
    } else {
      degenerate = 0;
    }
    t.pivot(leave, enter, d);
    basis[leave] = enter;
  }
  throw LpError("simplex iteration limit reached");
}

}  // namespace

int LinearProgram::add_variable(std::string name, double lo, double hi, double cost) {
  if (lo > hi) throw std::invalid_argument("variable bounds inconsistent");
  if (name.empty()) name = "x" + std::to_string(vars_.size());
  vars_.push_back(Variable{std::move(name), lo, hi});
  costs_.push_back(cost);
  return static_cast<int>(vars_.size() - 1);
}

void LinearProgram::set_cost(int var, double cost) { costs_.at(var) = cost; }

void LinearProgram::add_constraint(std::vector<LinearTerm> terms, Sense sense, double rhs, std::string name) {
  for (const LinearTerm& t : terms) {
    if (t.var < 0 || static_cast<std::size_t>(t.var) >= vars_.size()) {
      throw std::invalid_argument("constraint references unknown variable");
    }
  }
  if (name.empty()) name = "c" + std::to_string(rows_.size());
  rows_.push_back(Constraint{std::move(name), std::move(terms), sense, rhs});
}

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
  }
  return "unknown";
}

LpResult solve(const LinearProgram& lp) {
  const auto& vars = lp.variables();
  std::vector<VarMap> map(vars.size());
  int ny = 0;
  struct Row {
    std::vector<std::pair<int, double>> terms;
    Sense sense;
    double rhs;
  };
  std::vector<Row> rows;
  for (std::size_t j = 0; j < vars.size(); ++j) {
    const Variable& v = vars[j];
    VarMap& vm = map[j];
    if (std::isfinite(v.lo)) {
      vm = VarMap{ny++, -1, 1.0, v.lo};
      if (std::isfinite(v.hi)) rows.push_back(Row{{{vm.col, 1.0}}, Sense::le, v.hi - v.lo});
    } else if (std::isfinite(v.hi)) {
      vm = VarMap{ny++, -1, -1.0, v.hi};
    } else {
      vm.col = ny++;
      vm.col2 = ny++;
    }
  }
  for (const Constraint& c : lp.constraints()) {
    Row row{{}, c.sense, c.rhs};
    for (const LinearTerm& t : c.terms) {
      const VarMap& vm = map[t.var];
      row.rhs -= t.coef * vm.offset;
      row.terms.emplace_back(vm.col, t.coef * vm.sign);
      if (vm.col2 >= 0) row.terms.emplace_back(vm.col2, -t.coef);
    }
    rows.push_back(std::move(row));
  }
  for (Row& row : rows) {
    if (row.rhs < 0) {
      row.rhs = -row.rhs;
      for (auto& term : row.terms) term.second = -term.second;
      if (row.sense == Sense::le) {
        row.sense = Sense::ge;
      } else if (row.sense == Sense::ge) {
        row.sense = Sense::le;
      }
    }
  }

  std::size_t n_slack = 0;
  std::size_t n_art = 0;
  for (const Row& row : rows) {
    if (row.sense != Sense::eq) ++n_slack;
    if (row.sense != Sense::le) ++n_art;
  }
  const std::size_t first_art = ny + n_slack;
  const std::size_t cols = first_art + n_art;
  Tableau t(rows.size(), cols);
  std::vector<int> basis(rows.size());
  std::size_t next_slack = ny;
  std::size_t next_art = first_art;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (auto [col, coef] : rows[r].terms) t.at(r, col) += coef;
    t.rhs(r) = rows[r].rhs;
    if (rows[r].sense == Sense::le) {
      t.at(r, next_slack) = 1.0;
      basis[r] = static_cast<int>(next_slack++);
    } else {
      if (rows[r].sense == Sense::ge) t.at(r, next_slack++) = -1.0;
      t.at(r, next_art) = 1.0;
      basis[r] = static_cast<int>(next_art++);
    }
  }

  LpResult result;
  std::vector<bool> allowed(cols, true);
  if (n_art > 0) {
    std::vector<double> phase1(cols, 0.0);
    for (std::size_t c = first_art; c < cols; ++c) phase1[c] = 1.0;
    auto d = reduced_costs(t, phase1, basis);
    run_phase(t, basis, d, allowed);
    double scale = 1.0;
    for (const Row& row : rows) scale = std::max(scale, row.rhs);
    if (-d[cols] > 1e-9 * scale) {
      result.status = LpStatus::infeasible;
      return result;
    }
    for (std::size_t r = 0; r < t.rows(); ++r) {
      if (static_cast<std::size_t>(basis[r]) < first_art) continue;
      for (std::size_t c = 0; c < first_art; ++c) {
        if (std::abs(t.at(r, c)) > kPivotTol) {
          t.pivot(r, c, d);
          basis[r] = static_cast<int>(c);
          break;
        }
      }
    }
    for (std::size_t c = first_art; c < cols; ++c) allowed[c] = false;
  }

  std::vector<double> cost(cols, 0.0);
  for (std::size_t j = 0; j < vars.size(); ++j) {
    double c = lp.costs()[j];
    cost[map[j].col] += c * map[j].sign;
    if (map[j].col2 >= 0) cost[map[j].col2] -= c;
  }
  auto d = reduced_costs(t, cost, basis);
  if (run_phase(t, basis, d, allowed) == PhaseResult::unbounded) {
    result.status = LpStatus::unbounded;
    return result;
  }

  std::vector<double> y(cols, 0.0);
  for (std::size_t r = 0; r < t.rows(); ++r) y[basis[r]] = std::max(0.0, t.rhs(r));
  result.status = LpStatus::optimal;
  result.values.resize(vars.size());
  result.objective = 0;
  for (std::size_t j = 0; j < vars.size(); ++j) {
    double x = map[j].offset + map[j].sign * y[map[j].col];
    if (map[j].col2 >= 0) x -= y[map[j].col2];
    result.values[j] = x;
    result.objective += lp.costs()[j] * x;
  }
  return result;
}

LpResult solve_or_throw(const LinearProgram& lp) {
  LpResult r = solve(lp);
  if (r.status != LpStatus::optimal) throw LpError(std::string("linear program is ") + to_string(r.status));
  return r;
}

namespace {

void write_terms(std::ostringstream& out, const std::vector<LinearTerm>& terms, const LinearProgram& lp) {
  bool first = true;
  for (const LinearTerm& t : terms) {
    double c = t.coef;
    if (first) {
      if (c < 0) out << " -";
    } else {
      out << (c < 0 ? " -" : " +");
    }
    out << ' ' << format_number(std::abs(c)) << ' ' << lp.variables()[t.var].name;
    first = false;
  }
  if (first) out << " 0 " << (lp.num_variables() > 0 ? lp.variables()[0].name : std::string("x0"));
}

}  // namespace

std::string export_lp_text(const LinearProgram& lp, const std::string& title) {
  std::ostringstream out;
  out << "\\ " << title << "\n";
  out << "Minimize\n obj:";
  std::vector<LinearTerm> objective;
  for (std::size_t j = 0; j < lp.num_variables(); ++j) {
    if (lp.costs()[j] != 0.0) objective.push_back(LinearTerm{static_cast<int>(j), lp.costs()[j]});
  }
  write_terms(out, objective, lp);
  out << "\nSubject To\n";
  for (const Constraint& c : lp.constraints()) {
    out << ' ' << c.name << ':';
    write_terms(out, c.terms, lp);
    const char* op = c.sense == Sense::le ? "<=" : c.sense == Sense::ge ? ">=" : "=";
    out << ' ' << op << ' ' << format_number(c.rhs) << "\n";
  }
  out << "Bounds\n";
  for (const Variable& v : lp.variables()) {
    bool lo = std::isfinite(v.lo);
    bool hi = std::isfinite(v.hi);
    if (!lo && !hi) {
      out << ' ' << v.name << " free\n";
    } else if (lo && hi) {
      out << ' ' << format_number(v.lo) << " <= " << v.name << " <= " << format_number(v.hi) << "\n";
    } else if (lo) {
      out << ' ' << v.name << " >= " << format_number(v.lo) << "\n";
    } else {
      out << " -inf <= " << v.name << " <= " << format_number(v.hi) << "\n";
    }
  }
  out << "End\n";
  return out.str();
}

}  // namespace hetsched
