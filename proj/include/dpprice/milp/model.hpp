#pragma once

#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "dpprice/core/error.hpp"

namespace dpprice::milp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarKind { toll, selection, mccormick, potential, auxiliary };
enum class RowSense { le, eq, ge };
enum class ObjSense { maximize, minimize };

struct Variable {
  std::string name;
  VarKind kind = VarKind::auxiliary;
  double lower = 0;
  double upper = kInf;
  bool integer = false;
};

struct Term {
  int var = 0;
  double coef = 0;
};

struct Row {
  std::vector<Term> terms;
  RowSense sense = RowSense::le;
  double rhs = 0;
  std::string name;

  template <class V>
  double activity(const V& x) const {
    double s = 0;
    for (const auto& t : terms) s += t.coef * x[t.var];
    return s;
  }

  // Amount by which x violates the row (0 when satisfied).
  template <class V>
  double violation(const V& x) const {
    const double a = activity(x);
    switch (sense) {
      case RowSense::le: return std::max(0.0, a - rhs);
      case RowSense::ge: return std::max(0.0, rhs - a);
      case RowSense::eq: return std::abs(a - rhs);
    }
    return 0;
  }
};

// Solver-agnostic MILP description.
class ModelSpec {
 public:
  int add_variable(Variable v) {
    if (v.lower > v.upper) throw ValidationError("variable " + v.name + " has empty domain");
    vars_.push_back(std::move(v));
    return static_cast<int>(vars_.size()) - 1;
  }

  int add_row(Row r) {
    for (const auto& t : r.terms)
      if (t.var < 0 || t.var >= num_vars()) throw ValidationError("row " + r.name + " references unknown variable");
    rows_.push_back(std::move(r));
    return static_cast<int>(rows_.size()) - 1;
  }

  void set_objective(ObjSense sense, std::vector<Term> terms) {
    sense_ = sense;
    objective_ = std::move(terms);
  }

  int num_vars() const { return static_cast<int>(vars_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  const std::vector<Variable>& variables() const { return vars_; }
  const std::vector<Row>& rows() const { return rows_; }
  const Variable& variable(int j) const { return vars_.at(j); }
  Variable& variable(int j) { return vars_.at(j); }
  ObjSense objective_sense() const { return sense_; }
  const std::vector<Term>& objective() const { return objective_; }

  template <class V>
  double objective_value(const V& x) const {
    double s = 0;
    for (const auto& t : objective_) s += t.coef * x[t.var];
    return s;
  }

  // Bounds, integrality and rows within tol.
  template <class V>
  bool is_feasible(const V& x, double tol) const {
    for (int j = 0; j < num_vars(); ++j) {
      const auto& v = vars_[j];
      if (x[j] < v.lower - tol || x[j] > v.upper + tol) return false;
      if (v.integer && std::abs(x[j] - std::round(x[j])) > tol) return false;
    }
    for (const auto& r : rows_)
      if (r.violation(x) > tol) return false;
    return true;
  }

 private:
  std::vector<Variable> vars_;
  std::vector<Row> rows_;
  ObjSense sense_ = ObjSense::maximize;
  std::vector<Term> objective_;
};

// CPLEX LP-format text of the model.
inline std::string write_lp(const ModelSpec& m) {
  std::ostringstream os;
  os.precision(17);
  auto name = [&](int j) {
    const auto& n = m.variable(j).name;
    return n.empty() ? "v" + std::to_string(j) : n;
  };
  auto expr = [&](const std::vector<Term>& terms) {
    std::ostringstream e;
    e.precision(17);
    bool first = true;
    for (const auto& t : terms) {
      if (t.coef == 0) continue;
      if (!first || t.coef < 0) e << (t.coef < 0 ? " - " : " + ");
      const double c = std::abs(t.coef);
      if (c != 1) e << c << ' ';
      e << name(t.var);
      first = false;
    }
    if (first) e << "0 " << (m.num_vars() > 0 ? name(0) : "x");
    return e.str();
  };
  os << (m.objective_sense() == ObjSense::maximize ? "Maximize\n" : "Minimize\n");
  os << " obj: " << expr(m.objective()) << "\n";
  os << "Subject To\n";
  for (int i = 0; i < m.num_rows(); ++i) {
    const auto& r = m.rows()[i];
    os << ' ' << (r.name.empty() ? "r" + std::to_string(i) : r.name) << ": " << expr(r.terms) << ' '
       << (r.sense == RowSense::le ? "<=" : r.sense == RowSense::ge ? ">=" : "=") << ' ' << r.rhs << "\n";
  }
  os << "Bounds\n";
  for (int j = 0; j < m.num_vars(); ++j) {
    const auto& v = m.variable(j);
    if (v.lower == -kInf && v.upper == kInf)
      os << ' ' << name(j) << " free\n";
    else if (v.lower == v.upper)
      os << ' ' << name(j) << " = " << v.lower << "\n";
    else {
      auto num = [](double a) {
        std::ostringstream e;
        e.precision(17);
        e << a;
        return e.str();
      };
      os << ' ' << (v.lower == -kInf ? std::string("-inf") : num(v.lower)) << " <= " << name(j)
         << " <= " << (v.upper == kInf ? std::string("+inf") : num(v.upper)) << "\n";
    }
  }
  bool any_int = false;
  for (int j = 0; j < m.num_vars(); ++j)
    if (m.variable(j).integer) {
      if (!any_int) os << "General\n";
      any_int = true;
      os << ' ' << name(j) << "\n";
    }
  os << "End\n";
  return os.str();
}

}  // namespace dpprice::milp
