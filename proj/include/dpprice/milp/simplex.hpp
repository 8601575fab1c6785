#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "dpprice/core/error.hpp"
#include "dpprice/milp/model.hpp"

namespace dpprice::milp {

enum class LpStatus { optimal, infeasible, unbounded };

struct LpOptions {
  double tol = 1e-9;
  double pivot_tol = 1e-9;
  int refactor_every = 100;
  int degenerate_streak = 50;
  long max_iterations = 500000;
};

// Dense bounded-variable simplex tableau. Each row i is a_i.x - r_i = 0 with the
// row activity r_i carrying the row sense as bounds, so the slack basis is the
// starting basis. Maximizes cost.x. Rows can be appended and structural bounds
// changed between solves; re-solves start from the current basis.
class LpTableau {
 public:
  LpTableau(std::vector<double> cost, std::vector<double> lower, std::vector<double> upper, LpOptions opt = {})
      : n_(static_cast<int>(cost.size())), opt_(opt) {
    if (lower.size() != cost.size() || upper.size() != cost.size())
      throw ValidationError("bound vectors do not match cost vector");
    cost_ = std::move(cost);
    lb_ = std::move(lower);
    ub_ = std::move(upper);
    x_.assign(n_, 0.0);
    d_ = cost_;
    status_.assign(n_, Status::at_lower);
    pos_.assign(n_, -1);
    for (int j = 0; j < n_; ++j) status_[j] = resting_status(j, 0.0);
    compute_primal();
  }

  int num_structural() const { return n_; }
  int num_rows() const { return static_cast<int>(basis_.size()); }
  long iterations() const { return iterations_; }

  void add_row(const Row& row) {
    const int col = n_ + num_rows();
    for (auto& r : tab_) r.push_back(0.0);
    std::vector<double> w(col + 1, 0.0);
    for (const auto& t : row.terms) {
      if (t.var < 0 || t.var >= n_) throw ValidationError("row references unknown column");
      w[t.var] += t.coef;
    }
    orig_.push_back(row.terms);
    w[col] = -1.0;
    for (int i = 0; i < num_rows(); ++i) {
      const double f = w[basis_[i]];
      if (f == 0) continue;
      const auto& ti = tab_[i];
      for (int j = 0; j <= col; ++j)
        if (ti[j] != 0) w[j] -= f * ti[j];
    }
    for (auto& v : w) v = -v;
    tab_.push_back(std::move(w));
    cost_.push_back(0.0);
    d_.push_back(0.0);
    double lo = -kInf, hi = kInf;
    if (row.sense != RowSense::le) lo = row.rhs;
    if (row.sense != RowSense::ge) hi = row.rhs;
    lb_.push_back(lo);
    ub_.push_back(hi);
    x_.push_back(row.activity(x_));
    status_.push_back(Status::basic);
    pos_.push_back(num_rows());
    basis_.push_back(col);
  }

  double lower(int j) const { return lb_[j]; }
  double upper(int j) const { return ub_[j]; }

  // Changes the bounds of a structural column. A nonbasic column is parked at
  // the bound its reduced cost prefers so the basis stays dual feasible.
  void set_bounds(int j, double lo, double hi) {
    if (lb_[j] == lo && ub_[j] == hi) return;
    lb_[j] = lo;
    ub_[j] = hi;
    if (status_[j] != Status::basic) status_[j] = resting_status(j, d_[j]);
    dirty_ = true;
  }

  LpStatus solve() {
    if (dirty_) {
      compute_primal();
      dirty_ = false;
    }
    if (max_primal_infeasibility() > opt_.tol && dual_feasible()) {
      if (dual_simplex() == LpStatus::infeasible) return LpStatus::infeasible;
    }
    return primal_simplex();
  }

  double objective() const {
    double s = 0;
    for (int j = 0; j < n_; ++j) s += cost_[j] * x_[j];
    return s;
  }

  std::vector<double> primal() const { return {x_.begin(), x_.begin() + n_}; }
  double value(int j) const { return x_[j]; }

 private:
  enum class Status : std::uint8_t { basic, at_lower, at_upper, free_zero };

  int n_;
  LpOptions opt_;
  std::vector<std::vector<double>> tab_;
  std::vector<std::vector<Term>> orig_;
  std::vector<double> cost_, lb_, ub_, x_, d_;
  std::vector<Status> status_;
  std::vector<int> basis_, pos_;
  long iterations_ = 0;
  int since_refactor_ = 0;
  int degenerate_ = 0;
  bool dirty_ = false;

  int cols() const { return n_ + num_rows(); }
  bool fixed(int j) const { return lb_[j] == ub_[j]; }
  bool bland() const { return degenerate_ > opt_.degenerate_streak; }

  Status resting_status(int j, double dj) const {
    const bool lo = std::isfinite(lb_[j]), hi = std::isfinite(ub_[j]);
    if (!lo && !hi) return Status::free_zero;
    if (lo && hi) return dj > opt_.tol && !fixed(j) ? Status::at_upper : Status::at_lower;
    return lo ? Status::at_lower : Status::at_upper;
  }

  double nonbasic_value(int j) const {
    switch (status_[j]) {
      case Status::at_lower: return lb_[j];
      case Status::at_upper: return ub_[j];
      default: return 0.0;
    }
  }

  void compute_primal() {
    std::vector<int> nz;
    for (int j = 0; j < cols(); ++j) {
      if (status_[j] == Status::basic) continue;
      x_[j] = nonbasic_value(j);
      if (x_[j] != 0) nz.push_back(j);
    }
    for (int i = 0; i < num_rows(); ++i) {
      double s = 0;
      const auto& ti = tab_[i];
      for (int j : nz) s -= ti[j] * x_[j];
      x_[basis_[i]] = s;
    }
  }

  void compute_duals() {
    d_ = cost_;
    for (int i = 0; i < num_rows(); ++i) {
      const double cb = cost_[basis_[i]];
      if (cb == 0) continue;
      const auto& ti = tab_[i];
      for (int j = 0; j < cols(); ++j)
        if (ti[j] != 0) d_[j] -= cb * ti[j];
    }
    for (int i = 0; i < num_rows(); ++i) d_[basis_[i]] = 0.0;
  }

  double infeasibility(int j) const {
    if (x_[j] < lb_[j]) return lb_[j] - x_[j];
    if (x_[j] > ub_[j]) return x_[j] - ub_[j];
    return 0.0;
  }

  double max_primal_infeasibility() const {
    double m = 0;
    for (int b : basis_) m = std::max(m, infeasibility(b));
    return m;
  }

  bool dual_feasible() const {
    for (int j = 0; j < cols(); ++j) {
      if (status_[j] == Status::basic || fixed(j)) continue;
      if (status_[j] == Status::at_lower && d_[j] > opt_.tol) return false;
      if (status_[j] == Status::at_upper && d_[j] < -opt_.tol) return false;
      if (status_[j] == Status::free_zero && std::abs(d_[j]) > opt_.tol) return false;
    }
    return true;
  }

  void count_iteration() {
    if (++iterations_ > opt_.max_iterations) throw LpStalled("lp stalled: iteration limit reached");
  }

  void pivot(int r, int q) {
    auto& tr = tab_[r];
    const double piv = tr[q];
    std::vector<int> nz;
    for (int j = 0; j < cols(); ++j) {
      if (tr[j] == 0) continue;
      tr[j] /= piv;
      if (std::abs(tr[j]) < 1e-14) tr[j] = 0;
      else nz.push_back(j);
    }
    tr[q] = 1.0;
    for (int i = 0; i < num_rows(); ++i) {
      if (i == r) continue;
      auto& ti = tab_[i];
      const double f = ti[q];
      if (f == 0) continue;
      for (int j : nz) {
        ti[j] -= f * tr[j];
        if (std::abs(ti[j]) < 1e-14) ti[j] = 0;
      }
      ti[q] = 0.0;
    }
    const double dq = d_[q];
    if (dq != 0)
      for (int j : nz) d_[j] -= dq * tr[j];
    d_[q] = 0.0;
    const int leaving = basis_[r];
    pos_[leaving] = -1;
    basis_[r] = q;
    pos_[q] = r;
    status_[q] = Status::basic;
    d_[leaving] = std::abs(d_[leaving]) < 1e-14 ? 0.0 : d_[leaving];
    if (++since_refactor_ >= opt_.refactor_every) refactor();
    else compute_primal();
  }

  void reset_to_slack_basis() {
    const int m = num_rows();
    for (int j = 0; j < n_; ++j) {
      pos_[j] = -1;
      status_[j] = resting_status(j, 0.0);
    }
    for (int i = 0; i < m; ++i) {
      basis_[i] = n_ + i;
      pos_[n_ + i] = i;
      status_[n_ + i] = Status::basic;
      auto& ti = tab_[i];
      std::fill(ti.begin(), ti.end(), 0.0);
      for (const auto& t : orig_[i]) ti[t.var] -= t.coef;
      ti[n_ + i] = 1.0;
    }
  }

  // Rebuilds B^-1 A from the stored rows by Gauss-Jordan elimination.
  void refactor() {
    since_refactor_ = 0;
    const int m = num_rows(), c = cols();
    std::vector<std::vector<double>> a(m, std::vector<double>(c, 0.0));
    for (int i = 0; i < m; ++i) {
      for (const auto& t : orig_[i]) a[i][t.var] += t.coef;
      a[i][n_ + i] = -1.0;
    }
    std::vector<int> row_of(m, -1);
    std::vector<char> used(m, 0);
    bool ok = true;
    for (int k = 0; k < m && ok; ++k) {
      const int var = basis_[k];
      int p = -1;
      double best = 1e-11;
      for (int i = 0; i < m; ++i)
        if (!used[i] && std::abs(a[i][var]) > best) {
          best = std::abs(a[i][var]);
          p = i;
        }
      if (p < 0) {
        ok = false;
        break;
      }
      used[p] = 1;
      row_of[k] = p;
      auto& ap = a[p];
      const double piv = ap[var];
      std::vector<int> nz;
      for (int j = 0; j < c; ++j)
        if (ap[j] != 0) {
          ap[j] /= piv;
          nz.push_back(j);
        }
      for (int i = 0; i < m; ++i) {
        if (i == p || a[i][var] == 0) continue;
        const double f = a[i][var];
        for (int j : nz) a[i][j] -= f * ap[j];
        a[i][var] = 0.0;
      }
    }
    if (ok) {
      for (int k = 0; k < m; ++k) {
        tab_[k] = std::move(a[row_of[k]]);
        for (auto& v : tab_[k])
          if (std::abs(v) < 1e-14) v = 0;
      }
    } else {
      reset_to_slack_basis();
    }
    compute_duals();
    compute_primal();
  }

  // Composite primal simplex: phase 1 minimizes the sum of bound violations of
  // the basic variables, phase 2 maximizes the cost.
  LpStatus primal_simplex() {
    std::vector<double> dj(cols());
    for (;;) {
      int rows = num_rows();
      bool phase1 = max_primal_infeasibility() > opt_.tol;
      const std::vector<double>* dv = &d_;
      if (phase1) {
        std::fill(dj.begin(), dj.end(), 0.0);
        dj.resize(cols(), 0.0);
        for (int i = 0; i < rows; ++i) {
          const int b = basis_[i];
          double c1 = 0;
          if (x_[b] < lb_[b] - opt_.tol) c1 = 1;
          else if (x_[b] > ub_[b] + opt_.tol) c1 = -1;
          if (c1 == 0) continue;
          const auto& ti = tab_[i];
          for (int j = 0; j < cols(); ++j)
            if (ti[j] != 0) dj[j] -= c1 * ti[j];
        }
        dv = &dj;
      }
      const auto& d = *dv;
      int q = -1;
      double dir = 0, best = 0;
      for (int j = 0; j < cols(); ++j) {
        if (status_[j] == Status::basic || fixed(j)) continue;
        double s = 0;
        if (status_[j] == Status::at_lower && d[j] > opt_.tol) s = 1;
        else if (status_[j] == Status::at_upper && d[j] < -opt_.tol) s = -1;
        else if (status_[j] == Status::free_zero && std::abs(d[j]) > opt_.tol) s = d[j] > 0 ? 1 : -1;
        if (s == 0) continue;
        if (bland()) {
          q = j;
          dir = s;
          break;
        }
        if (std::abs(d[j]) > best) {
          best = std::abs(d[j]);
          q = j;
          dir = s;
        }
      }
      if (q < 0) return phase1 ? LpStatus::infeasible : LpStatus::optimal;
      count_iteration();

      double theta = kInf;
      int r = -1;
      bool flip = false;
      Status leave_status = Status::at_lower;
      double r_alpha = 0;
      if (std::isfinite(lb_[q]) && std::isfinite(ub_[q])) {
        theta = ub_[q] - lb_[q];
        flip = true;
      }
      for (int i = 0; i < rows; ++i) {
        const double alpha = tab_[i][q];
        if (std::abs(alpha) < opt_.pivot_tol) continue;
        const double rate = -alpha * dir;
        const int b = basis_[i];
        const double xb = x_[b];
        double t = kInf;
        Status st = Status::at_lower;
        if (rate < 0) {
          if (phase1 && xb > ub_[b] + opt_.tol) {
            t = (xb - ub_[b]) / -rate;
            st = Status::at_upper;
          } else if (xb < lb_[b] - opt_.tol) {
            continue;
          } else if (std::isfinite(lb_[b])) {
            t = std::max(0.0, xb - lb_[b]) / -rate;
            st = Status::at_lower;
          }
        } else {
          if (phase1 && xb < lb_[b] - opt_.tol) {
            t = (lb_[b] - xb) / rate;
            st = Status::at_lower;
          } else if (xb > ub_[b] + opt_.tol) {
            continue;
          } else if (std::isfinite(ub_[b])) {
            t = std::max(0.0, ub_[b] - xb) / rate;
            st = Status::at_upper;
          }
        }
        if (!std::isfinite(t)) continue;
        bool take = false;
        if (t < theta - 1e-12) take = true;
        else if (t <= theta + 1e-12 && r >= 0) {
          take = bland() ? b < basis_[r] : std::abs(alpha) > std::abs(r_alpha);
        } else if (t <= theta + 1e-12 && flip && r < 0) {
          take = false;
        }
        if (take) {
          theta = t;
          r = i;
          flip = false;
          leave_status = st;
          r_alpha = alpha;
        }
      }
      if (!std::isfinite(theta)) {
        if (phase1) return LpStatus::infeasible;
        return LpStatus::unbounded;
      }
      degenerate_ = theta < 1e-12 ? degenerate_ + 1 : 0;
      if (r < 0) {
        status_[q] = status_[q] == Status::at_lower ? Status::at_upper : Status::at_lower;
        compute_primal();
        continue;
      }
      const int leaving = basis_[r];
      status_[leaving] = fixed(leaving) ? Status::at_lower : leave_status;
      if (status_[leaving] == Status::at_lower && !std::isfinite(lb_[leaving])) status_[leaving] = Status::at_upper;
      if (status_[leaving] == Status::at_upper && !std::isfinite(ub_[leaving])) status_[leaving] = Status::at_lower;
      pivot(r, q);
    }
  }

  // Dual simplex from a dual feasible basis.
  LpStatus dual_simplex() {
    for (;;) {
      int r = -1;
      double worst = opt_.tol;
      for (int i = 0; i < num_rows(); ++i) {
        const int b = basis_[i];
        const double inf = infeasibility(b);
        if (inf <= opt_.tol) continue;
        if (bland()) {
          if (r < 0 || b < basis_[r]) r = i;
        } else if (inf > worst) {
          worst = inf;
          r = i;
        }
      }
      if (r < 0) return LpStatus::optimal;
      count_iteration();
      const int b = basis_[r];
      const bool raise = x_[b] < lb_[b];
      const auto& tr = tab_[r];
      int q = -1;
      double best = kInf, q_alpha = 0;
      for (int j = 0; j < cols(); ++j) {
        if (status_[j] == Status::basic || fixed(j)) continue;
        const double alpha = tr[j];
        if (std::abs(alpha) < opt_.pivot_tol) continue;
        // x_b moves by -alpha per unit increase of x_j
        const bool up_helps = raise ? alpha < 0 : alpha > 0;
        bool ok = false;
        if (status_[j] == Status::at_lower) ok = up_helps;
        else if (status_[j] == Status::at_upper) ok = !up_helps;
        else ok = true;
        if (!ok) continue;
        const double ratio = std::abs(d_[j]) / std::abs(alpha);
        bool take = false;
        if (ratio < best - 1e-12) take = true;
        else if (ratio <= best + 1e-12) take = bland() ? (q < 0 || j < q) : std::abs(alpha) > std::abs(q_alpha);
        if (take) {
          best = ratio;
          q = j;
          q_alpha = alpha;
        }
      }
      if (q < 0) return LpStatus::infeasible;
      degenerate_ = best < 1e-12 ? degenerate_ + 1 : 0;
      status_[b] = raise ? Status::at_lower : Status::at_upper;
      if (fixed(b)) status_[b] = Status::at_lower;
      pivot(r, q);
    }
  }
};

}  // namespace dpprice::milp
