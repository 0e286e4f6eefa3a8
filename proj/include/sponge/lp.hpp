#pragma once

// Dense two-phase simplex method for small standard-form linear programs
//
//     minimize c^T x   subject to   A x = b,  x >= 0.
//
// Bland's rule is used for both entering and leaving variables, so the method
// terminates on degenerate problems. Problem sizes here are tiny (tens of
// variables), so the tableau is kept dense.

#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

namespace sponge::lp {

enum class Status { Optimal, Infeasible, Unbounded };

struct Result {
  Status status = Status::Infeasible;
  Eigen::VectorXd x;
  double objective = std::numeric_limits<double>::quiet_NaN();
};

struct Options {
  double pivot_tolerance = 1e-11;
  double feasibility_tolerance = 1e-9;
  int max_pivots = 50000;
};

namespace detail {

class Tableau {
 public:
  Tableau(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Options& opt)
      : rows_(a.rows()), structural_(a.cols()), opt_(opt) {
    const Eigen::Index cols = structural_ + rows_ + 1;
    t_ = Eigen::MatrixXd::Zero(rows_ + 1, cols);
    for (Eigen::Index i = 0; i < rows_; ++i) {
      const double sign = b(i) < 0 ? -1.0 : 1.0;
      t_.row(i).head(structural_) = sign * a.row(i);
      t_(i, structural_ + i) = 1.0;
      t_(i, cols - 1) = sign * b(i);
      basis_.push_back(structural_ + i);
    }
    allowed_.assign(static_cast<std::size_t>(cols - 1), true);
    active_.assign(static_cast<std::size_t>(rows_), true);
  }

  Eigen::Index rhs_col() const { return t_.cols() - 1; }

  // Sets the objective row to reduced costs of `cost` for the current basis.
  void set_cost(const Eigen::VectorXd& cost) {
    t_.row(rows_).setZero();
    t_.row(rows_).head(cost.size()) = cost.transpose();
    for (Eigen::Index i = 0; i < rows_; ++i) {
      if (!active_[static_cast<std::size_t>(i)]) continue;
      const double cb = basis_[static_cast<std::size_t>(i)] < cost.size() ? cost(basis_[static_cast<std::size_t>(i)]) : 0.0;
      if (cb != 0.0) t_.row(rows_) -= cb * t_.row(i);
    }
  }

  // Runs Bland-rule pivots until optimal. Returns false if unbounded.
  bool optimize(int& pivots) {
    for (;;) {
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < rhs_col(); ++j) {
        if (allowed_[static_cast<std::size_t>(j)] && t_(rows_, j) < -opt_.pivot_tolerance) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      Eigen::Index leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < rows_; ++i) {
        if (!active_[static_cast<std::size_t>(i)]) continue;
        const double coef = t_(i, enter);
        if (coef <= opt_.pivot_tolerance) continue;
        const double ratio = t_(i, rhs_col()) / coef;
        if (ratio < best - 1e-13 ||
            (ratio <= best + 1e-13 && leave >= 0 && basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)])) {
          best = std::min(best, ratio);
          leave = i;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
      if (++pivots > opt_.max_pivots) return true;
    }
  }

  void pivot(Eigen::Index row, Eigen::Index col) {
    t_.row(row) /= t_(row, col);
    for (Eigen::Index i = 0; i <= rows_; ++i) {
      if (i == row) continue;
      const double f = t_(i, col);
      if (f != 0.0) t_.row(i) -= f * t_.row(row);
    }
    basis_[static_cast<std::size_t>(row)] = col;
  }

  // Removes artificial variables from the basis after phase 1. Rows whose
  // artificial cannot be pivoted out are redundant and get deactivated.
  void drive_out_artificials() {
    for (Eigen::Index i = 0; i < rows_; ++i) {
      if (basis_[static_cast<std::size_t>(i)] < structural_) continue;
      Eigen::Index col = -1;
      double best = opt_.pivot_tolerance * 100;
      for (Eigen::Index j = 0; j < structural_; ++j) {
        if (std::abs(t_(i, j)) > best) {
          best = std::abs(t_(i, j));
          col = j;
        }
      }
      if (col >= 0) {
        pivot(i, col);
      } else {
        active_[static_cast<std::size_t>(i)] = false;
      }
    }
    for (Eigen::Index j = structural_; j < rhs_col(); ++j) allowed_[static_cast<std::size_t>(j)] = false;
  }

  double objective_value() const { return -t_(rows_, rhs_col()); }

  // Basic solution, re-solved from the original data for accuracy.
  Eigen::VectorXd solution(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) const {
    std::vector<Eigen::Index> rows;
    std::vector<Eigen::Index> cols;
    for (Eigen::Index i = 0; i < rows_; ++i) {
      if (!active_[static_cast<std::size_t>(i)]) continue;
      rows.push_back(i);
      cols.push_back(basis_[static_cast<std::size_t>(i)]);
    }
    Eigen::VectorXd x = Eigen::VectorXd::Zero(structural_);
    if (rows.empty()) return x;
    Eigen::MatrixXd basis(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      rhs(static_cast<Eigen::Index>(r)) = b(rows[r]);
      for (std::size_t c = 0; c < cols.size(); ++c) {
        // After phase 1 every active row has a structural basic variable.
        basis(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = a(rows[r], cols[c]);
      }
    }
    const Eigen::VectorXd xb = basis.fullPivLu().solve(rhs);
    for (std::size_t c = 0; c < cols.size(); ++c) {
      if (cols[c] < structural_) x(cols[c]) = std::max(0.0, xb(static_cast<Eigen::Index>(c)));
    }
    return x;
  }

  Eigen::VectorXd tableau_solution() const {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(structural_);
    for (Eigen::Index i = 0; i < rows_; ++i) {
      if (!active_[static_cast<std::size_t>(i)]) continue;
      const Eigen::Index col = basis_[static_cast<std::size_t>(i)];
      if (col < structural_) x(col) = std::max(0.0, t_(i, rhs_col()));
    }
    return x;
  }

 private:
  Eigen::Index rows_;
  Eigen::Index structural_;
  Options opt_;
  Eigen::MatrixXd t_;
  std::vector<Eigen::Index> basis_;
  std::vector<bool> allowed_;
  std::vector<bool> active_;
};

}  // namespace detail

inline Result solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& c,
                    const Options& opt = {}) {
  Result out;
  const Eigen::Index n = a.cols();
  if (a.rows() == 0) {
    // Only x >= 0: bounded iff c >= 0, optimum at the origin.
    for (Eigen::Index j = 0; j < n; ++j) {
      if (c(j) < 0) {
        out.status = Status::Unbounded;
        return out;
      }
    }
    out.status = Status::Optimal;
    out.x = Eigen::VectorXd::Zero(n);
    out.objective = 0.0;
    return out;
  }

  detail::Tableau tab(a, b, opt);
  Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(n + a.rows());
  phase1.tail(a.rows()).setOnes();
  tab.set_cost(phase1);
  int pivots = 0;
  tab.optimize(pivots);
  const double scale = 1.0 + b.cwiseAbs().maxCoeff();
  if (tab.objective_value() > opt.feasibility_tolerance * scale) {
    out.status = Status::Infeasible;
    return out;
  }
  tab.drive_out_artificials();
  tab.set_cost(c);
  if (!tab.optimize(pivots)) {
    out.status = Status::Unbounded;
    return out;
  }
  out.status = Status::Optimal;
  Eigen::VectorXd x = tab.solution(a, b);
  // Keep the polished solution only if it is at least as feasible.
  const Eigen::VectorXd xt = tab.tableau_solution();
  if ((a * xt - b).cwiseAbs().maxCoeff() < (a * x - b).cwiseAbs().maxCoeff()) x = xt;
  out.x = x;
  out.objective = c.dot(x);
  return out;
}

}  // namespace sponge::lp
