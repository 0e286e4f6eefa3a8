#pragma once

// Concave entropy programs over products of probability simplices.
//
// A program maximizes F(p) = sum_t c_t h(L_t p_{b(t)}) where each L_t merges
// the coordinates of simplex block b(t) into classes (a marginalization map)
// and h is Shannon entropy, subject to linear equality and two-sided
// constraints. F is concave, so the barrier method below converges to the
// global maximum.
//
// Solve pipeline:
//   1. rewrite the polytope in standard form (two-sided rows get slacks);
//   2. LP face reduction: every variable that is zero on the whole polytope is
//      fixed, and the LP witnesses of the others are averaged into a point of
//      the relative interior;
//   3. log-barrier Newton method on the remaining variables, with diagonal
//      scaling by the current iterate so boundary optima stay well conditioned.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "sponge/error.hpp"
#include "sponge/lp.hpp"
#include "sponge/numeric.hpp"

namespace sponge {

/// Partition map from a simplex of size `class_of.size()` onto `classes` cells.
struct Projection {
  std::vector<int> class_of;
  int classes = 0;

  static Projection identity(std::size_t m) {
    Projection p;
    p.classes = static_cast<int>(m);
    for (std::size_t i = 0; i < m; ++i) p.class_of.push_back(static_cast<int>(i));
    return p;
  }
};

struct EntropyTerm {
  std::size_t block = 0;
  Projection projection;
  double coefficient = 1.0;
};

/// coeffs . x == target, over all program variables (blocks concatenated).
struct EqualityConstraint {
  std::vector<double> coeffs;
  double target = 0.0;
};

/// lower <= coeffs . x <= upper.
struct BoxConstraint {
  std::vector<double> coeffs;
  double lower = 0.0;
  double upper = 0.0;
};

struct EntropyProgram {
  std::vector<std::size_t> blocks;
  std::vector<EntropyTerm> terms;
  std::vector<EqualityConstraint> equalities;
  std::vector<BoxConstraint> boxes;

  /// One simplex of size m, no terms or constraints yet.
  static EntropyProgram simplex(std::size_t m) {
    EntropyProgram p;
    p.blocks = {m};
    return p;
  }

  std::size_t variable_count() const {
    std::size_t n = 0;
    for (auto b : blocks) n += b;
    return n;
  }

  std::size_t block_offset(std::size_t block) const {
    std::size_t off = 0;
    for (std::size_t i = 0; i < block; ++i) off += blocks[i];
    return off;
  }

  void validate() const {
    if (blocks.empty()) throw Error(ErrorCode::InvalidProgram, "program has no simplex blocks");
    for (auto b : blocks) {
      if (b == 0) throw Error(ErrorCode::InvalidProgram, "empty simplex block");
    }
    const std::size_t n = variable_count();
    for (const auto& t : terms) {
      if (t.block >= blocks.size()) throw Error(ErrorCode::InvalidProgram, "term refers to missing block");
      if (!(t.coefficient >= 0.0) || !std::isfinite(t.coefficient)) {
        throw Error(ErrorCode::InvalidProgram, "term coefficients must be finite and >= 0");
      }
      if (t.projection.class_of.size() != blocks[t.block]) {
        throw Error(ErrorCode::InvalidProgram, "projection size does not match its block");
      }
      for (int c : t.projection.class_of) {
        if (c < 0 || c >= t.projection.classes) throw Error(ErrorCode::InvalidProgram, "projection class out of range");
      }
    }
    auto check_row = [&](const std::vector<double>& row) {
      if (row.size() != n) throw Error(ErrorCode::InvalidProgram, "constraint length differs from variable count");
      for (double v : row) {
        if (!std::isfinite(v)) throw Error(ErrorCode::InvalidProgram, "non-finite constraint coefficient");
      }
    };
    for (const auto& e : equalities) check_row(e.coeffs);
    for (const auto& b : boxes) {
      check_row(b.coeffs);
      if (!(b.lower <= b.upper)) throw Error(ErrorCode::InvalidProgram, "box constraint with lower > upper");
    }
  }

  /// Objective value at x (all variables, blocks concatenated).
  double objective(std::span<const double> x) const {
    CompensatedSum total;
    for (const auto& t : terms) {
      const std::size_t off = block_offset(t.block);
      std::vector<double> q(static_cast<std::size_t>(t.projection.classes), 0.0);
      for (std::size_t i = 0; i < blocks[t.block]; ++i) {
        q[static_cast<std::size_t>(t.projection.class_of[i])] += x[off + i];
      }
      total += t.coefficient * shannon_entropy(q);
    }
    return total.value();
  }
};

enum class OptStatus { Optimal, Infeasible, MaxIterations };

struct OptReport {
  OptStatus status = OptStatus::Infeasible;
  double value = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> maximizer;  // all variables, blocks concatenated
  double duality_gap_estimate = std::numeric_limits<double>::infinity();
  int iterations = 0;

  std::vector<double> block(const EntropyProgram& prog, std::size_t b) const {
    const auto off = static_cast<long>(prog.block_offset(b));
    return {maximizer.begin() + off, maximizer.begin() + off + static_cast<long>(prog.blocks[b])};
  }
};

struct SolverOptions {
  /// Stop once the barrier duality-gap bound falls below this.
  double gap_tolerance = 1e-11;
  /// Total Newton iterations across all barrier stages.
  int max_iterations = 100000;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

namespace detail {

// Standard form {x >= 0, A x = b}; the first `structural` columns are the
// program variables, the rest are slacks of two-sided rows.
struct StandardForm {
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  Eigen::Index structural = 0;
};

inline StandardForm standard_form(const EntropyProgram& prog) {
  const auto n = static_cast<Eigen::Index>(prog.variable_count());
  Eigen::Index slacks = 0;
  Eigen::Index rows = static_cast<Eigen::Index>(prog.blocks.size() + prog.equalities.size());
  for (const auto& bx : prog.boxes) {
    if (bx.lower == bx.upper) {
      rows += 1;
    } else {
      rows += 2;
      slacks += 2;
    }
  }
  StandardForm sf;
  sf.structural = n;
  sf.a = Eigen::MatrixXd::Zero(rows, n + slacks);
  sf.b = Eigen::VectorXd::Zero(rows);
  Eigen::Index r = 0;
  for (std::size_t blk = 0; blk < prog.blocks.size(); ++blk) {
    const auto off = static_cast<Eigen::Index>(prog.block_offset(blk));
    for (std::size_t i = 0; i < prog.blocks[blk]; ++i) sf.a(r, off + static_cast<Eigen::Index>(i)) = 1.0;
    sf.b(r++) = 1.0;
  }
  auto put_row = [&](Eigen::Index row, const std::vector<double>& coeffs) {
    for (Eigen::Index j = 0; j < n; ++j) sf.a(row, j) = coeffs[static_cast<std::size_t>(j)];
  };
  for (const auto& e : prog.equalities) {
    put_row(r, e.coeffs);
    sf.b(r++) = e.target;
  }
  Eigen::Index s = n;
  for (const auto& bx : prog.boxes) {
    if (bx.lower == bx.upper) {
      put_row(r, bx.coeffs);
      sf.b(r++) = bx.lower;
      continue;
    }
    put_row(r, bx.coeffs);  // g.x - u = lower
    sf.a(r, s++) = -1.0;
    sf.b(r++) = bx.lower;
    put_row(r, bx.coeffs);  // g.x + v = upper
    sf.a(r, s++) = 1.0;
    sf.b(r++) = bx.upper;
  }
  return sf;
}

struct RelativeInterior {
  bool feasible = false;
  std::vector<Eigen::Index> free_vars;  // variables positive somewhere on the polytope
  Eigen::VectorXd point;                // feasible, positive exactly on free_vars
};

inline constexpr double kFaceTolerance = 1e-12;

inline RelativeInterior relative_interior(const StandardForm& sf) {
  RelativeInterior out;
  const Eigen::Index cols = sf.a.cols();
  const lp::Result first = lp::solve(sf.a, sf.b, Eigen::VectorXd::Zero(cols));
  if (first.status != lp::Status::Optimal) return out;
  out.feasible = true;

  std::vector<int> state(static_cast<std::size_t>(cols), 0);  // 0 unknown, 1 positive, -1 zero
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(cols);
  int witnesses = 0;
  auto absorb = [&](const Eigen::VectorXd& x) {
    sum += x;
    ++witnesses;
    for (Eigen::Index j = 0; j < cols; ++j) {
      if (x(j) > kFaceTolerance) state[static_cast<std::size_t>(j)] = 1;
    }
  };
  absorb(first.x);
  for (Eigen::Index j = 0; j < cols; ++j) {
    if (state[static_cast<std::size_t>(j)] != 0) continue;
    Eigen::VectorXd c = Eigen::VectorXd::Zero(cols);
    c(j) = -1.0;
    const lp::Result r = lp::solve(sf.a, sf.b, c);
    if (r.status == lp::Status::Optimal && r.x(j) > kFaceTolerance) {
      absorb(r.x);
    } else {
      state[static_cast<std::size_t>(j)] = -1;
    }
  }
  out.point = sum / witnesses;
  for (Eigen::Index j = 0; j < cols; ++j) {
    if (state[static_cast<std::size_t>(j)] == 1) {
      out.free_vars.push_back(j);
    } else {
      out.point(j) = 0.0;
    }
  }
  return out;
}

// Rows of `a` forming a basis of its row space.
inline std::vector<Eigen::Index> independent_rows(const Eigen::MatrixXd& a) {
  std::vector<Eigen::Index> rows;
  if (a.rows() == 0 || a.cols() == 0) return rows;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a.transpose());
  qr.setThreshold(1e-10);
  const Eigen::Index rank = qr.rank();
  for (Eigen::Index i = 0; i < rank; ++i) rows.push_back(qr.colsPermutation().indices()(i));
  std::sort(rows.begin(), rows.end());
  return rows;
}

// Objective restricted to the free structural variables.
class ReducedObjective {
 public:
  ReducedObjective(const EntropyProgram& prog, const std::vector<Eigen::Index>& free_vars, Eigen::Index structural)
      : prog_(prog), free_(free_vars), structural_(structural) {}

  // Embeds reduced variables into the full structural vector.
  std::vector<double> embed(const Eigen::VectorXd& y) const {
    std::vector<double> x(static_cast<std::size_t>(structural_), 0.0);
    for (std::size_t k = 0; k < free_.size(); ++k) {
      if (free_[k] < structural_) x[static_cast<std::size_t>(free_[k])] = y(static_cast<Eigen::Index>(k));
    }
    return x;
  }

  double value(const Eigen::VectorXd& y) const { return prog_.objective(embed(y)); }

  // Gradient and the PSD matrix -Hessian of F, in reduced coordinates.
  void derivatives(const Eigen::VectorXd& y, Eigen::VectorXd& grad, Eigen::MatrixXd& neg_hess) const {
    const auto nf = static_cast<Eigen::Index>(free_.size());
    grad = Eigen::VectorXd::Zero(nf);
    neg_hess = Eigen::MatrixXd::Zero(nf, nf);
    const std::vector<double> x = embed(y);
    for (const auto& t : prog_.terms) {
      if (t.coefficient == 0.0) continue;
      const auto off = static_cast<Eigen::Index>(prog_.block_offset(t.block));
      const auto size = static_cast<Eigen::Index>(prog_.blocks[t.block]);
      std::vector<double> q(static_cast<std::size_t>(t.projection.classes), 0.0);
      for (Eigen::Index i = 0; i < size; ++i) {
        q[static_cast<std::size_t>(t.projection.class_of[static_cast<std::size_t>(i)])] += x[static_cast<std::size_t>(off + i)];
      }
      std::vector<Eigen::Index> members;  // reduced indices in this block
      for (Eigen::Index k = 0; k < nf; ++k) {
        const Eigen::Index v = free_[static_cast<std::size_t>(k)];
        if (v >= off && v < off + size) members.push_back(k);
      }
      for (Eigen::Index k : members) {
        const int cls = t.projection.class_of[static_cast<std::size_t>(free_[static_cast<std::size_t>(k)] - off)];
        const double qc = q[static_cast<std::size_t>(cls)];
        grad(k) += -t.coefficient * (std::log(qc) + 1.0);
        for (Eigen::Index l : members) {
          const int cls2 = t.projection.class_of[static_cast<std::size_t>(free_[static_cast<std::size_t>(l)] - off)];
          if (cls2 == cls) neg_hess(k, l) += t.coefficient / qc;
        }
      }
    }
  }

 private:
  const EntropyProgram& prog_;
  const std::vector<Eigen::Index>& free_;
  Eigen::Index structural_;
};

}  // namespace detail

/// Global maximum of a concave entropy program.
inline OptReport maximize_entropy_program(const EntropyProgram& prog, const SolverOptions& opt = {}) {
  prog.validate();
  OptReport report;
  const detail::StandardForm sf = detail::standard_form(prog);
  const detail::RelativeInterior ri = detail::relative_interior(sf);
  if (!ri.feasible) {
    report.status = OptStatus::Infeasible;
    return report;
  }

  const auto& free_vars = ri.free_vars;
  const auto nf = static_cast<Eigen::Index>(free_vars.size());
  detail::ReducedObjective objective(prog, free_vars, sf.structural);

  Eigen::VectorXd y(nf);
  Eigen::MatrixXd a_free(sf.a.rows(), nf);
  for (Eigen::Index k = 0; k < nf; ++k) {
    y(k) = ri.point(free_vars[static_cast<std::size_t>(k)]);
    a_free.col(k) = sf.a.col(free_vars[static_cast<std::size_t>(k)]);
  }
  const std::vector<Eigen::Index> rows = detail::independent_rows(a_free);
  Eigen::MatrixXd a_eq(static_cast<Eigen::Index>(rows.size()), nf);
  for (std::size_t r = 0; r < rows.size(); ++r) a_eq.row(static_cast<Eigen::Index>(r)) = a_free.row(rows[r]);

  auto finish = [&](OptStatus status, double gap) {
    report.status = status;
    report.maximizer = objective.embed(y);
    report.value = prog.objective(report.maximizer);
    report.duality_gap_estimate = gap;
    return report;
  };
  if (nf == 0) return finish(OptStatus::Optimal, 0.0);

  // Barrier function phi_t(y) = -t F(y) - sum log y.
  auto barrier = [&](const Eigen::VectorXd& v, double t) {
    CompensatedSum s;
    s += -t * objective.value(v);
    for (Eigen::Index k = 0; k < nf; ++k) s += -std::log(v(k));
    return s.value();
  };

  const auto m_ineq = static_cast<double>(nf);
  double t = 1.0;
  constexpr double kGrowth = 8.0;
  Eigen::VectorXd grad;
  Eigen::MatrixXd neg_hess;
  double decrement_sq = 0.0;
  for (;;) {
    // Centering by damped Newton steps in coordinates scaled by y.
    for (int inner = 0; inner < 200; ++inner) {
      if (report.iterations >= opt.max_iterations) {
        return finish(OptStatus::MaxIterations, m_ineq / t + decrement_sq);
      }
      ++report.iterations;
      objective.derivatives(y, grad, neg_hess);
      const Eigen::VectorXd g = y.cwiseProduct(-t * grad - y.cwiseInverse());
      Eigen::MatrixXd h = t * (y.asDiagonal() * neg_hess * y.asDiagonal());
      h.diagonal().array() += 1.0;
      const Eigen::MatrixXd as = a_eq * y.asDiagonal();

      Eigen::LLT<Eigen::MatrixXd> llt(h);
      const Eigen::VectorXd u = llt.solve(g);
      Eigen::VectorXd dz = -u;
      if (as.rows() > 0) {
        const Eigen::MatrixXd v = llt.solve(as.transpose());
        const Eigen::MatrixXd schur = as * v;
        const Eigen::VectorXd w = schur.ldlt().solve(as * u);
        dz = -(u - v * w);
      }
      decrement_sq = std::max(0.0, -g.dot(dz));
      if (decrement_sq < 1e-14) break;

      const Eigen::VectorXd dy = y.cwiseProduct(dz);
      double step = 1.0;
      for (Eigen::Index k = 0; k < nf; ++k) {
        if (dz(k) < 0) step = std::min(step, -0.99 / dz(k));
      }
      if (decrement_sq > 0.05) {
        const double base = barrier(y, t);
        const double slope = -decrement_sq;
        while (step > 1e-12 && barrier(y + step * dy, t) > base + 0.25 * step * slope + 1e-15 * std::abs(base)) {
          step *= 0.5;
        }
      }
      y += step * dy;
      for (Eigen::Index k = 0; k < nf; ++k) y(k) = std::max(y(k), std::numeric_limits<double>::min());
      if (step * std::sqrt(decrement_sq) < 1e-15) break;
    }
    if (m_ineq / t < opt.gap_tolerance) break;
    t *= kGrowth;
  }
  return finish(OptStatus::Optimal, m_ineq / t + decrement_sq / t);
}

/// Exact range of `functional . x` over the constraint polytope of `prog`
/// (its objective terms are ignored).
inline Interval feasible_interval(const EntropyProgram& prog, std::span<const double> functional) {
  prog.validate();
  if (functional.size() != prog.variable_count()) {
    throw Error(ErrorCode::InvalidProgram, "functional length differs from variable count");
  }
  const detail::StandardForm sf = detail::standard_form(prog);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(sf.a.cols());
  for (std::size_t j = 0; j < functional.size(); ++j) c(static_cast<Eigen::Index>(j)) = functional[j];
  const lp::Result lo = lp::solve(sf.a, sf.b, c);
  if (lo.status != lp::Status::Optimal) throw Error(ErrorCode::Infeasible, "constraint polytope is empty");
  const lp::Result hi = lp::solve(sf.a, sf.b, -c);
  if (hi.status != lp::Status::Optimal) throw Error(ErrorCode::Infeasible, "constraint polytope is empty");
  return {lo.objective, -hi.objective};
}

struct GridResult {
  double value = -std::numeric_limits<double>::infinity();
  std::vector<double> argmax;
  /// True when every accepted grid point was moved onto the exact feasible set.
  bool exact = false;
};

/// Brute-force oracle: best objective over the rational simplex points with
/// denominator `resolution` that satisfy the constraints within slack
/// 2/resolution (scaled by each functional's range). With a single constraint
/// row, each accepted point is first mixed with a vertex so it is exactly
/// feasible, making the result a true lower bound for the program's maximum.
inline GridResult grid_maximize(const EntropyProgram& prog, int resolution) {
  prog.validate();
  if (prog.blocks.size() != 1) throw Error(ErrorCode::InvalidArgument, "grid oracle supports a single simplex");
  const std::size_t m = prog.blocks[0];
  if (m > 5) throw Error(ErrorCode::InvalidArgument, "grid oracle supports alphabets of size <= 5");
  if (resolution < 1 || resolution > 400) throw Error(ErrorCode::InvalidArgument, "resolution must be in [1, 400]");

  struct Row {
    std::vector<double> g;
    double lower, upper, slack, gmin, gmax;
    std::size_t argmin, argmax;
  };
  std::vector<Row> rows;
  auto add_row = [&](const std::vector<double>& g, double lower, double upper) {
    Row r{g, lower, upper, 0.0, 0.0, 0.0, 0, 0};
    const auto [mn, mx] = std::minmax_element(g.begin(), g.end());
    r.gmin = *mn;
    r.gmax = *mx;
    r.argmin = static_cast<std::size_t>(mn - g.begin());
    r.argmax = static_cast<std::size_t>(mx - g.begin());
    r.slack = 2.0 / resolution * (r.gmax - r.gmin) + 1e-12 * (1.0 + std::abs(lower) + std::abs(upper));
    rows.push_back(std::move(r));
  };
  for (const auto& e : prog.equalities) add_row(e.coeffs, e.target, e.target);
  for (const auto& b : prog.boxes) add_row(b.coeffs, b.lower, b.upper);
  const bool reproject = rows.size() == 1;

  GridResult best;
  best.exact = reproject || rows.empty();
  std::vector<int> counts(m, 0);
  std::vector<double> p(m);
  // Enumerate compositions of `resolution` into m nonnegative parts.
  auto visit = [&]() {
    for (std::size_t i = 0; i < m; ++i) p[i] = static_cast<double>(counts[i]) / resolution;
    for (const auto& r : rows) {
      double v = 0.0;
      for (std::size_t i = 0; i < m; ++i) v += r.g[i] * p[i];
      if (v < r.lower - r.slack || v > r.upper + r.slack) return;
      if (reproject && (v < r.lower || v > r.upper)) {
        const double target = v < r.lower ? r.lower : r.upper;
        const std::size_t vertex = v < r.lower ? r.argmax : r.argmin;
        const double gv = r.g[vertex];
        if ((v < r.lower && gv < target) || (v > r.upper && gv > target)) return;
        const double s = (target - v) / (gv - v);
        for (double& x : p) x *= (1.0 - s);
        p[vertex] += s;
      }
    }
    const double val = prog.objective(p);
    if (val > best.value) {
      best.value = val;
      best.argmax = p;
    }
  };
  // Odometer over the first m-1 parts; the last takes the remainder.
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
    if (i + 1 == m) {
      counts[i] = left;
      visit();
      return;
    }
    for (int c = 0; c <= left; ++c) {
      counts[i] = c;
      rec(i + 1, left - c);
    }
  };
  rec(0, resolution);
  if (best.argmax.empty()) throw Error(ErrorCode::NoFeasibleGridPoint, "no grid point satisfies the constraints");
  return best;
}

}  // namespace sponge
