#pragma once

// Multifractal spectra of Birkhoff averages for locally constant potentials.
//
// For a locally constant potential every level entropy H^k(alpha) is attained
// by a Bernoulli measure, so each spectrum value reduces to finite entropy
// programs over the digit simplex:
//   packing   : sum_k w_k max{ h(eta_k p) : mean_phi(p) = alpha }   (d solves)
//   Hausdorff : max{ sum_k w_k h(eta_k p) : mean_phi(p) = alpha }    (1 solve)

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <thread>
#include <vector>

#include "sponge/dimension.hpp"
#include "sponge/measures.hpp"
#include "sponge/optimize.hpp"
#include "sponge/sponge.hpp"

namespace sponge {

/// Levels within this distance of an endpoint of A(phi) are snapped onto it.
inline constexpr double kDomainSnap = 1e-10;

namespace detail {

inline EntropyProgram mean_constrained_program(const SpongeSpec& spec, const Potential& phi,
                                               std::span<const double> alpha) {
  if (phi.digit_count() != spec.digit_count()) throw Error(ErrorCode::InvalidPotential, "potential does not match sponge");
  if (alpha.size() != phi.components()) throw Error(ErrorCode::InvalidArgument, "level has wrong number of components");
  EntropyProgram prog = EntropyProgram::simplex(spec.digit_count());
  for (std::size_t c = 0; c < phi.components(); ++c) prog.equalities.push_back({phi.column(c), alpha[c]});
  return prog;
}

inline double solved_value(const EntropyProgram& prog, const SolverOptions& opt) {
  const OptReport r = maximize_entropy_program(prog, opt);
  if (r.status == OptStatus::Infeasible) throw Error(ErrorCode::OutsideDomain, "level not attained by any measure");
  return r.value;
}

}  // namespace detail

/// A(phi) for a scalar potential: [min phi, max phi], computed by LP.
inline Interval birkhoff_domain(const SpongeSpec& spec, const Potential& phi) {
  if (phi.components() != 1) throw Error(ErrorCode::InvalidArgument, "interval domain needs a scalar potential");
  if (phi.digit_count() != spec.digit_count()) throw Error(ErrorCode::InvalidPotential, "potential does not match sponge");
  return feasible_interval(EntropyProgram::simplex(spec.digit_count()), phi.column(0));
}

/// Membership alpha in A(phi) = conv{phi(i)}, for any number of components.
inline bool in_birkhoff_domain(const SpongeSpec& spec, const Potential& phi, std::span<const double> alpha) {
  const EntropyProgram prog = detail::mean_constrained_program(spec, phi, alpha);
  try {
    feasible_interval(prog, std::vector<double>(prog.variable_count(), 0.0));
    return true;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Infeasible) return false;
    throw;
  }
}

/// Returns alpha snapped onto A(phi), or throws OutsideDomain.
inline std::vector<double> admissible_level(const SpongeSpec& spec, const Potential& phi, std::span<const double> alpha) {
  std::vector<double> out(alpha.begin(), alpha.end());
  if (phi.components() == 1 && alpha.size() == 1) {
    const Interval dom = birkhoff_domain(spec, phi);
    const double tol = kDomainSnap * std::max(1.0, std::max(std::abs(dom.lo), std::abs(dom.hi)));
    if (out[0] < dom.lo - tol || out[0] > dom.hi + tol) {
      throw Error(ErrorCode::OutsideDomain, "level " + std::to_string(out[0]) + " outside A(phi)");
    }
    if (std::abs(out[0] - dom.lo) <= tol) out[0] = dom.lo;
    if (std::abs(out[0] - dom.hi) <= tol) out[0] = dom.hi;
    return out;
  }
  if (!in_birkhoff_domain(spec, phi, alpha)) throw Error(ErrorCode::OutsideDomain, "level outside A(phi)");
  return out;
}

/// H^k(alpha) for k = 1..d.
inline std::vector<double> level_entropies(const SpongeSpec& spec, const Potential& phi, std::span<const double> alpha,
                                           const SolverOptions& opt = {}) {
  const std::vector<double> level = admissible_level(spec, phi, alpha);
  std::vector<double> out;
  for (std::size_t k = 1; k <= spec.dim(); ++k) {
    EntropyProgram prog = detail::mean_constrained_program(spec, phi, level);
    prog.terms.push_back(level_term(spec, k, 1.0));
    out.push_back(detail::solved_value(prog, opt));
  }
  return out;
}

inline double packing_spectrum_point(const SpongeSpec& spec, const Potential& phi, std::span<const double> alpha,
                                     const SolverOptions& opt = {}) {
  const Weights weights = dimension_weights(spec);
  const std::vector<double> h = level_entropies(spec, phi, alpha, opt);
  CompensatedSum s;
  for (std::size_t k = 0; k < h.size(); ++k) s += weights.w[k] * h[k];
  return s.value();
}

inline double packing_spectrum_point(const SpongeSpec& spec, const Potential& phi, double alpha,
                                     const SolverOptions& opt = {}) {
  return packing_spectrum_point(spec, phi, std::span<const double>(&alpha, 1), opt);
}

inline double hausdorff_spectrum_point(const SpongeSpec& spec, const Potential& phi, std::span<const double> alpha,
                                       const SolverOptions& opt = {}) {
  const std::vector<double> level = admissible_level(spec, phi, alpha);
  EntropyProgram prog = detail::mean_constrained_program(spec, phi, level);
  add_weighted_entropy_terms(spec, prog);
  return detail::solved_value(prog, opt);
}

inline double hausdorff_spectrum_point(const SpongeSpec& spec, const Potential& phi, double alpha,
                                       const SolverOptions& opt = {}) {
  return hausdorff_spectrum_point(spec, phi, std::span<const double>(&alpha, 1), opt);
}

/// Packing dimension of the points whose Birkhoff averages accumulate on the
/// box A (one interval per component).
inline double divergence_spectrum(const SpongeSpec& spec, const Potential& phi, const std::vector<Interval>& box,
                                  const SolverOptions& opt = {}) {
  if (box.size() != phi.components()) throw Error(ErrorCode::InvalidArgument, "box needs one interval per component");
  if (phi.digit_count() != spec.digit_count()) throw Error(ErrorCode::InvalidPotential, "potential does not match sponge");
  EntropyProgram base = EntropyProgram::simplex(spec.digit_count());
  for (std::size_t c = 0; c < phi.components(); ++c) {
    if (!(box[c].lo <= box[c].hi)) throw Error(ErrorCode::InvalidArgument, "box interval with lo > hi");
    base.boxes.push_back({phi.column(c), box[c].lo, box[c].hi});
  }
  try {
    feasible_interval(base, std::vector<double>(base.variable_count(), 0.0));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Infeasible) throw Error(ErrorCode::OutsideDomain, "box does not meet A(phi)");
    throw;
  }
  const Weights weights = dimension_weights(spec);
  CompensatedSum s;
  for (std::size_t k = 1; k <= spec.dim(); ++k) {
    EntropyProgram prog = base;
    prog.terms.push_back(level_term(spec, k, 1.0));
    s += weights.w[k - 1] * detail::solved_value(prog, opt);
  }
  return s.value();
}

/// Some alpha at which the packing spectrum reaches dim_P of the sponge, i.e.
/// a common mean of measures whose level-k marginals are uniform on eta_k(D).
/// Returns the witness with the smallest first component, or nullopt.
inline std::optional<std::vector<double>> full_dim_attainment(const SpongeSpec& spec, const Potential& phi) {
  if (phi.digit_count() != spec.digit_count()) throw Error(ErrorCode::InvalidPotential, "potential does not match sponge");
  const auto m = static_cast<Eigen::Index>(spec.digit_count());
  const auto d = static_cast<Eigen::Index>(spec.dim());
  const auto comps = static_cast<Eigen::Index>(phi.components());
  // Variables: p^(1..d) then s_c = alpha_c - min_c phi >= 0.
  const Eigen::Index cols = d * m + comps;
  Eigen::Index rows = d * comps;
  for (std::size_t k = 1; k <= spec.dim(); ++k) rows += static_cast<Eigen::Index>(spec.alphabet(k).size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(rows, cols);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(rows);
  std::vector<double> shift(phi.components());
  for (std::size_t c = 0; c < phi.components(); ++c) {
    const auto col = phi.column(c);
    shift[c] = *std::min_element(col.begin(), col.end());
  }
  Eigen::Index r = 0;
  for (Eigen::Index k = 0; k < d; ++k) {
    const auto level = static_cast<std::size_t>(k + 1);
    const auto classes = static_cast<Eigen::Index>(spec.alphabet(level).size());
    const auto& class_of = spec.class_of(level);
    for (Eigen::Index tau = 0; tau < classes; ++tau) {
      for (Eigen::Index i = 0; i < m; ++i) {
        if (class_of[static_cast<std::size_t>(i)] == tau) a(r, k * m + i) = 1.0;
      }
      b(r++) = 1.0 / static_cast<double>(classes);
    }
    for (Eigen::Index c = 0; c < comps; ++c) {
      for (Eigen::Index i = 0; i < m; ++i) a(r, k * m + i) = phi.value(static_cast<std::size_t>(i), static_cast<std::size_t>(c));
      a(r, d * m + c) = -1.0;
      b(r++) = shift[static_cast<std::size_t>(c)];
    }
  }
  Eigen::VectorXd cost = Eigen::VectorXd::Zero(cols);
  cost(d * m) = 1.0;
  const lp::Result res = lp::solve(a, b, cost);
  if (res.status != lp::Status::Optimal) return std::nullopt;
  std::vector<double> alpha;
  for (Eigen::Index c = 0; c < comps; ++c) alpha.push_back(shift[static_cast<std::size_t>(c)] + res.x(d * m + c));
  return alpha;
}

// ---------------------------------------------------------------------------
// Curves

enum class SpectrumKind { PackingBirkhoff, HausdorffBirkhoff, LocalDim, LocalDimLower };

constexpr std::string_view to_string(SpectrumKind k) {
  switch (k) {
    case SpectrumKind::PackingBirkhoff: return "PackingBirkhoff";
    case SpectrumKind::HausdorffBirkhoff: return "HausdorffBirkhoff";
    case SpectrumKind::LocalDim: return "LocalDim";
    case SpectrumKind::LocalDimLower: return "LocalDimLower";
  }
  return "Unknown";
}

inline std::optional<SpectrumKind> parse_spectrum_kind(std::string_view s) {
  for (auto k : {SpectrumKind::PackingBirkhoff, SpectrumKind::HausdorffBirkhoff, SpectrumKind::LocalDim,
                 SpectrumKind::LocalDimLower}) {
    if (s == to_string(k)) return k;
  }
  return std::nullopt;
}

/// A non-smooth point, localized to alpha +- uncertainty.
struct Transition {
  double alpha = 0.0;
  double uncertainty = 0.0;
};

struct SpectrumCurve {
  SpectrumKind kind = SpectrumKind::PackingBirkhoff;
  std::vector<double> grid;                   // strictly increasing
  std::vector<std::optional<double>> values;  // nullopt: alpha outside the domain
  std::vector<Transition> transitions;

  std::size_t dropped() const {
    return static_cast<std::size_t>(std::count(values.begin(), values.end(), std::nullopt));
  }

  /// Whether grid point i lies within the localization of a transition.
  bool is_transition_row(std::size_t i) const {
    for (const auto& t : transitions) {
      if (std::abs(grid[i] - t.alpha) <= t.uncertainty * (1 + 1e-9)) return true;
    }
    return false;
  }
};

struct GridSpec {
  std::size_t count = 201;
  std::optional<Interval> range;  // defaults to the full domain
};

inline std::vector<double> uniform_grid(Interval range, std::size_t count) {
  if (count == 0) return {};
  if (count == 1 || range.lo == range.hi) return {range.lo};
  std::vector<double> g(count);
  for (std::size_t i = 0; i < count; ++i) {
    g[i] = range.lo + (range.hi - range.lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  g.back() = range.hi;
  return g;
}

namespace detail {

// Index range [first, last) of the longest run of present values.
inline std::pair<std::size_t, std::size_t> present_run(const SpectrumCurve& curve) {
  std::size_t best_first = 0, best_len = 0, first = 0;
  for (std::size_t i = 0; i <= curve.values.size(); ++i) {
    if (i == curve.values.size() || !curve.values[i]) {
      if (i - first > best_len) {
        best_len = i - first;
        best_first = first;
      }
      first = i + 1;
    }
  }
  return {best_first, best_first + best_len};
}

inline double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const auto mid = v.begin() + static_cast<long>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  if (v.size() % 2 == 1) return *mid;
  const double hi = *mid;
  return 0.5 * (hi + *std::max_element(v.begin(), mid));
}

}  // namespace detail

/// Flags jumps of the second difference. Let D2 be the centered second
/// differences and J_i = D2_{i+1} - D2_i. A jump J_i is flagged when it exceeds
/// 5x the median |J|, an absolute noise floor, and 5x every |J| two and three
/// steps away on both sides (so smooth growth towards a singular endpoint is
/// not flagged). Adjacent flags merge into one transition reported with one
/// grid step of uncertainty. Jumps within three steps of either end of the
/// evaluated run cannot be localized and are not reported.
inline std::vector<Transition> detect_phase_transitions(const SpectrumCurve& curve) {
  const auto [first, last] = detail::present_run(curve);
  const std::size_t n = last - first;
  if (n < 5) throw Error(ErrorCode::GridTooCoarse, "phase-transition detection needs at least 5 grid points");
  std::vector<double> a(curve.grid.begin() + static_cast<long>(first), curve.grid.begin() + static_cast<long>(last));
  std::vector<double> v;
  for (std::size_t i = first; i < last; ++i) v.push_back(*curve.values[i]);
  const double h = (a.back() - a.front()) / static_cast<double>(n - 1);
  for (std::size_t i = 1; i < n; ++i) {
    if (std::abs((a[i] - a[i - 1]) - h) > 1e-6 * std::abs(h)) {
      throw Error(ErrorCode::InvalidArgument, "phase-transition detection needs a uniform grid");
    }
  }

  std::vector<double> d2(n, 0.0);  // d2[i] defined for 1..n-2
  for (std::size_t i = 1; i + 1 < n; ++i) d2[i] = v[i - 1] - 2.0 * v[i] + v[i + 1];
  std::vector<double> jump(n, 0.0);  // jump[i] = d2[i+1] - d2[i], defined for 1..n-3
  std::vector<double> mags;
  for (std::size_t i = 1; i + 2 < n; ++i) {
    jump[i] = std::abs(d2[i + 1] - d2[i]);
    mags.push_back(jump[i]);
  }
  double scale = 1.0;
  for (double x : v) scale = std::max(scale, std::abs(x));
  const double theta = std::max(5.0 * detail::median(mags), 1e-9 * scale);

  std::vector<std::size_t> flagged;
  for (std::size_t i = 4; i + 5 < n; ++i) {
    if (jump[i] <= theta) continue;
    const double neighbours = std::max({jump[i - 3], jump[i - 2], jump[i + 2], jump[i + 3]});
    if (jump[i] > 5.0 * neighbours) flagged.push_back(i);
  }

  std::vector<Transition> out;
  for (std::size_t k = 0; k < flagged.size();) {
    std::size_t end = k;
    while (end + 1 < flagged.size() && flagged[end + 1] == flagged[end] + 1) ++end;
    double centre = 0.0;
    for (std::size_t j = k; j <= end; ++j) centre += 0.5 * (a[flagged[j]] + a[flagged[j] + 1]);
    out.push_back({centre / static_cast<double>(end - k + 1), h});
    k = end + 1;
  }
  return out;
}

struct ConcavityReport {
  bool pass = true;
  double max_violation = 0.0;  // largest positive second difference
};

inline ConcavityReport verify_concavity(const SpectrumCurve& curve, double relative_tolerance = 1e-7) {
  const auto [first, last] = detail::present_run(curve);
  ConcavityReport r;
  double scale = 1.0;
  for (std::size_t i = first; i < last; ++i) scale = std::max(scale, std::abs(*curve.values[i]));
  for (std::size_t i = first + 1; i + 1 < last; ++i) {
    const double d2 = *curve.values[i - 1] - 2.0 * *curve.values[i] + *curve.values[i + 1];
    r.max_violation = std::max(r.max_violation, d2);
  }
  r.pass = r.max_violation <= relative_tolerance * scale;
  return r;
}

/// Evaluates `eval` on every grid point, with up to `jobs` worker threads
/// (0: hardware concurrency). OutsideDomain points are recorded as absent.
inline SpectrumCurve sample_curve(SpectrumKind kind, std::vector<double> grid,
                                  const std::function<double(double)>& eval, unsigned jobs = 0) {
  SpectrumCurve curve;
  curve.kind = kind;
  curve.grid = std::move(grid);
  curve.values.assign(curve.grid.size(), std::nullopt);
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(1, curve.grid.size())));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= curve.grid.size() || failed) return;
      try {
        curve.values[i] = eval(curve.grid[i]);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::OutsideDomain && !failed.exchange(true)) failure = std::current_exception();
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  const auto [first, last] = detail::present_run(curve);
  if (last - first >= 5) curve.transitions = detect_phase_transitions(curve);
  return curve;
}

/// Packing or Hausdorff spectrum of a scalar potential sampled on a uniform grid.
inline SpectrumCurve spectrum_curve(const SpongeSpec& spec, const Potential& phi, const GridSpec& grid,
                                    SpectrumKind kind, const SolverOptions& opt = {}, unsigned jobs = 0) {
  if (kind != SpectrumKind::PackingBirkhoff && kind != SpectrumKind::HausdorffBirkhoff) {
    throw Error(ErrorCode::InvalidArgument, "Birkhoff curves are packing or Hausdorff");
  }
  if (grid.count < 3) throw Error(ErrorCode::GridTooCoarse, "curves need at least 3 grid points");
  const Interval dom = birkhoff_domain(spec, phi);
  const Interval range = grid.range.value_or(dom);
  std::vector<double> points = dom.lo == dom.hi && !grid.range ? std::vector<double>{dom.lo} : uniform_grid(range, grid.count);
  auto eval = [&](double alpha) {
    return kind == SpectrumKind::PackingBirkhoff ? packing_spectrum_point(spec, phi, alpha, opt)
                                                 : hausdorff_spectrum_point(spec, phi, alpha, opt);
  };
  return sample_curve(kind, std::move(points), eval, jobs);
}

/// Spectrum of a vector potential along the segment start + t (end - start),
/// t in [0, 1]; the curve's grid holds t.
inline SpectrumCurve spectrum_curve_segment(const SpongeSpec& spec, const Potential& phi, const std::vector<double>& start,
                                            const std::vector<double>& end, std::size_t count, SpectrumKind kind,
                                            const SolverOptions& opt = {}, unsigned jobs = 0) {
  if (start.size() != phi.components() || end.size() != phi.components()) {
    throw Error(ErrorCode::InvalidArgument, "segment endpoints need one entry per component");
  }
  if (count < 3) throw Error(ErrorCode::GridTooCoarse, "curves need at least 3 grid points");
  auto eval = [&](double t) {
    std::vector<double> alpha(start.size());
    for (std::size_t c = 0; c < start.size(); ++c) alpha[c] = start[c] + t * (end[c] - start[c]);
    return kind == SpectrumKind::PackingBirkhoff ? packing_spectrum_point(spec, phi, alpha, opt)
                                                 : hausdorff_spectrum_point(spec, phi, alpha, opt);
  };
  return sample_curve(kind, uniform_grid({0.0, 1.0}, count), eval, jobs);
}

}  // namespace sponge
