#pragma once

// Local dimension of Bernoulli measures on a sponge satisfying the very strong
// separation condition (assumed, never checked).
//
// With marg_j(i) the p-mass of the level-j class of digit i,
//   P_j(i) = log(marg_j(i) / marg_{j+1}(i)) / log a_j   (j < d)
//   P_d(i) = log(marg_d(i)) / log a_d
// and the local dimension of mu_p at mu_q-typical points is
//   -sum_j sum_i q_i P_j(i).

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "sponge/dimension.hpp"
#include "sponge/measures.hpp"
#include "sponge/optimize.hpp"
#include "sponge/spectra.hpp"
#include "sponge/sponge.hpp"

namespace sponge {

inline constexpr double kOneDimensionalTolerance = 1e-12;

struct LocalDimSetup {
  SpongeSpec spec;
  ProbVector p;
  /// pj[i][j-1] = P_j at digit i (canonical order).
  std::vector<std::vector<double>> pj;
  /// Level k at which the measure is one dimensional, if any.
  std::optional<std::size_t> level;
  /// Constant values of P_j for j != level (entry level-1 is unused).
  std::vector<double> constants;

  /// P_j as a scalar potential over the digits.
  Potential level_potential(std::size_t j) const {
    std::vector<double> v;
    for (const auto& row : pj) v.push_back(row[j - 1]);
    return Potential::scalar(spec, v);
  }

  /// -(P_1 + ... + P_d) as a scalar potential.
  Potential total_potential() const {
    std::vector<double> v;
    for (const auto& row : pj) {
      CompensatedSum s;
      for (double x : row) s += x;
      v.push_back(-s.value());
    }
    return Potential::scalar(spec, v);
  }
};

namespace detail {

// Returns (smallest k, constants) if p is one dimensional at level k.
inline std::optional<std::pair<std::size_t, std::vector<double>>> one_dimensional_level(
    const SpongeSpec& spec, const std::vector<std::vector<double>>& marg) {
  const std::size_t d = spec.dim();
  const std::size_t m = spec.digit_count();
  // holds[j-1]: P_j takes its "flat" value at every digit.
  std::vector<bool> holds(d, true);
  std::vector<double> flat(d, 0.0);
  for (std::size_t j = 1; j <= d; ++j) {
    const double count = static_cast<double>(spec.alphabet(j).size());
    const double log_a = std::log(static_cast<double>(spec.base(j)));
    if (j < d) {
      const double next = static_cast<double>(spec.alphabet(j + 1).size());
      flat[j - 1] = std::log(next / count) / log_a;
      for (std::size_t i = 0; i < m && holds[j - 1]; ++i) {
        if (std::abs(marg[j - 1][i] / marg[j][i] - next / count) > kOneDimensionalTolerance) holds[j - 1] = false;
      }
    } else {
      flat[j - 1] = -std::log(count) / log_a;
      for (std::size_t i = 0; i < m && holds[j - 1]; ++i) {
        if (std::abs(marg[j - 1][i] - 1.0 / count) > kOneDimensionalTolerance) holds[j - 1] = false;
      }
    }
  }
  for (std::size_t k = 1; k <= d; ++k) {
    bool ok = true;
    for (std::size_t j = 1; j <= d && ok; ++j) ok = j == k || holds[j - 1];
    if (ok) return std::make_pair(k, flat);
  }
  return std::nullopt;
}

}  // namespace detail

inline LocalDimSetup pj_potential(const SpongeSpec& spec, const ProbVector& p) {
  if (p.alphabet() != spec.digits()) throw Error(ErrorCode::AlphabetMismatch, "measure is not over the digit set");
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(p[i] > 0.0)) throw Error(ErrorCode::ZeroProbabilityDigit, "digit " + to_string(spec.digits()[i]) + " has zero probability");
  }
  const std::size_t d = spec.dim();
  const std::size_t m = spec.digit_count();
  // marg[j-1][i]: mass of the level-j class of digit i.
  std::vector<std::vector<double>> marg(d, std::vector<double>(m));
  for (std::size_t j = 1; j <= d; ++j) {
    const ProbVector q = marginal(spec, p, j);
    const auto& class_of = spec.class_of(j);
    for (std::size_t i = 0; i < m; ++i) marg[j - 1][i] = q[static_cast<std::size_t>(class_of[i])];
  }
  std::vector<std::vector<double>> pj(m, std::vector<double>(d));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 1; j <= d; ++j) {
      const double log_a = std::log(static_cast<double>(spec.base(j)));
      pj[i][j - 1] = j < d ? std::log(marg[j - 1][i] / marg[j][i]) / log_a : std::log(marg[j - 1][i]) / log_a;
    }
  }
  LocalDimSetup setup{spec, p, std::move(pj), std::nullopt, {}};
  if (auto one = detail::one_dimensional_level(spec, marg)) {
    setup.level = one->first;
    setup.constants = std::move(one->second);
  }
  return setup;
}

inline double local_dim_value(const LocalDimSetup& setup, const ProbVector& q) {
  if (q.alphabet() != setup.spec.digits()) throw Error(ErrorCode::AlphabetMismatch, "measure is not over the digit set");
  CompensatedSum s;
  for (std::size_t i = 0; i < q.size(); ++i) {
    for (double x : setup.pj[i]) s += -q[i] * x;
  }
  return s.value();
}

inline Interval localdim_domain(const LocalDimSetup& setup) {
  return birkhoff_domain(setup.spec, setup.total_potential());
}

inline std::optional<std::size_t> is_one_dimensional(const LocalDimSetup& setup) { return setup.level; }

/// Packing dimension of the set of points where mu_p has local dimension
/// alpha, for one-dimensional p.
inline double localdim_packing_exact(const LocalDimSetup& setup, double alpha, const SolverOptions& opt = {}) {
  if (!setup.level) throw Error(ErrorCode::NotOneDimensional, "measure is not one dimensional");
  const std::size_t k = *setup.level;
  const Potential total = setup.total_potential();
  const double level = admissible_level(setup.spec, total, std::span<const double>(&alpha, 1))[0];
  CompensatedSum offset;
  for (std::size_t j = 1; j <= setup.spec.dim(); ++j) {
    if (j != k) offset += setup.constants[j - 1];
  }
  const Potential pk = setup.level_potential(k);
  // Clamp the level onto A(P_k) to absorb the rounding of the offset.
  const Interval dom = birkhoff_domain(setup.spec, pk);
  const double beta = std::clamp(-level - offset.value(), dom.lo, dom.hi);
  return packing_spectrum_point(setup.spec, pk, beta, opt);
}

/// Lower bound for the same packing dimension, valid for every p:
///   max w_1 h(p^1) + sum_{k>=2} w_k h(eta_k p^k)
/// over p^1..p^d sharing every P_j-mean, with -sum_j mean(P_j) = alpha.
inline double localdim_packing_lower(const LocalDimSetup& setup, double alpha, const SolverOptions& opt = {}) {
  const SpongeSpec& spec = setup.spec;
  const std::size_t d = spec.dim();
  const std::size_t m = spec.digit_count();
  const double level = admissible_level(spec, setup.total_potential(), std::span<const double>(&alpha, 1))[0];

  EntropyProgram prog;
  prog.blocks.assign(d, m);
  const Weights weights = dimension_weights(spec);
  for (std::size_t k = 1; k <= d; ++k) prog.terms.push_back(level_term(spec, k, weights.w[k - 1], k - 1));
  for (std::size_t k = 2; k <= d; ++k) {
    for (std::size_t j = 0; j < d; ++j) {
      std::vector<double> coeffs(d * m, 0.0);
      for (std::size_t i = 0; i < m; ++i) {
        coeffs[i] = -setup.pj[i][j];
        coeffs[(k - 1) * m + i] = setup.pj[i][j];
      }
      prog.equalities.push_back({std::move(coeffs), 0.0});
    }
  }
  std::vector<double> coeffs(d * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (double x : setup.pj[i]) coeffs[i] -= x;
  }
  prog.equalities.push_back({std::move(coeffs), level});
  return detail::solved_value(prog, opt);
}

}  // namespace sponge
