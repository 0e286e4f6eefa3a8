#pragma once

// Dimensions of the sponge itself.

#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "sponge/measures.hpp"
#include "sponge/optimize.hpp"
#include "sponge/sponge.hpp"

namespace sponge {

/// Objective term h(eta_k p) on block `block` of a program over the digit set.
inline EntropyTerm level_term(const SpongeSpec& spec, std::size_t level, double coefficient, std::size_t block = 0) {
  Projection proj;
  proj.class_of = spec.class_of(level);
  proj.classes = static_cast<int>(spec.alphabet(level).size());
  return {block, std::move(proj), coefficient};
}

/// Adds the weighted-entropy objective w_1 h(p) + sum w_k h(eta_k p) on `block`.
inline void add_weighted_entropy_terms(const SpongeSpec& spec, EntropyProgram& prog, std::size_t block = 0) {
  const Weights weights = dimension_weights(spec);
  for (std::size_t level = 1; level <= spec.dim(); ++level) {
    prog.terms.push_back(level_term(spec, level, weights.w[level - 1], block));
  }
}

/// Normalizes a block of solver output into a probability vector over `alphabet`.
inline ProbVector to_prob_vector(const std::vector<Digit>& alphabet, std::vector<double> x) {
  CompensatedSum s;
  for (double& v : x) {
    v = std::max(v, 0.0);
    s += v;
  }
  for (double& v : x) v /= s.value();
  return ProbVector(alphabet, std::move(x));
}

inline double packing_dimension(const SpongeSpec& spec) {
  const Weights weights = dimension_weights(spec);
  CompensatedSum s;
  for (std::size_t level = 1; level <= spec.dim(); ++level) {
    s += weights.w[level - 1] * std::log(static_cast<double>(spec.alphabet(level).size()));
  }
  return s.value();
}

struct HausdorffResult {
  double value = 0.0;
  ProbVector maximizer;
  OptReport report;
};

/// Kenyon-Peres variational formula, maximized over Bernoulli measures.
inline HausdorffResult hausdorff_dimension(const SpongeSpec& spec, const SolverOptions& opt = {}) {
  EntropyProgram prog = EntropyProgram::simplex(spec.digit_count());
  add_weighted_entropy_terms(spec, prog);
  OptReport report = maximize_entropy_program(prog, opt);
  ProbVector p = to_prob_vector(spec.digits(), report.maximizer);
  return {report.value, std::move(p), std::move(report)};
}

/// Bedford-McMullen closed form for carpets (d = 2).
inline double mcmullen_closed_form(const SpongeSpec& spec) {
  if (spec.dim() != 2) throw Error(ErrorCode::NotTwoDimensional, "closed form needs a two-dimensional sponge");
  const double log_a1 = std::log(static_cast<double>(spec.base(1)));
  const double log_a2 = std::log(static_cast<double>(spec.base(2)));
  std::vector<int> row_sizes(spec.alphabet(2).size(), 0);
  for (int c : spec.class_of(2)) ++row_sizes[static_cast<std::size_t>(c)];
  CompensatedSum s;
  for (int n : row_sizes) s += std::pow(static_cast<double>(n), log_a2 / log_a1);
  return std::log(s.value()) / log_a2;
}

/// Hausdorff (= packing) dimension of the frequency set of p.
inline double nielsen_dimension(const SpongeSpec& spec, const ProbVector& p) { return weighted_entropy(spec, p); }

struct DimensionReport {
  double hausdorff = 0.0;
  double packing = 0.0;
  std::optional<double> mcmullen;
  std::vector<std::pair<std::int64_t, double>> box_estimates;
  ProbVector optimizer;
};

inline DimensionReport dimension_report(const SpongeSpec& spec, const std::vector<std::int64_t>& box_levels = {100, 1000, 10000},
                                        const SolverOptions& opt = {}) {
  HausdorffResult h = hausdorff_dimension(spec, opt);
  DimensionReport r{h.value, packing_dimension(spec), std::nullopt, {}, std::move(h.maximizer)};
  if (spec.dim() == 2) r.mcmullen = mcmullen_closed_form(spec);
  for (auto n : box_levels) r.box_estimates.emplace_back(n, box_dim_estimate(spec, n));
  return r;
}

}  // namespace sponge
