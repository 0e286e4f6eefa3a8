#pragma once

// Bernoulli measures on a sponge: probability vectors over the digit set (or a
// projected alphabet), their entropies and marginals, and the weighted
// entropy that gives the dimension of the measure's frequency set.

#include <cmath>
#include <span>
#include <vector>

#include "sponge/error.hpp"
#include "sponge/numeric.hpp"
#include "sponge/sponge.hpp"

namespace sponge {

inline constexpr double kSimplexSumTolerance = 1e-12;
inline constexpr double kNegativeClampTolerance = 1e-14;

/// Probability vector keyed by an alphabet of digits (canonical order).
class ProbVector {
 public:
  /// Validates and clamps tiny negatives to zero.
  ProbVector(std::vector<Digit> alphabet, std::vector<double> probs) : alphabet_(std::move(alphabet)) {
    if (alphabet_.size() != probs.size()) {
      throw Error(ErrorCode::InvalidProbVector, "alphabet and probability lengths differ");
    }
    if (alphabet_.empty()) throw Error(ErrorCode::InvalidProbVector, "empty alphabet");
    if (!std::is_sorted(alphabet_.begin(), alphabet_.end()) ||
        std::adjacent_find(alphabet_.begin(), alphabet_.end()) != alphabet_.end()) {
      throw Error(ErrorCode::InvalidProbVector, "alphabet must be strictly increasing");
    }
    CompensatedSum total;
    for (double& p : probs) {
      if (!std::isfinite(p) || p < -kNegativeClampTolerance) {
        throw Error(ErrorCode::InvalidProbVector, "entries must be finite and nonnegative");
      }
      if (p < 0.0) p = 0.0;
      total += p;
    }
    if (std::abs(total.value() - 1.0) > kSimplexSumTolerance) {
      throw Error(ErrorCode::InvalidProbVector, "entries sum to " + std::to_string(total.value()));
    }
    probs_ = std::move(probs);
  }

  /// Probability vector over the full digit set of `spec`.
  static ProbVector over(const SpongeSpec& spec, std::vector<double> probs) {
    return ProbVector(spec.digits(), std::move(probs));
  }

  static ProbVector uniform(const std::vector<Digit>& alphabet) {
    return ProbVector(alphabet, std::vector<double>(alphabet.size(), 1.0 / static_cast<double>(alphabet.size())));
  }

  static ProbVector point_mass(const std::vector<Digit>& alphabet, const Digit& at) {
    std::vector<double> probs(alphabet.size(), 0.0);
    auto it = std::lower_bound(alphabet.begin(), alphabet.end(), at);
    if (it == alphabet.end() || *it != at) throw Error(ErrorCode::AlphabetMismatch, to_string(at) + " not in alphabet");
    probs[static_cast<std::size_t>(it - alphabet.begin())] = 1.0;
    return ProbVector(alphabet, std::move(probs));
  }

  const std::vector<Digit>& alphabet() const { return alphabet_; }
  std::span<const double> probs() const { return probs_; }
  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }

  double at(const Digit& d) const {
    auto it = std::lower_bound(alphabet_.begin(), alphabet_.end(), d);
    if (it == alphabet_.end() || *it != d) throw Error(ErrorCode::AlphabetMismatch, to_string(d) + " not in alphabet");
    return probs_[static_cast<std::size_t>(it - alphabet_.begin())];
  }

 private:
  std::vector<Digit> alphabet_;
  std::vector<double> probs_;
};

/// Locally constant potential: one R^N vector per digit (canonical order).
class Potential {
 public:
  Potential(const SpongeSpec& spec, std::vector<std::vector<double>> values) : values_(std::move(values)) {
    if (values_.size() != spec.digit_count()) {
      throw Error(ErrorCode::InvalidPotential, "potential must give one value per digit");
    }
    components_ = values_.front().size();
    if (components_ == 0) throw Error(ErrorCode::InvalidPotential, "potential values must be nonempty");
    for (const auto& v : values_) {
      if (v.size() != components_) throw Error(ErrorCode::InvalidPotential, "ragged potential values");
      for (double x : v) {
        if (!std::isfinite(x)) throw Error(ErrorCode::InvalidPotential, "potential values must be finite");
      }
    }
  }

  static Potential scalar(const SpongeSpec& spec, const std::vector<double>& values) {
    std::vector<std::vector<double>> v;
    for (double x : values) v.push_back({x});
    return Potential(spec, std::move(v));
  }

  /// Indicator of a single digit.
  static Potential indicator(const SpongeSpec& spec, const Digit& digit) {
    const int idx = spec.index_of(digit);
    if (idx < 0) throw Error(ErrorCode::AlphabetMismatch, to_string(digit) + " not a digit of the sponge");
    std::vector<double> v(spec.digit_count(), 0.0);
    v[static_cast<std::size_t>(idx)] = 1.0;
    return scalar(spec, v);
  }

  std::size_t components() const { return components_; }
  std::size_t digit_count() const { return values_.size(); }
  const std::vector<double>& value(std::size_t digit_index) const { return values_[digit_index]; }
  double value(std::size_t digit_index, std::size_t component) const { return values_[digit_index][component]; }

  /// Component `c` as a column over the digits.
  std::vector<double> column(std::size_t c) const {
    std::vector<double> out;
    out.reserve(values_.size());
    for (const auto& v : values_) out.push_back(v[c]);
    return out;
  }

  /// a * phi + b, componentwise.
  Potential affine(double a, double b) const {
    Potential out = *this;
    for (auto& v : out.values_) {
      for (double& x : v) x = a * x + b;
    }
    return out;
  }

 private:
  std::vector<std::vector<double>> values_;
  std::size_t components_ = 0;
};

inline double entropy(const ProbVector& p) { return shannon_entropy(p.probs()); }

/// Pushforward of `p` (over the digit set) to eta_k(D).
inline ProbVector marginal(const SpongeSpec& spec, const ProbVector& p, std::size_t level) {
  if (p.alphabet() != spec.digits()) throw Error(ErrorCode::AlphabetMismatch, "measure is not over the digit set");
  const auto& alphabet = projected_alphabet(spec, level);
  const auto& class_of = spec.class_of(level);
  std::vector<CompensatedSum> sums(alphabet.size());
  for (std::size_t i = 0; i < p.size(); ++i) sums[static_cast<std::size_t>(class_of[i])] += p[i];
  std::vector<double> q;
  q.reserve(sums.size());
  for (const auto& s : sums) q.push_back(s.value());
  return ProbVector(alphabet, std::move(q));
}

inline std::vector<double> potential_mean(const ProbVector& p, const Potential& phi) {
  if (p.size() != phi.digit_count()) throw Error(ErrorCode::AlphabetMismatch, "potential and measure sizes differ");
  std::vector<double> mean;
  for (std::size_t c = 0; c < phi.components(); ++c) {
    CompensatedSum s;
    for (std::size_t i = 0; i < p.size(); ++i) s += p[i] * phi.value(i, c);
    mean.push_back(s.value());
  }
  return mean;
}

/// w_1 h(p) + sum_{k>=2} w_k h(eta_k p).
inline double weighted_entropy(const SpongeSpec& spec, const ProbVector& p) {
  const Weights weights = dimension_weights(spec);
  CompensatedSum s;
  s += weights.w[0] * entropy(p);
  for (std::size_t level = 2; level <= spec.dim(); ++level) {
    s += weights.w[level - 1] * entropy(marginal(spec, p, level));
  }
  return s.value();
}

}  // namespace sponge
