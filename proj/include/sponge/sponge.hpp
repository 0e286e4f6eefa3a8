#pragma once

// Sponge specifications: bases, digit sets, coordinate projections, dimension
// weights and the exact approximate-square count.

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "sponge/error.hpp"
#include "sponge/numeric.hpp"

namespace sponge {

/// A tuple of coordinate indices, one per axis of the sponge (or of a
/// projected sponge).
struct Digit {
  std::vector<int> coords;

  Digit() = default;
  Digit(std::initializer_list<int> c) : coords(c) {}
  explicit Digit(std::vector<int> c) : coords(std::move(c)) {}

  std::size_t size() const { return coords.size(); }
  int operator[](std::size_t i) const { return coords[i]; }

  friend auto operator<=>(const Digit&, const Digit&) = default;
  friend bool operator==(const Digit&, const Digit&) = default;
};

inline std::string to_string(const Digit& d) {
  std::string s = "(";
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(d[i]);
  }
  return s + ")";
}

/// Unvalidated sponge description as read from a config file.
struct SpongeInput {
  std::vector<int> bases;
  std::vector<std::vector<int>> digits;
};

/// Dimension weights of a sponge. `lambda[j] = log a_d / log a_j` and
/// `w[0] = 1/log a_1`, `w[k] = 1/log a_k - 1/log a_{k-1}` (0-based here).
struct Weights {
  std::vector<double> lambda;
  std::vector<double> w;
};

class SpongeSpec;
SpongeSpec validate_sponge(const SpongeInput& raw);

/// A validated self-affine sponge: strictly decreasing bases a_1 > ... > a_d >= 2
/// and a nonempty digit set, stored in lexicographic order.
///
/// Levels are 1-based in the public API: level k keeps coordinates k..d, so
/// level 1 is the full digit set and level d is the slowest axis alone.
class SpongeSpec {
 public:
  std::size_t dim() const { return bases_.size(); }
  const std::vector<int>& bases() const { return bases_; }
  int base(std::size_t level) const { return bases_.at(level - 1); }

  const std::vector<Digit>& digits() const { return digits_; }
  std::size_t digit_count() const { return digits_.size(); }

  /// Canonical index of a digit in `digits()`, or -1.
  int index_of(const Digit& d) const {
    auto it = std::lower_bound(digits_.begin(), digits_.end(), d);
    if (it == digits_.end() || *it != d) return -1;
    return static_cast<int>(it - digits_.begin());
  }

  /// eta_k(D), sorted.
  const std::vector<Digit>& alphabet(std::size_t level) const { return alphabets_.at(level - 1); }

  /// For each digit (canonical order), the index of eta_k(digit) in alphabet(k).
  const std::vector<int>& class_of(std::size_t level) const { return class_of_.at(level - 1); }

 private:
  friend SpongeSpec validate_sponge(const SpongeInput& raw);

  std::vector<int> bases_;
  std::vector<Digit> digits_;
  std::vector<std::vector<Digit>> alphabets_;
  std::vector<std::vector<int>> class_of_;
};

inline Digit project_digit(const Digit& digit, std::size_t level) {
  if (level < 1 || level > digit.size()) {
    throw Error(ErrorCode::InvalidArgument, "projection level " + std::to_string(level) +
                                                " outside 1.." + std::to_string(digit.size()));
  }
  return Digit(std::vector<int>(digit.coords.begin() + static_cast<long>(level - 1), digit.coords.end()));
}

inline Digit project_digit(const SpongeSpec& spec, const Digit& digit, std::size_t level) {
  if (digit.size() != spec.dim()) {
    throw Error(ErrorCode::DigitLengthMismatch, "digit " + to_string(digit) + " has wrong length");
  }
  return project_digit(digit, level);
}

inline const std::vector<Digit>& projected_alphabet(const SpongeSpec& spec, std::size_t level) {
  if (level < 1 || level > spec.dim()) {
    throw Error(ErrorCode::InvalidArgument, "level outside 1..d");
  }
  return spec.alphabet(level);
}

inline SpongeSpec validate_sponge(const SpongeInput& raw) {
  const auto& bases = raw.bases;
  if (bases.empty()) throw Error(ErrorCode::BasesNotDecreasing, "no bases given");
  for (std::size_t q = 0; q < bases.size(); ++q) {
    if (bases[q] < 2) {
      throw Error(ErrorCode::BasesNotDecreasing, "base a_" + std::to_string(q + 1) + " must be >= 2");
    }
    if (q > 0 && bases[q] >= bases[q - 1]) {
      throw Error(ErrorCode::BasesNotDecreasing, "bases must satisfy a_1 > a_2 > ... > a_d");
    }
  }
  if (raw.digits.empty()) throw Error(ErrorCode::EmptyDigitSet, "digit set is empty");

  SpongeSpec spec;
  spec.bases_ = bases;
  const std::size_t d = bases.size();
  for (const auto& coords : raw.digits) {
    Digit digit(coords);
    if (digit.size() != d) {
      throw Error(ErrorCode::DigitLengthMismatch,
                  "digit " + to_string(digit) + " must have " + std::to_string(d) + " coordinates");
    }
    for (std::size_t q = 0; q < d; ++q) {
      if (digit[q] < 0 || digit[q] >= bases[q]) {
        throw Error(ErrorCode::DigitOutOfRange, "digit " + to_string(digit) + " coordinate " +
                                                    std::to_string(q + 1) + " not in [0, " +
                                                    std::to_string(bases[q] - 1) + "]");
      }
    }
    spec.digits_.push_back(std::move(digit));
  }
  std::sort(spec.digits_.begin(), spec.digits_.end());
  auto dup = std::adjacent_find(spec.digits_.begin(), spec.digits_.end());
  if (dup != spec.digits_.end()) {
    throw Error(ErrorCode::DuplicateDigit, "digit " + to_string(*dup) + " listed twice");
  }

  for (std::size_t level = 1; level <= d; ++level) {
    std::set<Digit> classes;
    for (const auto& digit : spec.digits_) classes.insert(project_digit(digit, level));
    std::vector<Digit> alphabet(classes.begin(), classes.end());
    std::vector<int> class_of;
    class_of.reserve(spec.digits_.size());
    for (const auto& digit : spec.digits_) {
      auto it = std::lower_bound(alphabet.begin(), alphabet.end(), project_digit(digit, level));
      class_of.push_back(static_cast<int>(it - alphabet.begin()));
    }
    spec.alphabets_.push_back(std::move(alphabet));
    spec.class_of_.push_back(std::move(class_of));
  }
  return spec;
}

inline Weights dimension_weights(const SpongeSpec& spec) {
  const auto& a = spec.bases();
  const double log_ad = std::log(static_cast<double>(a.back()));
  Weights out;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double log_aj = std::log(static_cast<double>(a[j]));
    out.lambda.push_back(j + 1 == a.size() ? 1.0 : log_ad / log_aj);
    out.w.push_back(j == 0 ? 1.0 / log_aj : 1.0 / log_aj - 1.0 / std::log(static_cast<double>(a[j - 1])));
  }
  return out;
}

namespace detail {

struct PerfectPower {
  std::int64_t root;
  int exponent;
};

// a = root^exponent with the smallest possible root.
inline PerfectPower perfect_power(std::int64_t a) {
  for (int e = 62; e >= 2; --e) {
    const auto guess = static_cast<std::int64_t>(std::llround(std::pow(static_cast<double>(a), 1.0 / e)));
    for (std::int64_t r = std::max<std::int64_t>(2, guess - 1); r <= guess + 1; ++r) {
      std::int64_t v = 1;
      bool overflow = false;
      for (int i = 0; i < e && !overflow; ++i) {
        if (v > a / r) overflow = true;
        else v *= r;
      }
      if (!overflow && v == a) return {r, e};
    }
  }
  return {a, 1};
}

}  // namespace detail

/// ceil(lambda_level * n), exact whenever a_level and a_d are powers of a
/// common integer (then lambda is rational).
inline std::int64_t level_depth(const SpongeSpec& spec, std::size_t level, std::int64_t n) {
  const std::size_t d = spec.dim();
  if (level == d) return n;
  const auto pj = detail::perfect_power(spec.base(level));
  const auto pd = detail::perfect_power(spec.base(d));
  if (pj.root == pd.root) {
    const std::int64_t num = static_cast<std::int64_t>(pd.exponent) * n;
    const std::int64_t den = pj.exponent;
    return (num + den - 1) / den;
  }
  const long double lam = std::log(static_cast<long double>(spec.base(d))) /
                          std::log(static_cast<long double>(spec.base(level)));
  return static_cast<std::int64_t>(std::ceil(lam * static_cast<long double>(n)));
}

/// Multiplicity exponents of N(n) = prod_j (#eta_j D)^{e_j}.
inline std::vector<std::int64_t> approximate_square_exponents(const SpongeSpec& spec, std::int64_t n) {
  constexpr std::int64_t kMaxLevel = std::numeric_limits<std::int32_t>::max();
  if (n < 1 || n > kMaxLevel) throw Error(ErrorCode::InvalidArgument, "n must be in [1, 2^31-1]");
  std::vector<std::int64_t> exps;
  std::int64_t prev = 0;
  for (std::size_t level = 1; level <= spec.dim(); ++level) {
    const std::int64_t depth = level_depth(spec, level, n);
    exps.push_back(depth - prev);
    prev = depth;
  }
  return exps;
}

using BigInt = boost::multiprecision::cpp_int;

/// Exact number of level-n approximate squares meeting the sponge.
inline BigInt approximate_square_count(const SpongeSpec& spec, std::int64_t n) {
  const auto exps = approximate_square_exponents(spec, n);
  BigInt count = 1;
  for (std::size_t j = 0; j < exps.size(); ++j) {
    count *= boost::multiprecision::pow(BigInt(spec.alphabet(j + 1).size()), static_cast<unsigned>(exps[j]));
  }
  return count;
}

/// log N(n) / (n log a_d), from the exponents alone.
inline double box_dim_estimate(const SpongeSpec& spec, std::int64_t n) {
  const auto exps = approximate_square_exponents(spec, n);
  CompensatedSum log_count;
  for (std::size_t j = 0; j < exps.size(); ++j) {
    log_count += static_cast<double>(exps[j]) * std::log(static_cast<double>(spec.alphabet(j + 1).size()));
  }
  return log_count.value() / (static_cast<double>(n) * std::log(static_cast<double>(spec.bases().back())));
}

}  // namespace sponge
