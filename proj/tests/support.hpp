#pragma once

// Shared fixtures: the three worked carpets, their closed forms and a seeded
// generator of random two-dimensional sponges.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "sponge/measures.hpp"
#include "sponge/sponge.hpp"

namespace sponge::testing {

inline const double kLog2 = std::log(2.0);
inline const double kLog3 = std::log(3.0);

inline double h2(double x) {
  auto t = [](double v) { return v > 0 ? -v * std::log(v) : 0.0; };
  return t(x) + t(1 - x);
}

/// Bases (3, 2), digits {(0,0), (1,1), (2,0)}.
inline SpongeSpec carpet_321() { return validate_sponge({{3, 2}, {{0, 0}, {1, 1}, {2, 0}}}); }

/// Bases (4, 3), digits {(0,0), (2,2), (3,0)}.
inline SpongeSpec carpet_43() { return validate_sponge({{4, 3}, {{0, 0}, {2, 2}, {3, 0}}}); }

/// Indicator of (1,1): both spectra equal h2(a)/log 2 + (1 - a) log 2/log 3.
inline Potential indicator_11(const SpongeSpec& spec) { return Potential::indicator(spec, Digit{{1, 1}}); }

/// Indicator of (2,0): the packing spectrum has a kink at 1/2.
inline Potential indicator_20(const SpongeSpec& spec) { return Potential::indicator(spec, Digit{{2, 0}}); }

inline double smooth_branch(double a) { return h2(a) / kLog2 + (1 - a) * kLog2 / kLog3; }

inline double kinked_branch(double a) { return a <= 0.5 ? (h2(a) - a * kLog2) / kLog3 + 1 : smooth_branch(a); }

inline SpongeSpec random_carpet(std::mt19937_64& rng) {
  static const std::pair<int, int> kBases[] = {{3, 2}, {4, 2}, {4, 3}, {5, 2}, {5, 3}};
  const auto [a1, a2] = kBases[std::uniform_int_distribution<int>(0, 4)(rng)];
  std::vector<std::vector<int>> cells;
  for (int x = 0; x < a1; ++x) {
    for (int y = 0; y < a2; ++y) cells.push_back({x, y});
  }
  std::shuffle(cells.begin(), cells.end(), rng);
  const int size = std::min<int>(std::uniform_int_distribution<int>(2, 8)(rng), static_cast<int>(cells.size()));
  cells.resize(static_cast<std::size_t>(size));
  return validate_sponge({{a1, a2}, cells});
}

/// The fixed suite of 20 random carpets used across the tests.
inline std::vector<SpongeSpec> random_carpets(std::size_t count = 20, std::uint64_t seed = 20240611) {
  std::mt19937_64 rng(seed);
  std::vector<SpongeSpec> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(random_carpet(rng));
  return out;
}

/// Random probability vector; `floor` > 0 keeps entries strictly positive.
inline std::vector<double> random_probs(std::mt19937_64& rng, std::size_t n, double floor = 0.0) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> p(n);
  for (double& x : p) x = e(rng) + floor;
  const double s = std::accumulate(p.begin(), p.end(), 0.0);
  for (double& x : p) x /= s;
  // Push the rounding residue into the largest entry.
  const double r = 1.0 - std::accumulate(p.begin(), p.end(), 0.0);
  *std::max_element(p.begin(), p.end()) += r;
  return p;
}

inline Potential random_potential(std::mt19937_64& rng, const SpongeSpec& spec) {
  std::uniform_int_distribution<int> v(-3, 3);
  std::vector<double> vals(spec.digit_count());
  do {
    for (double& x : vals) x = v(rng);
  } while (*std::max_element(vals.begin(), vals.end()) == *std::min_element(vals.begin(), vals.end()));
  return Potential::scalar(spec, vals);
}

}  // namespace sponge::testing
