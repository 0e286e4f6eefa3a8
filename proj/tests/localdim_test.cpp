#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "sponge/dimension.hpp"
#include "sponge/localdim.hpp"
#include "support.hpp"

using namespace sponge;
using namespace sponge::testing;

namespace {

LocalDimSetup example3() {
  const SpongeSpec spec = carpet_43();
  return pj_potential(spec, ProbVector::over(spec, {0.25, 0.5, 0.25}));
}

const double kMin = std::log(2.0) / std::log(3.0);

}  // namespace

TEST(Pj, Example3Values) {
  const LocalDimSetup s = example3();
  // Canonical digit order: (0,0), (2,2), (3,0).
  EXPECT_NEAR(s.pj[0][0], -0.5, 1e-15);
  EXPECT_NEAR(s.pj[1][0], 0.0, 1e-15);
  EXPECT_NEAR(s.pj[2][0], -0.5, 1e-15);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(s.pj[static_cast<std::size_t>(i)][1], -kMin, 1e-15);
}

TEST(Pj, FullProductUniform) {
  std::vector<std::vector<int>> digits;
  for (int x = 0; x < 3; ++x) {
    for (int y = 0; y < 2; ++y) digits.push_back({x, y});
  }
  const SpongeSpec spec = validate_sponge({{3, 2}, digits});
  const LocalDimSetup s = pj_potential(spec, ProbVector::uniform(spec.digits()));
  for (const auto& row : s.pj) {
    EXPECT_NEAR(row[0], -1.0, 1e-15);
    EXPECT_NEAR(row[1], -1.0, 1e-15);
  }
  EXPECT_EQ(s.level, std::optional<std::size_t>(1));
  const Interval dom = localdim_domain(s);
  EXPECT_NEAR(dom.lo, 2.0, 1e-12);
  EXPECT_NEAR(dom.hi, 2.0, 1e-12);
}

TEST(Pj, ZeroProbabilityRejected) {
  const SpongeSpec spec = carpet_43();
  try {
    pj_potential(spec, ProbVector::over(spec, {0.5, 0.5, 0.0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroProbabilityDigit);
  }
}

TEST(Pj, Telescoping) {
  std::mt19937_64 rng(29);
  const SpongeSpec spec = validate_sponge({{5, 3, 2}, {{0, 0, 0}, {1, 2, 1}, {4, 1, 0}, {2, 0, 1}, {3, 2, 0}}});
  for (int t = 0; t < 20; ++t) {
    const ProbVector p = ProbVector::over(spec, random_probs(rng, spec.digit_count(), 0.05));
    const LocalDimSetup s = pj_potential(spec, p);
    for (std::size_t i = 0; i < p.size(); ++i) {
      double sum = 0.0;
      for (std::size_t j = 1; j <= spec.dim(); ++j) {
        sum += s.pj[i][j - 1] * std::log(static_cast<double>(spec.base(j)));
        EXPECT_LE(s.pj[i][j - 1], 1e-15);
      }
      EXPECT_NEAR(sum, std::log(p[i]), 1e-12);
    }
  }
}

TEST(LocalDimValue, Example3) {
  const LocalDimSetup s = example3();
  const SpongeSpec& spec = s.spec;
  EXPECT_NEAR(local_dim_value(s, ProbVector::point_mass(spec.digits(), Digit{{2, 2}})), kMin, 1e-15);
  EXPECT_NEAR(local_dim_value(s, ProbVector::over(spec, {0.5, 0.0, 0.5})), kMin + 0.5, 1e-15);
  EXPECT_NEAR(local_dim_value(s, s.p), nielsen_dimension(spec, s.p), 1e-14);
}

TEST(LocalDimValue, TypicalEqualsNielsen) {
  std::mt19937_64 rng(31);
  for (const auto& spec : random_carpets(10)) {
    const ProbVector p = ProbVector::over(spec, random_probs(rng, spec.digit_count(), 0.05));
    const LocalDimSetup s = pj_potential(spec, p);
    EXPECT_NEAR(local_dim_value(s, p), nielsen_dimension(spec, p), 1e-12);
  }
}

TEST(Domain, Example3) {
  const Interval dom = localdim_domain(example3());
  EXPECT_NEAR(dom.lo, kMin, 1e-12);
  EXPECT_NEAR(dom.hi, kMin + 0.5, 1e-12);
}

TEST(OneDimensional, Detection) {
  EXPECT_EQ(is_one_dimensional(example3()), std::optional<std::size_t>(1));
  const SpongeSpec spec = carpet_43();
  EXPECT_FALSE(is_one_dimensional(pj_potential(spec, ProbVector::over(spec, {0.1, 0.8, 0.1}))).has_value());
  // Uniform within rows of equal size, skewed across rows: level 2.
  const SpongeSpec rows = validate_sponge({{4, 2}, {{0, 0}, {3, 0}, {1, 1}, {2, 1}}});
  const LocalDimSetup s = pj_potential(rows, ProbVector::over(rows, {0.15, 0.35, 0.35, 0.15}));
  EXPECT_EQ(is_one_dimensional(s), std::optional<std::size_t>(2));
  EXPECT_NEAR(s.constants[0], -0.5, 1e-15);
  // Rows of unequal size can only be flat at level 1 when the rows are uniform.
  const SpongeSpec ex1 = carpet_321();
  EXPECT_FALSE(is_one_dimensional(pj_potential(ex1, ProbVector::over(ex1, {0.3, 0.4, 0.3}))).has_value());
  EXPECT_EQ(is_one_dimensional(pj_potential(ex1, ProbVector::over(ex1, {0.2, 0.5, 0.3}))), std::optional<std::size_t>(1));
}

TEST(Exact, Example3) {
  const LocalDimSetup s = example3();
  EXPECT_NEAR(localdim_packing_exact(s, kMin), 0.0, 1e-10);
  EXPECT_NEAR(localdim_packing_exact(s, kMin + 0.5), 0.5, 1e-10);
  for (double rho : {0.1, 0.3, 0.5, 0.9}) {
    const double expect = h2(rho) / std::log(3.0) + rho / 2;
    EXPECT_NEAR(localdim_packing_exact(s, kMin + rho / 2), expect, 1e-9) << rho;
  }
  // Frozen from an independent arbitrary-precision evaluation.
  EXPECT_NEAR(localdim_packing_exact(s, kMin + 0.15), 0.706032649876389, 1e-9);
  EXPECT_NEAR(localdim_packing_exact(s, kMin + 0.63397459621556135324 / 2), 0.91483824558420441688, 1e-9);
}

TEST(Exact, CounterexampleGap) {
  const LocalDimSetup s = example3();
  const Interval dom = localdim_domain(s);
  double best = 0.0;
  for (double a : uniform_grid(dom, 201)) best = std::max(best, localdim_packing_exact(s, a));
  EXPECT_NEAR(packing_dimension(s.spec) - best, 0.0085727583478311109472, 1e-5);
  EXPECT_GT(packing_dimension(s.spec) - best, 5e-3);
}

TEST(Exact, Errors) {
  const SpongeSpec spec = carpet_43();
  const LocalDimSetup skew = pj_potential(spec, ProbVector::over(spec, {0.1, 0.8, 0.1}));
  try {
    localdim_packing_exact(skew, 0.8);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotOneDimensional);
  }
  try {
    localdim_packing_exact(example3(), 2.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::OutsideDomain);
  }
}

TEST(Lower, MatchesExactWhenOneDimensional) {
  const LocalDimSetup s = example3();
  const Interval dom = localdim_domain(s);
  for (double a : uniform_grid(dom, 9)) {
    EXPECT_NEAR(localdim_packing_lower(s, a), localdim_packing_exact(s, a), 1e-8) << a;
  }
}

TEST(Lower, GeneralMeasure) {
  const SpongeSpec spec = carpet_43();
  const LocalDimSetup s = pj_potential(spec, ProbVector::over(spec, {0.1, 0.8, 0.1}));
  const Interval dom = localdim_domain(s);
  EXPECT_LT(dom.lo, dom.hi);
  for (double a : uniform_grid(dom, 7)) {
    const double v = localdim_packing_lower(s, a);
    EXPECT_GE(v, -1e-12);
    EXPECT_LE(v, packing_dimension(spec) + 1e-9);
  }
  // At the typical local dimension the measure itself is feasible.
  EXPECT_GE(localdim_packing_lower(s, local_dim_value(s, s.p)), nielsen_dimension(spec, s.p) - 1e-9);
}

TEST(Lower, SingleDigit) {
  const SpongeSpec spec = validate_sponge({{3, 2}, {{1, 1}}});
  const LocalDimSetup s = pj_potential(spec, ProbVector::uniform(spec.digits()));
  EXPECT_NEAR(localdim_packing_lower(s, 0.0), 0.0, 1e-12);
}
