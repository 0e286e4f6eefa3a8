#include <gtest/gtest.h>

#include <cmath>

#include "sponge/dimension.hpp"
#include "support.hpp"

using namespace sponge;
using namespace sponge::testing;

TEST(Packing, Carpets) {
  EXPECT_NEAR(packing_dimension(carpet_321()), 2 - kLog2 / kLog3, 1e-15);
  EXPECT_NEAR(packing_dimension(carpet_321()), 1.3690702464285425629, 1e-15);
  EXPECT_NEAR(packing_dimension(carpet_43()), 0.92341100393203552783, 1e-15);
  EXPECT_EQ(packing_dimension(validate_sponge({{3, 2}, {{1, 0}}})), 0.0);
}

TEST(Hausdorff, CarpetMatchesClosedForm) {
  const SpongeSpec spec = carpet_321();
  const HausdorffResult h = hausdorff_dimension(spec);
  EXPECT_NEAR(h.value, 1.3496838201955775731, 1e-10);
  EXPECT_NEAR(mcmullen_closed_form(spec), 1.3496838201955775731, 1e-14);
  // The maximizer is symmetric in the two bottom-row digits.
  EXPECT_NEAR(h.maximizer[0], h.maximizer[2], 1e-8);
  EXPECT_NEAR(nielsen_dimension(spec, h.maximizer), h.value, 1e-10);
}

TEST(Hausdorff, SingleDigitIsZero) {
  const SpongeSpec spec = validate_sponge({{3, 2}, {{2, 1}}});
  EXPECT_NEAR(hausdorff_dimension(spec).value, 0.0, 1e-15);
  EXPECT_NEAR(mcmullen_closed_form(spec), 0.0, 1e-15);
}

TEST(Hausdorff, RandomCarpetsAgreeWithClosedForm) {
  for (const auto& spec : random_carpets()) {
    const double h = hausdorff_dimension(spec).value;
    EXPECT_NEAR(h, mcmullen_closed_form(spec), 1e-8);
    EXPECT_LE(h, packing_dimension(spec) + 1e-12);
  }
}

TEST(Hausdorff, ThreeDimensionalBounds) {
  const SpongeSpec spec = validate_sponge({{5, 3, 2}, {{0, 0, 0}, {1, 2, 1}, {4, 1, 0}, {2, 0, 1}, {3, 2, 0}}});
  const double h = hausdorff_dimension(spec).value;
  EXPECT_LE(h, packing_dimension(spec) + 1e-12);
  EXPECT_GE(h, nielsen_dimension(spec, ProbVector::uniform(spec.digits())) - 1e-12);
  EXPECT_THROW(mcmullen_closed_form(spec), Error);
}

TEST(Hausdorff, UniformRowsGiveEqualDimensions) {
  // Every occupied row holds the same number of digits: dim_H = dim_P.
  const SpongeSpec spec = validate_sponge({{4, 2}, {{0, 0}, {3, 0}, {1, 1}, {2, 1}}});
  EXPECT_NEAR(hausdorff_dimension(spec).value, packing_dimension(spec), 1e-10);
}

TEST(Nielsen, Examples) {
  const SpongeSpec spec = carpet_321();
  EXPECT_EQ(nielsen_dimension(spec, ProbVector::point_mass(spec.digits(), Digit{{1, 1}})), 0.0);
  EXPECT_NEAR(nielsen_dimension(spec, ProbVector::uniform(spec.digits())), 1.3389156697687944729, 1e-14);
}

TEST(Report, Contents) {
  const DimensionReport r = dimension_report(carpet_321());
  EXPECT_NEAR(r.packing, 2 - kLog2 / kLog3, 1e-15);
  ASSERT_TRUE(r.mcmullen.has_value());
  EXPECT_NEAR(*r.mcmullen, r.hausdorff, 1e-10);
  ASSERT_EQ(r.box_estimates.size(), 3u);
  EXPECT_EQ(r.box_estimates[2].first, 10000);
}
