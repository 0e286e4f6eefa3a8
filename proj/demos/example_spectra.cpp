// Prints the packing and Hausdorff spectra of the two indicator potentials on
// the carpet with bases (3, 2) and digits {(0,0), (1,1), (2,0)}.

#include <cstdio>

#include "sponge/dimension.hpp"
#include "sponge/spectra.hpp"

int main() {
  const sponge::SpongeSpec spec = sponge::validate_sponge({{3, 2}, {{0, 0}, {1, 1}, {2, 0}}});
  std::printf("packing dimension   %.12g\n", sponge::packing_dimension(spec));
  std::printf("hausdorff dimension %.12g\n\n", sponge::hausdorff_dimension(spec).value);

  const sponge::Potential first = sponge::Potential::indicator(spec, sponge::Digit{{1, 1}});
  const sponge::Potential second = sponge::Potential::indicator(spec, sponge::Digit{{2, 0}});
  std::printf("%-6s %-16s %-16s %-16s\n", "alpha", "packing(1,1)", "hausdorff(1,1)", "packing(2,0)");
  for (int i = 0; i <= 10; ++i) {
    const double alpha = i / 10.0;
    std::printf("%-6.2f %-16.12f %-16.12f %-16.12f\n", alpha, sponge::packing_spectrum_point(spec, first, alpha),
                sponge::hausdorff_spectrum_point(spec, first, alpha), sponge::packing_spectrum_point(spec, second, alpha));
  }
  if (auto alpha = sponge::full_dim_attainment(spec, second)) {
    std::printf("\nfull packing dimension attained at alpha = %.12g\n", (*alpha)[0]);
  }
}
