// Period matrices along a one-parameter family of flows: Z grows from the
// origin while staying inside the Siegel disc.

#include <cstdio>

#include "hhp/hhp.hpp"

int main() {
  const auto grid = hhp::SampleGrid::uniform(4096);
  const auto field = hhp::CircleFunction::sine(2, 2);
  std::printf("%8s %14s %14s %14s %10s\n", "eps", "max|Z|", "sigma_max", "symmetry", "member");
  for (double eps : {0.0, 0.02, 0.05, 0.1, 0.2, 0.3}) {
    const auto map = hhp::make_map(hhp::MapDescriptor::flow(field, eps), grid);
    const auto pm = hhp::period_matrix(map, 16, grid);
    const auto report = hhp::siegel_membership(pm, 1e-6 * (1.0 + hhp::max_abs(pm.Z)));
    std::printf("%8.3f %14.6e %14.6e %14.3e %10s\n", eps, hhp::max_abs(pm.Z), report.sigma_max,
                report.symmetry_defect, report.member ? "yes" : "no");
  }

  // Moebius maps stay at the origin.
  const auto moebius = hhp::make_map(hhp::MapDescriptor::moebius(0.4, 1.0), grid);
  std::printf("moebius(0.4, 1.0): max|Z| = %.3e\n", hhp::max_abs(hhp::period_matrix(moebius, 16, grid).Z));
  return 0;
}
