#pragma once

#include <utility>
#include <vector>

#include "cpeps/fock.hpp"

namespace cpeps {

// Subset of physical modes (x, t).  The boundary is the inner one: modes of A
// within one lattice step of the complement.
struct Region {
  std::vector<std::pair<int, int>> modes;
};

Region complement_region(const Region& a, int n_x, int n_t);
std::vector<std::pair<int, int>> boundary_modes(const Region& a, int n_x, int n_t,
                                                SpatialBc bc);

// Normalized reduced density matrix on the region modes (row/col index is
// mixed radix over the region modes in their listed order).
Mat reduced_density(const GeneratedState& st, const Region& region,
                    long budget_bytes = 256l << 20);

// S = -Tr rho ln rho in nats; eigenvalues below 1e-14 count as zero.
double entropy(const Mat& rho, double psd_tol = 1e-9);

struct CutRank {
  int rank = 0;
  int bound = 0;  // auxiliary sector dimension
};

// Schmidt rank of the bipartition {t < t0} | {t >= t0}.
CutRank temporal_cut_rank(const GeneratedState& st, int t0);

struct AreaLawRow {
  int region_size = 0;
  int boundary_size = 0;
  double entropy_a = 0.0;
};

std::vector<AreaLawRow> area_law_scan(const GeneratedState& st,
                                      const std::vector<Region>& regions, SpatialBc bc);

// Smallest c with S_A <= c |boundary| over the scanned family.
double fitted_area_constant(const std::vector<AreaLawRow>& rows);

}  // namespace cpeps
