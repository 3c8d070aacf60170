#include "cpeps/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace cpeps {

Region complement_region(const Region& a, int n_x, int n_t) {
  std::set<std::pair<int, int>> in(a.modes.begin(), a.modes.end());
  Region c;
  for (int t = 0; t < n_t; ++t)
    for (int x = 0; x < n_x; ++x)
      if (!in.count({x, t})) c.modes.push_back({x, t});
  return c;
}

std::vector<std::pair<int, int>> boundary_modes(const Region& a, int n_x, int n_t,
                                                SpatialBc bc) {
  std::set<std::pair<int, int>> in(a.modes.begin(), a.modes.end());
  auto outside = [&](int x, int t) {
    if (t < 0 || t >= n_t) return false;  // beyond the lattice: no neighbor there
    if (x < 0 || x >= n_x) {
      if (bc == SpatialBc::Open) return false;
      x = (x + n_x) % n_x;
    }
    return !in.count({x, t});
  };
  std::vector<std::pair<int, int>> out;
  for (const auto& [x, t] : a.modes)
    if (outside(x - 1, t) || outside(x + 1, t) || outside(x, t - 1) || outside(x, t + 1))
      out.push_back({x, t});
  return out;
}

Mat reduced_density(const GeneratedState& st, const Region& region, long budget_bytes) {
  if (region.modes.empty())
    throw ConfigError("reduced_density: region must be nonempty");
  if (static_cast<long>(region.modes.size()) >= st.phys.n_modes())
    throw ConfigError("reduced_density: region must be a proper subset");
  const int base = st.phys.n_max + 1;
  long dim_a = 1;
  for (size_t i = 0; i < region.modes.size(); ++i) {
    dim_a *= base;
    if (dim_a * dim_a * 16 > budget_bytes)
      throw ResourceError("reduced_density: region density matrix exceeds the budget");
  }
  std::vector<int> modes;
  for (const auto& [x, t] : region.modes) {
    if (x < 0 || x >= st.phys.n_x || t < 0 || t >= st.phys.n_t)
      throw ConfigError("reduced_density: region mode outside the lattice");
    modes.push_back(st.phys.mode(x, t));
  }

  const Vec& psi = st.normalized;
  Mat rho = Mat::Zero(dim_a, dim_a);
  const long dim_total = st.phys.dim();
  auto region_index = [&](long pattern) {
    long idx = 0, mult = 1;
    for (int m : modes) {
      idx += st.phys.digit(pattern, m) * mult;
      mult *= base;
    }
    return idx;
  };
  auto env_key = [&](long pattern) {
    long key = 0, mult = 1;
    for (long m = 0; m < st.phys.n_modes(); ++m) {
      if (std::find(modes.begin(), modes.end(), static_cast<int>(m)) != modes.end()) continue;
      key += st.phys.digit(pattern, static_cast<int>(m)) * mult;
      mult *= base;
    }
    return key;
  };
  // group patterns by environment configuration
  std::map<long, std::vector<long>> by_env;
  for (long p = 0; p < dim_total; ++p)
    if (psi(p) != 0.0) by_env[env_key(p)].push_back(p);
  for (const auto& [env, patterns] : by_env)
    for (long p : patterns)
      for (long q : patterns)
        rho(region_index(p), region_index(q)) += psi(p) * std::conj(psi(q));

  const double tr = rho.trace().real();
  if (tr > 0) rho /= tr;
  return rho;
}

double entropy(const Mat& rho, double psd_tol) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (rho + rho.adjoint()));
  double s = 0.0;
  for (long i = 0; i < es.eigenvalues().size(); ++i) {
    const double lam = es.eigenvalues()(i);
    if (lam < -psd_tol)
      throw ToleranceError("entropy: density matrix is not positive semidefinite");
    if (lam > 1e-14) s -= lam * std::log(lam);
  }
  return s;
}

CutRank temporal_cut_rank(const GeneratedState& st, int t0) {
  const int base = st.phys.n_max + 1;
  long dim_early = 1, dim_late = 1;
  for (int t = 0; t < st.phys.n_t; ++t)
    for (int x = 0; x < st.phys.n_x; ++x)
      (t < t0 ? dim_early : dim_late) *= base;
  Mat m = Mat::Zero(dim_early, dim_late);
  // early modes are the low digits in canonical (t-major) pattern order
  for (long p = 0; p < st.phys.dim(); ++p)
    m(p % dim_early, p / dim_early) += st.amplitudes(p);
  Eigen::JacobiSVD<Mat> svd(m);
  const auto& sv = svd.singularValues();
  int rank = 0;
  for (long i = 0; i < sv.size(); ++i)
    if (sv(i) > 1e-12 * std::max(1.0, sv(0))) ++rank;
  CutRank out;
  out.rank = rank;
  out.bound = st.aux_sector_dim;
  return out;
}

std::vector<AreaLawRow> area_law_scan(const GeneratedState& st,
                                      const std::vector<Region>& regions, SpatialBc bc) {
  std::vector<AreaLawRow> rows;
  rows.reserve(regions.size());
  for (const auto& r : regions) {
    AreaLawRow row;
    row.region_size = static_cast<int>(r.modes.size());
    row.boundary_size =
        static_cast<int>(boundary_modes(r, st.phys.n_x, st.phys.n_t, bc).size());
    row.entropy_a = entropy(reduced_density(st, r));
    rows.push_back(row);
  }
  return rows;
}

double fitted_area_constant(const std::vector<AreaLawRow>& rows) {
  double c = 0.0;
  for (const auto& r : rows)
    if (r.boundary_size > 0) c = std::max(c, r.entropy_a / r.boundary_size);
  return c;
}

}  // namespace cpeps
