#include "cpeps/spectrum.hpp"

#include <algorithm>
#include <cmath>

#include "cpeps/fock.hpp"

namespace cpeps {

Mat one_body_matrix(const ModelSpec& spec, int t) {
  Mat h = one_body_hopping_coeff(spec, t) + one_body_mass_coeff(spec, t);
  if (spec.couplings.f) {
    const int d = spec.couplings.d;
    for (int x = 0; x < spec.lattice.n_x; ++x) {
      const Mat& fx = (*spec.couplings.f)[x];
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k)
          h(mode_id({x, Species::A, j, {}}, d), mode_id({x, Species::A, k, {}}, d)) += fx(j, k);
    }
  }
  return h;
}

std::vector<KernelBlock> dft_kernel(const ModelSpec& spec, int t) {
  if (spec.lattice.bc != SpatialBc::Periodic)
    throw ConfigError("dft_kernel: requires periodic boundaries");
  const int n_x = spec.lattice.n_x;
  const int d = spec.couplings.d;
  auto constant_over_x = [&](auto&& getter) {
    for (int x = 1; x < n_x; ++x)
      if ((getter(x) - getter(0)).cwiseAbs().maxCoeff() > 0) return false;
    return true;
  };
  if (!constant_over_x([&](int x) { return spec.couplings.m0_at(x, t); }) ||
      (spec.couplings.f &&
       !constant_over_x([&](int x) { return (*spec.couplings.f)[x]; })))
    throw ConfigError("dft_kernel: couplings vary over x; use direct diagonalization");

  const Mat& J = spec.couplings.j_at(t);
  const Mat& m0 = spec.couplings.m0_at(0, t);
  Mat f0 = Mat::Zero(d, d);
  if (spec.couplings.f) f0 = (*spec.couplings.f)[0];
  const double eps = spec.lattice.epsilon;

  std::vector<KernelBlock> blocks;
  blocks.reserve(n_x);
  for (double p : spec.momenta) {
    KernelBlock kb;
    kb.p = p;
    kb.block = Mat::Zero(2 * d, 2 * d);
    const double kp = (1.0 + 2.0 * std::cos(p * eps)) / eps;
    kb.block.topRightCorner(d, d) = kp * J;
    kb.block.bottomLeftCorner(d, d) = kp * J;  // sigma_x (x) J
    kb.block.topLeftCorner(d, d) = m0 + f0;
    kb.block.bottomRightCorner(d, d) = -m0;
    blocks.push_back(std::move(kb));
  }
  return blocks;
}

std::pair<double, double> dispersion_zeros(double eps) {
  if (eps <= 0) throw ConfigError("dispersion_zeros: eps must be positive");
  // 1 + 2 cos(p eps) decreases monotonically from 3 to -1 on (0, pi/eps)
  double lo = 0.0, hi = kPi / eps;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (1.0 + 2.0 * std::cos(mid * eps) > 0.0)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-16 * (kPi / eps)) break;
  }
  const double q0 = 0.5 * (lo + hi);
  return {q0, -q0};
}

DispersionResult low_energy_dispersion(int n_x, double eps, double j_scale, double m,
                                       double p_window) {
  if (p_window >= kPi / (3.0 * eps))
    throw ConfigError("low_energy_dispersion: window overlaps both sectors");
  const auto [q0, q1] = dispersion_zeros(eps);
  const std::vector<double> grid = momentum_grid(n_x, eps);
  auto energy_at = [&](double p) {
    const double kp = j_scale * (1.0 + 2.0 * std::cos(p * eps)) / eps;
    return std::sqrt(m * m + kp * kp);
  };
  auto fold = [&](double dp) {
    const double span = 2.0 * kPi / eps;
    dp = std::fmod(dp, span);
    if (dp > span / 2) dp -= span;
    if (dp < -span / 2) dp += span;
    return dp;
  };

  DispersionResult out;
  for (double p : grid) {
    for (int mu = 0; mu < 2; ++mu) {
      const double q = mu == 0 ? q0 : q1;
      const double rel = fold(p - q);
      if (std::abs(rel) <= p_window)
        out.points.push_back({rel, energy_at(p), mu});
    }
  }

  // cone slope at q_0: symmetric differences, Richardson in the grid spacing
  const double dp = 2.0 * kPi / (n_x * eps);
  auto sym_slope = [&](double h) {
    return (energy_at(q0 + h) + energy_at(q0 - h) - 2.0 * energy_at(q0)) / (2.0 * h);
  };
  out.raw_velocity = (4.0 * sym_slope(dp) - sym_slope(2.0 * dp)) / 3.0;

  // least squares E^2 = s p^2 + c0 over the collected points
  double suu = 0, su = 0, sy = 0, suy = 0, n = 0;
  for (const auto& pt : out.points) {
    const double u = pt.p * pt.p, y = pt.energy * pt.energy;
    suu += u * u;
    su += u;
    sy += y;
    suy += u * y;
    n += 1;
  }
  const double det = n * suu - su * su;
  if (std::abs(det) > 0) {
    out.fit_slope = (n * suy - su * sy) / det;
    out.fit_intercept = (suu * sy - su * suy) / det;
  }
  return out;
}

std::vector<std::pair<double, double>> symmetrized_dispersion_sq(const DispersionResult& r) {
  std::vector<std::pair<double, double>> acc;  // (p, mean of E^2 over sectors)
  for (const auto& pt : r.points) {
    if (pt.sector != 0) continue;
    for (const auto& qt : r.points) {
      if (qt.sector == 1 && std::abs(qt.p - pt.p) < 1e-12) {
        acc.emplace_back(pt.p, 0.5 * (pt.energy * pt.energy + qt.energy * qt.energy));
        break;
      }
    }
  }
  std::sort(acc.begin(), acc.end());
  return acc;
}

FlavorCouplingReport flavor_coupling_norm(const std::vector<Mat>& f_profile, int n_x,
                                          double eps, double p_max) {
  const int d = static_cast<int>(f_profile.at(0).rows());
  const auto [q0, q1] = dispersion_zeros(eps);
  const std::vector<double> grid = momentum_grid(n_x, eps);
  auto fold = [&](double dp) {
    const double span = 2.0 * kPi / eps;
    dp = std::fmod(dp, span);
    if (dp > span / 2) dp -= span;
    if (dp < -span / 2) dp += span;
    return dp;
  };
  std::vector<double> win0, win1;
  for (double p : grid) {
    if (std::abs(fold(p - q0)) <= p_max) win0.push_back(p);
    if (std::abs(fold(p - q1)) <= p_max) win1.push_back(p);
  }
  // <p| h_f |p'> = (1/N) sum_x f(x) e^{-i (p - p') x}
  auto block_entry = [&](double p, double pp) {
    Mat e = Mat::Zero(d, d);
    for (int ix = 0; ix < n_x; ++ix) {
      const double x = ix * eps;
      e += f_profile[ix] * std::exp(Cplx(0, -(p - pp) * x));
    }
    return Mat(e / static_cast<double>(n_x));
  };
  auto window_norm = [&](const std::vector<double>& rows, const std::vector<double>& cols) {
    Mat b(rows.size() * d, cols.size() * d);
    for (size_t i = 0; i < rows.size(); ++i)
      for (size_t j = 0; j < cols.size(); ++j)
        b.block(i * d, j * d, d, d) = block_entry(rows[i], cols[j]);
    if (b.size() == 0) return 0.0;
    Eigen::JacobiSVD<Mat> svd(b);
    return svd.singularValues()(0);
  };
  FlavorCouplingReport rep;
  rep.inter_norm = window_norm(win0, win1);
  rep.intra_norm = window_norm(win0, win0);
  return rep;
}

EnvelopeDecomposition envelope_decompose(const std::vector<Cplx>& amplitudes,
                                         double eps, double p_max) {
  const int n_x = static_cast<int>(amplitudes.size());
  const auto [q0, q1] = dispersion_zeros(eps);
  const std::vector<double> grid = momentum_grid(n_x, eps);
  auto fold = [&](double dp) {
    const double span = 2.0 * kPi / eps;
    dp = std::fmod(dp, span);
    if (dp > span / 2) dp -= span;
    if (dp < -span / 2) dp += span;
    return dp;
  };
  // forward DFT: c~(p) = (1/sqrt N) sum_x e^{-i p x} c_x
  std::vector<Cplx> ft(n_x, 0.0);
  for (int ip = 0; ip < n_x; ++ip) {
    for (int ix = 0; ix < n_x; ++ix)
      ft[ip] += amplitudes[ix] * std::exp(Cplx(0, -grid[ip] * ix * eps));
    ft[ip] /= std::sqrt(static_cast<double>(n_x));
  }

  EnvelopeDecomposition out;
  out.envelope0.assign(n_x, 0.0);
  out.envelope1.assign(n_x, 0.0);
  double inside = 0.0, total = 0.0;
  for (int ip = 0; ip < n_x; ++ip) total += std::norm(ft[ip]);
  for (int ip = 0; ip < n_x; ++ip) {
    const double p = grid[ip];
    const double r0 = fold(p - q0), r1 = fold(p - q1);
    const bool in0 = std::abs(r0) <= p_max;
    const bool in1 = std::abs(r1) <= p_max;
    if (in0) out.weight0 += std::norm(ft[ip]);
    if (in1) out.weight1 += std::norm(ft[ip]);
    if (in0 || in1) inside += std::norm(ft[ip]);
    for (int ix = 0; ix < n_x; ++ix) {
      const double x = ix * eps;
      if (in0)
        out.envelope0[ix] += ft[ip] * std::exp(Cplx(0, r0 * x)) / std::sqrt(static_cast<double>(n_x));
      if (in1)
        out.envelope1[ix] += ft[ip] * std::exp(Cplx(0, r1 * x)) / std::sqrt(static_cast<double>(n_x));
    }
  }
  out.residual = total - inside;
  return out;
}

}  // namespace cpeps
