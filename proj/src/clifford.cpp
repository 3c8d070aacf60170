#include "cpeps/clifford.hpp"

#include <cmath>

namespace cpeps {

namespace {
const Cplx I(0.0, 1.0);

Eigen::Matrix2cd sigma_x() {
  Eigen::Matrix2cd s;
  s << 0, 1, 1, 0;
  return s;
}
Eigen::Matrix2cd sigma_y() {
  Eigen::Matrix2cd s;
  s << 0, -I, I, 0;
  return s;
}
Eigen::Matrix2cd sigma_z() {
  Eigen::Matrix2cd s;
  s << 1, 0, 0, -1;
  return s;
}

void check_theta(double theta) {
  if (std::abs(std::cos(2.0 * theta)) < 1e-8)
    throw ConfigError("theta: metric continuation is singular at theta = pi/4");
}

// exp(m) for traceless 2x2: m^2 = -det(m) I.
Eigen::Matrix2cd exp_traceless(const Eigen::Matrix2cd& m) {
  const Cplx d2 = -m.determinant();
  const Cplx d = std::sqrt(d2);
  Cplx ch, shd;
  if (std::abs(d) < 1e-6) {
    ch = 1.0 + d2 / 2.0 + d2 * d2 / 24.0;
    shd = 1.0 + d2 / 6.0 + d2 * d2 / 120.0;
  } else {
    ch = std::cosh(d);
    shd = std::sinh(d) / d;
  }
  return ch * Eigen::Matrix2cd::Identity() + shd * m;
}

}  // namespace

Eigen::Matrix2cd base_gamma0() { return sigma_z(); }
Eigen::Matrix2cd base_gamma1() { return I * sigma_y(); }
Eigen::Matrix2cd base_gamma5() { return sigma_x(); }

double sqrt_cos2theta_abs(double theta) {
  check_theta(theta);
  return std::sqrt(std::abs(std::cos(2.0 * theta)));
}

Eigen::Matrix2d metric(double theta) {
  check_theta(theta);
  const double c2 = std::cos(2.0 * theta);
  Eigen::Matrix2d eta = Eigen::Matrix2d::Zero();
  eta(0, 0) = c2 / std::abs(c2);
  eta(1, 1) = -1.0;
  return eta;
}

GammaSet gamma_family(double theta) {
  check_theta(theta);
  GammaSet g;
  g.theta = theta;
  g.eta = metric(theta);
  const double c = std::cos(theta), s = std::sin(theta);
  const double norm_abs = sqrt_cos2theta_abs(theta);
  const Cplx norm_principal = std::sqrt(Cplx(std::cos(2.0 * theta)));
  g.gamma1 = base_gamma1();
  g.gamma0 = (base_gamma0() * c + I * base_gamma5() * s) / norm_abs;
  g.gamma5 = (base_gamma5() * c - I * base_gamma0() * s) / norm_principal;
  g.gamma5_modulus = (base_gamma5() * c - I * base_gamma0() * s) / norm_abs;
  return g;
}

LorentzGroupElement group_element(double omega, double theta) {
  const GammaSet g = gamma_family(theta);
  LorentzGroupElement el;
  el.omega = omega;
  el.theta = theta;
  el.sigma01 = 0.25 * (g.gamma0 * g.gamma1 - g.gamma1 * g.gamma0);
  el.lambda = exp_traceless(omega * el.sigma01);
  return el;
}

Eigen::Matrix2cd vector_representation(const LorentzGroupElement& el) {
  const GammaSet g = gamma_family(el.theta);
  const Eigen::Matrix2cd inv = el.lambda.inverse();
  Eigen::Matrix2cd v;
  for (int mu = 0; mu < 2; ++mu) {
    const Eigen::Matrix2cd a = inv * g.gamma(mu) * el.lambda;
    for (int nu = 0; nu < 2; ++nu)
      v(mu, nu) = 0.5 * g.eta(nu, nu) * (a * g.gamma(nu)).trace();
  }
  return v;
}

TransferCoeffs interpolated_transfer_coeffs(double theta, double eps) {
  check_theta(theta);
  const Cplx root = std::sqrt(Cplx(std::cos(2.0 * theta)));
  TransferCoeffs c;
  c.c_id = std::cos(theta) / root;
  c.c_sy = -std::sin(theta) / root;
  c.c_h = eps * root / sqrt_cos2theta_abs(theta);
  return c;
}

namespace {

// sum over the grid of conj(Psi_s) kern(s,s') F_{s'} with F per spinor slot
Cplx kernel_sum(const std::array<Mat, 2>& psi, const Eigen::Matrix2cd& kern,
                const std::array<Mat, 2>& f) {
  Cplx acc = 0.0;
  for (int s = 0; s < 2; ++s)
    for (int sp = 0; sp < 2; ++sp) {
      if (kern(s, sp) == 0.0) continue;
      acc += kern(s, sp) * (psi[s].conjugate().cwiseProduct(f[sp])).sum();
    }
  return acc;
}

struct FlavorDerivatives {
  std::array<Mat, 2> dt, dx;
};

FlavorDerivatives derivatives(const std::array<Mat, 2>& psi, const GridSpec& grid,
                              DerivMode mode) {
  FlavorDerivatives d;
  for (int s = 0; s < 2; ++s) {
    d.dt[s] = grid_derivative(psi[s], 0, grid, mode);
    d.dx[s] = grid_derivative(psi[s], 1, grid, mode);
  }
  return d;
}

// S = int Psi' [ kern_t d_t + kern_x d_x + kern_0 ] Psi per flavor
Cplx action_eval(const FieldConfiguration& cfg, const Eigen::Matrix2cd& kern_t,
                 const Eigen::Matrix2cd& kern_x, const Eigen::Matrix2cd& kern_0,
                 DerivMode mode) {
  const double cell = cfg.grid.h() * cfg.grid.h();
  Cplx acc = 0.0;
  for (int fl = 0; fl < cfg.n_flavors(); ++fl) {
    const auto d = derivatives(cfg.comp[fl], cfg.grid, mode);
    acc += kernel_sum(cfg.comp[fl], kern_t, d.dt);
    acc += kernel_sum(cfg.comp[fl], kern_x, d.dx);
    acc += kernel_sum(cfg.comp[fl], kern_0, cfg.comp[fl]);
  }
  return cell * acc;
}

}  // namespace

Cplx dirac_action(const FieldConfiguration& cfg, double m, DerivMode mode) {
  // Psi-bar (i dslash - m) Psi = Psi' [ i d_t + i sigma_x d_x - m sigma_z ] Psi
  return action_eval(cfg, I * Eigen::Matrix2cd::Identity(), I * sigma_x(),
                     -m * sigma_z(), mode);
}

Cplx general_action(const FieldConfiguration& cfg, const Vec& j_of_t, const Mat& m0_grid,
                    DerivMode mode) {
  if (j_of_t.size() != cfg.grid.n || m0_grid.rows() != cfg.grid.n ||
      m0_grid.cols() != cfg.grid.n)
    throw ConfigError("general_action: coupling grids do not match the field grid");
  const double cell = cfg.grid.h() * cfg.grid.h();
  Cplx acc = 0.0;
  for (int fl = 0; fl < cfg.n_flavors(); ++fl) {
    const auto d = derivatives(cfg.comp[fl], cfg.grid, mode);
    const double sector_sign = (cfg.sector[fl] % 2 == 0) ? 1.0 : -1.0;
    const auto& psi = cfg.comp[fl];
    for (int it = 0; it < cfg.grid.n; ++it) {
      for (int ix = 0; ix < cfg.grid.n; ++ix) {
        Cplx v = 0.0;
        for (int s = 0; s < 2; ++s) v -= std::conj(psi[s](it, ix)) * d.dt[s](it, ix);
        // J(t) sz^mu sx sz^mu i d_x : off-diagonal in the doublet
        v += j_of_t(it) * sector_sign * I *
             (std::conj(psi[0](it, ix)) * d.dx[1](it, ix) +
              std::conj(psi[1](it, ix)) * d.dx[0](it, ix));
        v += m0_grid(it, ix) * (std::conj(psi[0](it, ix)) * psi[0](it, ix) -
                                std::conj(psi[1](it, ix)) * psi[1](it, ix));
        acc += v;
      }
    }
  }
  return cell * acc;
}

Cplx family_action(const FieldConfiguration& cfg, double m, double theta, DerivMode mode) {
  // sqrt(-det eta(theta)) is continued as the constant 1 across pi/4.
  const GammaSet g = gamma_family(theta);
  const Eigen::Matrix2cd kern_t = sigma_z() * (I * g.gamma0);
  const Eigen::Matrix2cd kern_x = sigma_z() * (I * g.gamma1);
  const Eigen::Matrix2cd kern_0 = sigma_z() * (-m * Eigen::Matrix2cd::Identity());
  return action_eval(cfg, kern_t, kern_x, kern_0, mode);
}

Cplx euclidean_action(const FieldConfiguration& cfg, double m, DerivMode mode) {
  // (i gamma5_E)(i dslash_E - m) with gamma5_E = -i gamma0 and the euclidean
  // gammas gamma0_E = i gamma5, gamma1_E = gamma1
  const Eigen::Matrix2cd i_g5e = sigma_z();
  const Eigen::Matrix2cd kern_t = i_g5e * (I * (I * base_gamma5()));
  const Eigen::Matrix2cd kern_x = i_g5e * (I * base_gamma1());
  const Eigen::Matrix2cd kern_0 = i_g5e * (-m * Eigen::Matrix2cd::Identity());
  return action_eval(cfg, kern_t, kern_x, kern_0, mode);
}

FieldConfiguration rotate_config(const FieldConfiguration& cfg, double alpha,
                                 double center_t, double center_x) {
  const LorentzGroupElement el = group_element(alpha, kPi / 2.0);
  const Eigen::Matrix2cd lam = el.lambda;
  // V is a real rotation at theta = pi/2
  const Eigen::Matrix2d v = vector_representation(el).real();
  const Eigen::Matrix2d vinv = v.transpose();

  const int n = cfg.grid.n;
  const double h = cfg.grid.h();
  FieldConfiguration out = zero_config(cfg.grid, cfg.n_flavors());
  out.sector = cfg.sector;

  const double quarter = alpha / (kPi / 2.0);
  const bool exact = std::abs(quarter - std::round(quarter)) < 1e-12 &&
                     center_t == 0.0 && center_x == 0.0;

  auto source = [&](int it, int ix) {
    const double dt = it * h - center_t, dx = ix * h - center_x;
    return std::pair{vinv(0, 0) * dt + vinv(0, 1) * dx + center_t,
                     vinv(1, 0) * dt + vinv(1, 1) * dx + center_x};
  };

  for (int fl = 0; fl < cfg.n_flavors(); ++fl) {
    if (exact) {
      for (int it = 0; it < n; ++it) {
        for (int ix = 0; ix < n; ++ix) {
          const auto [ts, xs] = source(it, ix);
          long its = std::lround(ts / h) % n;
          long ixs = std::lround(xs / h) % n;
          if (its < 0) its += n;
          if (ixs < 0) ixs += n;
          for (int s = 0; s < 2; ++s)
            out.comp[fl][s](it, ix) = lam(s, 0) * cfg.comp[fl][0](its, ixs) +
                                      lam(s, 1) * cfg.comp[fl][1](its, ixs);
        }
      }
    } else {
      const SpectralInterpolator ia(cfg.comp[fl][0], cfg.grid);
      const SpectralInterpolator ib(cfg.comp[fl][1], cfg.grid);
      for (int it = 0; it < n; ++it) {
        for (int ix = 0; ix < n; ++ix) {
          const auto [ts, xs] = source(it, ix);
          const Cplx fa = ia(ts, xs), fb = ib(ts, xs);
          for (int s = 0; s < 2; ++s)
            out.comp[fl][s](it, ix) = lam(s, 0) * fa + lam(s, 1) * fb;
        }
      }
    }
  }
  return out;
}

CurrentReport conserved_current(const FieldConfiguration& cfg) {
  const int n = cfg.grid.n;
  CurrentReport rep;
  rep.j0 = Mat::Zero(n, n);
  rep.j1 = Mat::Zero(n, n);
  for (int fl = 0; fl < cfg.n_flavors(); ++fl) {
    const auto& psi = cfg.comp[fl];
    // j0 = Psi' Psi, j1 = Psi' sigma_x Psi
    rep.j0 += psi[0].conjugate().cwiseProduct(psi[0]) +
              psi[1].conjugate().cwiseProduct(psi[1]);
    rep.j1 += psi[0].conjugate().cwiseProduct(psi[1]) +
              psi[1].conjugate().cwiseProduct(psi[0]);
  }
  const Mat div = grid_derivative(rep.j0, 0, cfg.grid, DerivMode::Spectral) +
                  grid_derivative(rep.j1, 1, cfg.grid, DerivMode::Spectral);
  rep.divergence_norm = div.cwiseAbs().maxCoeff();
  return rep;
}

FieldConfiguration on_shell_plane_wave(const GridSpec& grid, double m, int k_x_index,
                                       double amplitude) {
  const double base = 2.0 * kPi / grid.extent;
  const double p = base * k_x_index;
  const double e = std::sqrt(p * p + m * m);
  Eigen::Vector2cd u;
  u << p, e - m;
  if (u.norm() == 0.0) u << 1.0, 0.0;  // p = 0 rest spinor (sigma_z = +1)
  u *= amplitude / u.norm();
  FieldConfiguration cfg = zero_config(grid, 1);
  for (int it = 0; it < grid.n; ++it) {
    const double t = it * grid.h();
    for (int ix = 0; ix < grid.n; ++ix) {
      const double x = ix * grid.h();
      const Cplx phase = std::exp(Cplx(0, p * x - e * t));
      cfg.comp[0][0](it, ix) = u(0) * phase;
      cfg.comp[0][1](it, ix) = u(1) * phase;
    }
  }
  return cfg;
}

}  // namespace cpeps
