#include "cpeps/fields.hpp"

#include <cmath>
#include <random>

namespace cpeps {

namespace {

// mode number for row/col index i on an n-point grid, in (-n/2, n/2]
int mode_number(int i, int n) { return (2 * i > n) ? i - n : i; }

}  // namespace

FieldConfiguration zero_config(const GridSpec& grid, int n_flavors) {
  FieldConfiguration cfg;
  cfg.grid = grid;
  cfg.comp.assign(n_flavors, {Mat::Zero(grid.n, grid.n), Mat::Zero(grid.n, grid.n)});
  cfg.sector.assign(n_flavors, 0);
  return cfg;
}

FieldConfiguration random_smooth_config(const GridSpec& grid, int n_flavors,
                                        int k_max, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  FieldConfiguration cfg = zero_config(grid, n_flavors);
  const double base = 2.0 * kPi / grid.extent;
  for (int fl = 0; fl < n_flavors; ++fl) {
    for (int s = 0; s < 2; ++s) {
      Mat& f = cfg.comp[fl][s];
      for (int kt = -k_max; kt <= k_max; ++kt) {
        for (int kx = -k_max; kx <= k_max; ++kx) {
          const double k2 = static_cast<double>(kt * kt + kx * kx);
          const Cplx c = Cplx(gauss(rng), gauss(rng)) * std::exp(-0.5 * k2 / (k_max * k_max + 1.0));
          for (int it = 0; it < grid.n; ++it) {
            const double t = it * grid.h();
            for (int ix = 0; ix < grid.n; ++ix) {
              const double x = ix * grid.h();
              f(it, ix) += c * std::exp(Cplx(0, base * (kt * t + kx * x)));
            }
          }
        }
      }
    }
  }
  return cfg;
}

FieldConfiguration plane_wave_config(const GridSpec& grid, const Eigen::Vector2cd& chi,
                                     int k_t_index, int k_x_index) {
  FieldConfiguration cfg = zero_config(grid, 1);
  const double base = 2.0 * kPi / grid.extent;
  for (int it = 0; it < grid.n; ++it) {
    const double t = it * grid.h();
    for (int ix = 0; ix < grid.n; ++ix) {
      const double x = ix * grid.h();
      const Cplx phase = std::exp(Cplx(0, base * (k_t_index * t + k_x_index * x)));
      cfg.comp[0][0](it, ix) = chi(0) * phase;
      cfg.comp[0][1](it, ix) = chi(1) * phase;
    }
  }
  return cfg;
}

Mat grid_derivative(const Mat& field, int axis, const GridSpec& grid, DerivMode mode) {
  const int n = grid.n;
  const double base = 2.0 * kPi / grid.extent;
  if (mode == DerivMode::Central) {
    Mat out(n, n);
    const double inv2h = 1.0 / (2.0 * grid.h());
    for (int it = 0; it < n; ++it) {
      for (int ix = 0; ix < n; ++ix) {
        if (axis == 0)
          out(it, ix) = (field((it + 1) % n, ix) - field((it + n - 1) % n, ix)) * inv2h;
        else
          out(it, ix) = (field(it, (ix + 1) % n) - field(it, (ix + n - 1) % n)) * inv2h;
      }
    }
    return out;
  }
  // spectral: conjugate by the DFT along the axis, multiply by i k
  Mat dft(n, n), idft(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      dft(a, b) = std::exp(Cplx(0, -2.0 * kPi * a * b / n)) / std::sqrt(double(n));
      idft(a, b) = std::exp(Cplx(0, 2.0 * kPi * a * b / n)) / std::sqrt(double(n));
    }
  Vec ik(n);
  for (int a = 0; a < n; ++a) ik(a) = Cplx(0, base * mode_number(a, n));
  if (axis == 0) return idft * (ik.asDiagonal() * (dft * field));
  return ((field * dft.transpose()) * ik.asDiagonal()) * idft.transpose();
}

SpectralInterpolator::SpectralInterpolator(const Mat& field, const GridSpec& grid)
    : grid_(grid) {
  const int n = grid.n;
  Mat dft(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      dft(a, b) = std::exp(Cplx(0, -2.0 * kPi * double(a) * b / n)) / double(n);
  coeff_ = dft * field * dft.transpose();  // carries the 1/n^2 normalization
}

Cplx SpectralInterpolator::operator()(double t, double x) const {
  const int n = grid_.n;
  const double base = 2.0 * kPi / grid_.extent;
  Vec et(n), ex(n);
  for (int a = 0; a < n; ++a) {
    et(a) = std::exp(Cplx(0, base * mode_number(a, n) * t));
    ex(a) = std::exp(Cplx(0, base * mode_number(a, n) * x));
  }
  return et.transpose() * coeff_ * ex;
}

FieldConfiguration rescale_fields(const FieldConfiguration& cfg, double eps_x) {
  if (eps_x <= 0) throw ConfigError("rescale_fields: eps_x must be positive");
  FieldConfiguration out = cfg;
  const double s = 1.0 / std::sqrt(eps_x);
  for (auto& fl : out.comp)
    for (auto& c : fl) c *= s;
  return out;
}

}  // namespace cpeps
