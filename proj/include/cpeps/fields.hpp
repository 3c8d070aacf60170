#pragma once

#include <array>
#include <vector>

#include "cpeps/types.hpp"

namespace cpeps {

// Square periodic grid for action evaluation; coordinate 0 is t (rows),
// coordinate 1 is x (columns), both with spacing extent / n.
struct GridSpec {
  int n = 64;
  double extent = 2.0 * kPi;
  double h() const { return extent / n; }
};

// Sampled two-component spinor field Psi_{j_mu}(t, x); component s in {0, 1}
// is the (a, b) doublet.  `sector` holds mu per flavor for the pre-subclass
// action (all zero once the mu = 1 parity transformation has been absorbed).
struct FieldConfiguration {
  GridSpec grid;
  std::vector<std::array<Mat, 2>> comp;  // [flavor][spinor component](it, ix)
  std::vector<int> sector;               // mu per flavor

  int n_flavors() const { return static_cast<int>(comp.size()); }
};

FieldConfiguration zero_config(const GridSpec& grid, int n_flavors);

// Band-limited random field: independent gaussian Fourier coefficients on
// |k| <= k_max modes with a smooth decay; deterministic in the seed.
FieldConfiguration random_smooth_config(const GridSpec& grid, int n_flavors,
                                        int k_max, unsigned seed);

// Psi(t, x) = chi * exp(i (k_t t + k_x x)) with integer mode numbers.
FieldConfiguration plane_wave_config(const GridSpec& grid, const Eigen::Vector2cd& chi,
                                     int k_t_index, int k_x_index);

enum class DerivMode { Spectral, Central };

// Derivative along axis (0 = t, 1 = x); spectral is exact for band-limited
// periodic samples, central is the second-order cross-check.
Mat grid_derivative(const Mat& field, int axis, const GridSpec& grid, DerivMode mode);

// Trigonometric interpolation of a periodic sample at arbitrary points;
// Fourier coefficients are computed once at construction.
class SpectralInterpolator {
 public:
  SpectralInterpolator(const Mat& field, const GridSpec& grid);
  Cplx operator()(double t, double x) const;

 private:
  GridSpec grid_;
  Mat coeff_;  // (kt index, kx index)
};

// Lattice-amplitude -> field normalization: Psi = a / sqrt(eps_x).
FieldConfiguration rescale_fields(const FieldConfiguration& cfg, double eps_x);

}  // namespace cpeps
