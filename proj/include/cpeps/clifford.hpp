#pragma once

#include "cpeps/fields.hpp"
#include "cpeps/types.hpp"

namespace cpeps {

// Base 1+1 dimensional set: gamma0 = sigma_z, gamma1 = i sigma_y,
// gamma5 = sigma_x, eta = diag(1, -1).
Eigen::Matrix2cd base_gamma0();
Eigen::Matrix2cd base_gamma1();
Eigen::Matrix2cd base_gamma5();

// eta(theta) = diag(cos 2theta / |cos 2theta|, -1); singular at theta = pi/4.
Eigen::Matrix2d metric(double theta);

// Interpolated set.  gamma0(theta) carries the |cos 2theta|^{-1/2} of the
// continuation; gamma5(theta) uses the principal sqrt(cos 2theta) so that
// gamma5(theta)^2 = 1 on both sides of the singularity (the modulus-normalized
// variant, which squares to eta_00(theta), is kept alongside).
struct GammaSet {
  double theta = 0.0;
  Eigen::Matrix2cd gamma0, gamma1, gamma5;
  Eigen::Matrix2cd gamma5_modulus;  // paper-literal |cos 2theta|^{-1/2} variant
  Eigen::Matrix2d eta;

  Eigen::Matrix2cd gamma(int mu) const { return mu == 0 ? gamma0 : gamma1; }
};

GammaSet gamma_family(double theta);

// Lambda(omega; theta) = exp[omega Sigma_01(theta)], Sigma_01 = [g0, g1]/4.
struct LorentzGroupElement {
  double omega = 0.0;
  double theta = 0.0;
  Eigen::Matrix2cd sigma01;
  Eigen::Matrix2cd lambda;
};

LorentzGroupElement group_element(double omega, double theta);

// Vector representation V from Lambda^{-1} gamma^mu Lambda = V^mu_nu gamma^nu.
Eigen::Matrix2cd vector_representation(const LorentzGroupElement& g);

// M_eps(t; theta) = c_id * 1 + c_sy * sigma_y + c_h * (H_m + H_h + H_int);
// principal branch of sqrt(cos 2theta) past pi/4.
struct TransferCoeffs {
  Cplx c_id, c_sy, c_h;
};
TransferCoeffs interpolated_transfer_coeffs(double theta, double eps);

// --- action evaluators on square periodic grids -----------------------------

// Lorentz subclass: S = int Psi-bar (i dslash - m) Psi, summed over flavors.
Cplx dirac_action(const FieldConfiguration& cfg, double m, DerivMode mode);

// Pre-subclass form: S = int Psi' (-d_t + J(t) sz^mu sx sz^mu i d_x + m0 sz) Psi
// with J sampled per row (t) and m0 per grid point.
Cplx general_action(const FieldConfiguration& cfg, const Vec& j_of_t, const Mat& m0_grid,
                    DerivMode mode);

// One-parameter family; theta = 0 is dirac_action, theta = pi/2 is
// euclidean_action.  The measure factor sqrt(-det eta(theta)) is continued as
// the constant 1 across the singularity.
Cplx family_action(const FieldConfiguration& cfg, double m, double theta, DerivMode mode);

// S_E = int Psi' (i gamma5_E)(i dslash_E - m) Psi with gamma5_E = -i gamma0.
Cplx euclidean_action(const FieldConfiguration& cfg, double m, DerivMode mode);

// Psi'(r) = Lambda_s(alpha; pi/2) Psi(V^{-1}(r - c) + c) about the center c
// (grid units of the extent); exact index permutation for multiples of pi/2
// about the origin, spectral resampling otherwise.
FieldConfiguration rotate_config(const FieldConfiguration& cfg, double alpha,
                                 double center_t = 0.0, double center_x = 0.0);

// j^mu = Psi-bar gamma^mu Psi and the spectral divergence residual.
struct CurrentReport {
  Mat j0, j1;
  double divergence_norm = 0.0;  // max |d_mu j^mu| over the grid
};
CurrentReport conserved_current(const FieldConfiguration& cfg);

// On-shell plane-wave solution of (i dslash - m) Psi = 0 with spatial mode
// number k_x; for m = 0 the frequency lands on the grid as well.
FieldConfiguration on_shell_plane_wave(const GridSpec& grid, double m, int k_x_index,
                                       double amplitude = 1.0);

double sqrt_cos2theta_abs(double theta);

}  // namespace cpeps
