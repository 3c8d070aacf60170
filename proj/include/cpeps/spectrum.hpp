#pragma once

#include <utility>
#include <vector>

#include "cpeps/model.hpp"

namespace cpeps {

// Momentum-space block of the one-body kernel on the (a, b) x flavor doublet.
struct KernelBlock {
  double p = 0.0;
  Mat block;  // 2d x 2d, basis (a j) then (b j)
};

// One-body matrix in the canonical (x, species, flavor) order with
// H = sum c' h c; dimension 2 d N_x.
Mat one_body_matrix(const ModelSpec& spec, int t);

// DFT conjugation of a translation-invariant kernel; exact block
// diagonalization at finite N_x.  Throws when couplings vary over x.
std::vector<KernelBlock> dft_kernel(const ModelSpec& spec, int t);

// Roots of 1 + 2 cos(p eps) on (0, pi/eps) by bisection: q_mu = (-1)^mu 2pi/(3 eps).
std::pair<double, double> dispersion_zeros(double eps);

struct DispersionPoint {
  double p = 0.0;   // relabeled momentum relative to q_mu
  double energy = 0.0;
  int sector = 0;   // mu
};

struct DispersionResult {
  std::vector<DispersionPoint> points;
  double raw_velocity = 0.0;   // Richardson-extrapolated cone slope at q_mu
  double fit_slope = 0.0;      // least squares E^2 = s p^2 + c0 over the window
  double fit_intercept = 0.0;
};

// Test instance J = j_scale * 1, m0 = m * 1 (hermitian), D = 1.  Energies are
// |eigenvalue|; the window must stay inside one sector (p_window < pi/(3 eps)).
DispersionResult low_energy_dispersion(int n_x, double eps, double j_scale, double m,
                                       double p_window);

// Parity-symmetrized squared dispersion at relabeled momentum p: the two
// sectors are sigma_z mirrors of one another, so the O(p^3) skew cancels.
std::vector<std::pair<double, double>> symmetrized_dispersion_sq(const DispersionResult& r);

// || P_{mu=0} h_f P_{mu=1} || (largest singular value of the windowed block)
// for h_f = sum_x f(x) a'_x a_x; the intra-sector companion is the mu=0 block.
struct FlavorCouplingReport {
  double inter_norm = 0.0;
  double intra_norm = 0.0;
};
FlavorCouplingReport flavor_coupling_norm(const std::vector<Mat>& f_profile, int n_x,
                                          double eps, double p_max);

struct EnvelopeDecomposition {
  std::vector<Cplx> envelope0, envelope1;  // position space, per site
  double weight0 = 0.0, weight1 = 0.0;
  double residual = 0.0;                   // weight outside both windows
};

// Windowed inverse DFT around q_0 and q_1 of a one-particle amplitude profile.
EnvelopeDecomposition envelope_decompose(const std::vector<Cplx>& amplitudes,
                                         double eps, double p_max);

// Default envelope half-width: half the sector separation.
inline double default_envelope_window(double eps) { return kPi / (6.0 * eps); }

}  // namespace cpeps
