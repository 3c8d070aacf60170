#pragma once

#include <utility>
#include <vector>

#include "cpeps/fields.hpp"
#include "cpeps/types.hpp"

namespace cpeps {

// Diagonal coordinates u = (x - y)/2, v = (x + y)/2; v is the auxiliary time.
// Basic translations step by eps/2 in both coordinates.
struct DiagonalLattice {
  int n_u = 2;
  int n_v = 2;
  double eps = 1.0;

  static std::pair<double, double> to_xy(double u, double v) { return {u + v, v - u}; }
  static std::pair<double, double> to_uv(double x, double y) {
    return {0.5 * (x - y), 0.5 * (x + y)};
  }
};

// Per-site tensor A^r_{(i j k l)}: creates the (a, b) pair at the site with
// flavors (i, j) while absorbing the incoming a (flavor k, from u + eps/2) and
// b (flavor l, from u - eps/2).  The structured Q candidate keeps its
// single-species quadratic form alongside the expanded tensor: the expansion
// is an identity on the one-a + one-b sector, but the coherent-state element
// of the quadratic form is quadratic, not quartic, in the labels.
struct SquarePepsTensor {
  enum class Kind { Raw, Q, Quartic };

  Kind kind = Kind::Raw;
  int d = 1;      // bond (flavor) dimension
  int r_dim = 1;  // physical index range
  std::vector<Vec> a;  // a[r], flattened ((i*d + j)*d + k)*d + l
  Mat q_a, q_b;        // Kind::Q only; already carrying the eps/2 scale

  Cplx entry(int r, int i, int j, int k, int l) const {
    return a[r](((i * d + j) * d + k) * d + l);
  }

  static SquarePepsTensor zero(int d, int r_dim);
  static SquarePepsTensor from_raw(int d, std::vector<Vec> a);
  // M = 1 + (eps/2)(Q_a^{ij} a'_i a_j + Q_b^{ij} b'_i b_j), species consistent.
  static SquarePepsTensor from_q(double eps, const Mat& q_a, const Mat& q_b);
  // M = 1 + eps R^{(ia ib)(ja jb)} (a' b')(a b): quartic in coherent labels.
  static SquarePepsTensor from_quartic(double eps, const Vec& r_hat, int d);
  // the same operator content with the Q structure erased (sector identity)
  SquarePepsTensor expanded() const;
};

// Boundary vectors on the one-a + one-b particle sector of a diagonal slice;
// basis index ((pa*d + fa)*n_u + pb)*d + fb.
struct SquareBoundary {
  Vec omega_l, omega_r;
};
SquareBoundary uniform_square_boundary(int n_u, int d);

// <omega_L| U[r(v_0)] ... U[r(v_{N-1})] |omega_R> on the (1,1) sector for a
// fixed physical index array r[n][i]; per-slice transfer U = L[r] * S_a with
// S_a the half-step drift of the a species.
Cplx contract_square(const DiagonalLattice& lat,
                     const std::vector<std::vector<SquarePepsTensor>>& site_tensors,
                     const std::vector<std::vector<int>>& r_array,
                     const SquareBoundary& boundary);

// Independent oracle: direct enumeration of scattering histories (bond index
// configurations of the same network).
Cplx contract_square_bruteforce(const DiagonalLattice& lat,
                                const std::vector<std::vector<SquarePepsTensor>>& site_tensors,
                                const std::vector<std::vector<int>>& r_array,
                                const SquareBoundary& boundary);

// Coherent labels on a diagonal slice: label(site, species, flavor).
struct SliceLabels {
  int n_u = 1, d = 1;
  std::vector<Cplx> vals;  // ((i * 2 + species) * d + flavor)

  Cplx& at(int i, int species, int flavor) {
    return vals[(i * 2 + species) * d + flavor];
  }
  Cplx at(int i, int species, int flavor) const {
    return vals[(i * 2 + species) * d + flavor];
  }
  static SliceLabels zero(int n_u, int d);
};

// Normal-ordered coherent matrix element of one transfer slice (identity
// transport pairs out(i, a) with in(i+1, a) and out(i, b) with in(i, b)).
Cplx square_step_amplitude(const DiagonalLattice& lat,
                           const std::vector<SquarePepsTensor>& slice_tensors,
                           const std::vector<int>& r_slice, const SliceLabels& out,
                           const SliceLabels& in);

// Species-mixing variant of the Q candidate, sum_ij Q_a^{ij} a'_i b_j, built
// on a per-site two-species bosonic basis.  Its non-identity part maps the
// one-a + one-b sector entirely into (2a, 0b): the within-sector block
// vanishes identically while the cross-sector block carries all the weight,
// which is why the species-consistent a'a form is the default.
struct LiteralQSectorNorms {
  double within_sector = 0.0;
  double cross_sector = 0.0;
};
LiteralQSectorNorms literal_q_candidate_norms(const Mat& q_a);

// Discrete actions.  In (u, v) coordinates the density is
//   (1/2) Psi' (sigma_z d_u + d_v) Psi - Q Psi' Psi      (axis0 = v, axis1 = u)
// and transforming x = u + v, y = v - u yields the gradient form
//   (1/2) (phi_a* d_x phi_a + phi_b* d_y phi_b - Q Psi' Psi)  (axis0 = y, axis1 = x)
// with the Jacobian absorbed so that plane-wave values coincide.
Cplx square_action_uv(const FieldConfiguration& cfg, double q, DerivMode mode);
Cplx square_action_xy(const FieldConfiguration& cfg, double q, DerivMode mode);

// |S[rotate(cfg, alpha)] - S[cfg]| / |S[cfg]| for the square-lattice action.
double anisotropy_witness(const FieldConfiguration& cfg, double alpha, double q,
                          DerivMode mode);

}  // namespace cpeps
