#pragma once

#include <vector>

#include "cpeps/fock.hpp"
#include "cpeps/grassmann.hpp"
#include "cpeps/model.hpp"

namespace cpeps {

// Generator ids for one coherent-state slice: mode m owns the pair
// (phi_m, phi*_m) = (base + 2m, base + 2m + 1).  Two slice blocks are enough
// for the sweep; retired slices are integrated out and their ids recycled.
struct SliceIds {
  int base = 0;
  int n = 0;
  int phi(int m) const { return base + 2 * m; }
  int star(int m) const { return base + 2 * m + 1; }
};

// exp(-1/2 sum_m phi*_m phi_m)
GrassmannElement coherent_gaussian(const SliceIds& s);

// <phi_out | phi_in> = exp[ sum_m (phi*_out,m phi_in,m - |phi_out|^2/2 - |phi_in|^2/2) ]
GrassmannElement coherent_overlap(const SliceIds& out, const SliceIds& in);

// sum_{mn} coeff(m,n) phi*_out,m phi_in,n
GrassmannElement coherent_bilinear(const Mat& coeff, const SliceIds& out, const SliceIds& in);

// Fock expansion of D(phi)|Omega> over the full fermionic basis (index ==
// occupation mask): coefficient of |S| is sigma_k (prod_{m in S, asc} phi_m) *
// gauss with sigma_k = (-1)^{k(k-1)/2}.
std::vector<GrassmannElement> coherent_ket_coeffs(const SliceIds& s);
// <phi| in coefficient-left form: (-1)^k (prod asc phi*_m) * gauss per mask.
std::vector<GrassmannElement> coherent_bra_coeffs(const SliceIds& s);

// Apply a parity-even operator (full-basis sparse matrix) to a ket with
// Grassmann coefficients; even operators commute with the coefficients.
std::vector<GrassmannElement> apply_even_operator(const SpMat& op,
                                                  const std::vector<GrassmannElement>& ket);

// Pair a coefficient-left bra with a coefficient-left ket:
// sum_S b_S * [(-1)^{p(c_S) |S|} c_S].
GrassmannElement pair_bra_ket(const std::vector<GrassmannElement>& bra,
                              const std::vector<GrassmannElement>& ket);

// <phi | omega> and <omega | phi> for a sector-basis vector omega.
GrassmannElement bra_boundary_overlap(const Vec& omega, const AuxBasis& sector, const SliceIds& s);
GrassmannElement ket_boundary_overlap(const Vec& omega, const AuxBasis& sector, const SliceIds& s);

// <phi_out| M_eps(t) |phi_in> split by physical emission channel.
struct StepAmplitude {
  GrassmannElement no_emission;             // 1 + eps (H_m + H_h) part
  std::vector<GrassmannElement> emission;   // per x: eps * R-density, emits psi'(x,t)
};

// (ii) closed form: normal-ordered generators substitute phi*_out / phi_in.
StepAmplitude step_amplitude(const ModelSpec& spec, int t, const SliceIds& out,
                             const SliceIds& in);
// (i) operator route through the Fock expansion of both coherent states.
StepAmplitude step_amplitude_operator_route(const ModelSpec& spec, int t,
                                            const SliceIds& out, const SliceIds& in);

struct OracleOptions {
  int max_pairs = 16;  // total Grassmann generator pairs across all slices
};

// Exact Berezin contraction of the discrete path integral: inserts a coherent
// resolution per slice (N_t + 1 of them) and integrates every generator.
// Fermionic auxiliary only; returns physical amplitudes in the same pattern
// order as generate_state.
Vec contract_path_integral(const ModelSpec& spec, const OracleOptions& opt = {});

// Normalization constant of the bosonic coherent resolution of identity for
// n complex integration variables: pi^n (or the literal pi^{2n}).
double measure_pi_power(int n_complex_modes, bool paper_literal = false);

// Numeric (bosonic-label) coherent overlap and its discrete-derivative form;
// the two exponents differ by -|delta phi|^2 / 2 = O(eps^2) on smooth paths.
Cplx bosonic_overlap(const Vec& out, const Vec& in);
Cplx bosonic_overlap_discrete_derivative(const Vec& out, const Vec& in);

}  // namespace cpeps
