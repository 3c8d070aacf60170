#pragma once

#include <vector>

#include "cpeps/model.hpp"

namespace cpeps {

// Occupation-resolved step tensors: a[n] is the D x D auxiliary matrix that
// accompanies n physical quanta in one discretization cell of width delta.
struct StepMatrices {
  std::vector<Mat> a;  // n = 0 .. n_max
};

// First-order step from the path-ordered exponent: a0 = 1 - i delta K,
// a1 = sqrt(delta) R, higher occupancies zero.
StepMatrices discretize_step(const CmpsSpec& cmps, double delta);

// Matrix exponential of the full cell generator on aux x {0..n_max}; differs
// from the first-order step at O(delta^2).
StepMatrices discretize_step_exp(const CmpsSpec& cmps, double delta);

struct PhysicalStateVector1D {
  int n_steps = 0;
  int n_max = 1;
  double delta = 0.0;
  Vec amplitudes;  // mixed-radix pattern order, site 0 least significant
  double norm = 0.0;
};

// Amplitude of pattern (n_1..n_N) is <omega_L| a[n_N] ... a[n_1] |omega_R>.
PhysicalStateVector1D path_ordered_state(const CmpsSpec& cmps,
                                         long budget_bytes = 512l << 20);

// Same state via the path-integral route: exact Berezin contraction of the
// coherent-state resolutions (fermionic), or the operator identity on the
// number-conserving Fock embedding (bosonic).  No quadrature anywhere.
PhysicalStateVector1D path_integral_state_1d(const CmpsSpec& cmps,
                                             long budget_bytes = 512l << 20);

// <psi' psi> at the mid cell over delta, from the doubled transfer matrix.
double density_estimate(const CmpsSpec& cmps, int n_steps);
double norm_estimate(const CmpsSpec& cmps, int n_steps);

// Richardson extrapolation of f(n) over a doubling ladder of n_steps.
double richardson_extrapolate(const std::vector<double>& values);

// Diagnostic for the action sign convention: compares the product of step
// amplitudes on a sampled bosonic trajectory against exp(+iS) and exp(-iS)
// with S the discrete first-order action; returns +1 or -1 for the better
// match.
int action_sign_mode(const CmpsSpec& cmps, int n_steps, unsigned seed);

}  // namespace cpeps
