#include "cpeps/cmps1d.hpp"

#include <cmath>
#include <map>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "cpeps/fock.hpp"
#include "cpeps/grassmann.hpp"
#include "cpeps/oracle.hpp"

namespace cpeps {

StepMatrices discretize_step(const CmpsSpec& cmps, double delta) {
  if (delta <= 0) throw ConfigError("discretize_step: delta must be positive");
  StepMatrices s;
  s.a.resize(cmps.n_max + 1, Mat::Zero(cmps.d, cmps.d));
  s.a[0] = Mat::Identity(cmps.d, cmps.d) - Cplx(0, delta) * cmps.k;
  if (cmps.n_max >= 1) s.a[1] = std::sqrt(delta) * cmps.r1;
  return s;
}

StepMatrices discretize_step_exp(const CmpsSpec& cmps, double delta) {
  if (delta <= 0) throw ConfigError("discretize_step: delta must be positive");
  const int d = cmps.d;
  const int nb = cmps.n_max + 1;
  // generator on aux x {0..n_max}; index = n * d + i
  Mat gen = Mat::Zero(d * nb, d * nb);
  const double sq = std::sqrt(delta);
  for (int n = 0; n < nb; ++n) {
    gen.block(n * d, n * d, d, d) = Cplx(0, -delta) * cmps.k;
    if (n + 1 < nb) {
      const double amp = std::sqrt(n + 1.0);
      gen.block((n + 1) * d, n * d, d, d) = sq * amp * cmps.r1;          // R x a'
      gen.block(n * d, (n + 1) * d, d, d) = -sq * amp * cmps.r1.adjoint();  // -R' x a
    }
  }
  const Mat step = gen.exp();
  StepMatrices s;
  s.a.resize(nb);
  for (int n = 0; n < nb; ++n) s.a[n] = step.block(n * d, 0, d, d);
  return s;
}

namespace {

long pattern_dim(int n_steps, int n_max, long budget_bytes) {
  long dim = 1;
  for (int i = 0; i < n_steps; ++i) {
    dim *= (n_max + 1);
    if (dim * 16 > budget_bytes)
      throw ResourceError("cmps1d: pattern space of (n_max+1)^n_steps amplitudes "
                          "exceeds the memory budget");
  }
  return dim;
}

void fill_amplitudes(const std::vector<Mat>& a, const Vec& wl, const Vec& v,
                     int step, int n_steps, long pattern, long stride, Vec& out) {
  if (step == n_steps) {
    out(pattern) = wl.dot(v);  // <omega_L| v  (conjugating dot)
    return;
  }
  for (size_t n = 0; n < a.size(); ++n) {
    const Vec next = a[n] * v;
    if (next.isZero(0) && n > 0) continue;
    fill_amplitudes(a, wl, next, step + 1, n_steps, pattern + stride * n, stride * a.size(), out);
  }
}

}  // namespace

PhysicalStateVector1D path_ordered_state(const CmpsSpec& cmps, long budget_bytes) {
  PhysicalStateVector1D st;
  st.n_steps = cmps.n_steps;
  st.n_max = cmps.n_max;
  st.delta = cmps.l / cmps.n_steps;
  const long dim = pattern_dim(cmps.n_steps, cmps.n_max, budget_bytes);
  const StepMatrices s = cmps.exp_step ? discretize_step_exp(cmps, st.delta)
                                       : discretize_step(cmps, st.delta);
  st.amplitudes = Vec::Zero(dim);
  fill_amplitudes(s.a, cmps.omega_l, cmps.omega_r, 0, cmps.n_steps, 0, 1, st.amplitudes);
  st.norm = st.amplitudes.norm();
  return st;
}

namespace {

// sector index -> occupied mode for the one-particle sector
std::vector<int> sector_mode_map(const AuxBasis& sector) {
  std::vector<int> map(sector.dim(), -1);
  for (int i = 0; i < sector.dim(); ++i) {
    const auto& occ = sector.occupation(i);
    for (int m = 0; m < sector.n_modes(); ++m)
      if (occ[m]) map[i] = m;
  }
  return map;
}

Vec embed_boundary(const Vec& omega, const AuxBasis& sector) {
  const auto map = sector_mode_map(sector);
  Vec v = Vec::Zero(sector.dim());
  for (int i = 0; i < sector.dim(); ++i) v(i) = omega(map[i]);
  return v;
}

PhysicalStateVector1D berezin_state(const CmpsSpec& cmps, long budget_bytes) {
  PhysicalStateVector1D st;
  st.n_steps = cmps.n_steps;
  st.n_max = cmps.n_max;
  st.delta = cmps.l / cmps.n_steps;
  const long dim = pattern_dim(cmps.n_steps, cmps.n_max, budget_bytes);
  const int d = cmps.d;
  if (4 * d > 64)
    throw ResourceError("cmps1d: live Grassmann window exceeds 64 generators");

  const AuxBasis sector = AuxBasis::fermionic_sector(d, 1);
  const Vec wl = embed_boundary(cmps.omega_l, sector);
  const Vec wr = embed_boundary(cmps.omega_r, sector);

  auto slice_ids = [&](int slice) { return SliceIds{(slice % 2) * 2 * d, d}; };
  auto integrate_slice = [&](const GrassmannElement& e, const SliceIds& s) {
    GrassmannElement cur = e;
    for (int m = 0; m < s.n; ++m) cur = berezin_pair(cur, s.phi(m), s.star(m));
    return cur;
  };

  std::map<long, GrassmannElement> state;
  state[0] = bra_boundary_overlap(wr, sector, slice_ids(0));

  long stride = 1;
  for (int j = 0; j < cmps.n_steps; ++j) {
    const SliceIds in = slice_ids(j);
    const SliceIds out = slice_ids(j + 1);
    const GrassmannElement ovl = coherent_overlap(out, in);
    const GrassmannElement a0 =
        ovl + Cplx(0, -st.delta) * (coherent_bilinear(cmps.k, out, in) * ovl);
    const GrassmannElement a1 =
        Cplx(std::sqrt(st.delta)) * (coherent_bilinear(cmps.r1, out, in) * ovl);
    std::map<long, GrassmannElement> next;
    for (const auto& [pattern, elem] : state) {
      next[pattern] += integrate_slice(a0 * elem, in);
      if (cmps.n_max >= 1) {
        GrassmannElement emitted = integrate_slice(a1 * elem, in);
        if (!emitted.empty()) next[pattern + stride] += emitted;
      }
    }
    stride *= (cmps.n_max + 1);
    state = std::move(next);
  }

  const SliceIds last = slice_ids(cmps.n_steps);
  const GrassmannElement left = ket_boundary_overlap(wl, sector, last);
  st.amplitudes = Vec::Zero(dim);
  for (const auto& [pattern, elem] : state) {
    GrassmannElement done = integrate_slice(left * elem, last);
    if (!done.is_scalar(1e-13))
      throw ToleranceError("cmps1d: residual generators after full Berezin integration");
    st.amplitudes(pattern) = done.scalar_part();
  }
  st.norm = st.amplitudes.norm();
  return st;
}

PhysicalStateVector1D operator_identity_state(const CmpsSpec& cmps, long budget_bytes) {
  // Bosonic route: the coherent resolutions compose to the plain step product
  // on the number-conserving Fock embedding; evaluate that product in the
  // one-particle sector.
  PhysicalStateVector1D st;
  st.n_steps = cmps.n_steps;
  st.n_max = cmps.n_max;
  st.delta = cmps.l / cmps.n_steps;
  const long dim = pattern_dim(cmps.n_steps, cmps.n_max, budget_bytes);
  const AuxBasis sector = AuxBasis::bosonic_sector(cmps.d, 1, 1);
  const auto map = sector_mode_map(sector);
  const int sd = sector.dim();
  Mat k_emb = Mat::Zero(sd, sd), r_emb = Mat::Zero(sd, sd);
  for (int i = 0; i < sd; ++i)
    for (int j = 0; j < sd; ++j) {
      k_emb(i, j) = cmps.k(map[i], map[j]);
      r_emb(i, j) = cmps.r1(map[i], map[j]);
    }
  std::vector<Mat> a(cmps.n_max + 1, Mat::Zero(sd, sd));
  a[0] = Mat::Identity(sd, sd) - Cplx(0, st.delta) * k_emb;
  a[1] = std::sqrt(st.delta) * r_emb;
  const Vec wl = embed_boundary(cmps.omega_l, sector);
  const Vec wr = embed_boundary(cmps.omega_r, sector);
  st.amplitudes = Vec::Zero(dim);
  fill_amplitudes(a, wl, wr, 0, cmps.n_steps, 0, 1, st.amplitudes);
  st.norm = st.amplitudes.norm();
  return st;
}

}  // namespace

PhysicalStateVector1D path_integral_state_1d(const CmpsSpec& cmps, long budget_bytes) {
  if (cmps.exp_step)
    throw ConfigError("path_integral_state_1d: only the first-order reference step "
                      "has a path-integral form");
  if (cmps.statistics == AuxStatistics::Fermionic) return berezin_state(cmps, budget_bytes);
  return operator_identity_state(cmps, budget_bytes);
}

namespace {

Mat doubled_transfer(const std::vector<Mat>& a, int weight_power) {
  const int d = static_cast<int>(a[0].rows());
  Mat e = Mat::Zero(d * d, d * d);
  for (size_t n = 0; n < a.size(); ++n) {
    double w = 1.0;
    for (int p = 0; p < weight_power; ++p) w *= static_cast<double>(n);
    if (w == 0.0 && weight_power > 0) continue;
    // kron(A, conj(A)) with pair index (row a, row b) = a*d + b
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k)
          for (int l = 0; l < d; ++l)
            e(i * d + j, k * d + l) += w * a[n](i, k) * std::conj(a[n](j, l));
  }
  return e;
}

Vec vec_outer(const Vec& w) {
  const int d = static_cast<int>(w.size());
  Vec v(d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) v(i * d + j) = w(i) * std::conj(w(j));
  return v;
}

}  // namespace

double norm_estimate(const CmpsSpec& cmps, int n_steps) {
  CmpsSpec c = cmps;
  c.n_steps = n_steps;
  const double delta = c.l / n_steps;
  const StepMatrices s =
      c.exp_step ? discretize_step_exp(c, delta) : discretize_step(c, delta);
  const Mat e = doubled_transfer(s.a, 0);
  Vec v = vec_outer(c.omega_r);
  for (int j = 0; j < n_steps; ++j) v = e * v;
  const Cplx n2 = vec_outer(c.omega_l).dot(v);
  return std::sqrt(std::max(0.0, n2.real()));
}

double density_estimate(const CmpsSpec& cmps, int n_steps) {
  CmpsSpec c = cmps;
  c.n_steps = n_steps;
  const double delta = c.l / n_steps;
  const StepMatrices s =
      c.exp_step ? discretize_step_exp(c, delta) : discretize_step(c, delta);
  const Mat e = doubled_transfer(s.a, 0);
  const Mat num = doubled_transfer(s.a, 1);
  const int mid = n_steps / 2;
  Vec v = vec_outer(c.omega_r);
  for (int j = 0; j < mid; ++j) v = e * v;
  Vec v_num = num * v;
  for (int j = mid + 1; j < n_steps; ++j) v_num = e * v_num;
  for (int j = mid; j < n_steps; ++j) v = e * v;
  const Vec l = vec_outer(c.omega_l);
  const Cplx norm2 = l.dot(v);
  const Cplx occ = l.dot(v_num);
  if (std::abs(norm2) == 0.0) throw ToleranceError("density_estimate: zero norm");
  return (occ / norm2).real() / delta;
}

double richardson_extrapolate(const std::vector<double>& values) {
  // values[i] = f(delta / 2^i); leading error first order in delta
  std::vector<double> t = values;
  const int n = static_cast<int>(t.size());
  for (int k = 1; k < n; ++k) {
    const double w = std::pow(2.0, k);
    for (int i = 0; i + k < n; ++i) t[i] = (w * t[i + 1] - t[i]) / (w - 1.0);
  }
  return t[0];
}

int action_sign_mode(const CmpsSpec& cmps, int n_steps, unsigned seed) {
  // Constant bosonic trajectory: overlap factors cancel and only the K term
  // decides between exp(+iS) and exp(-iS).
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec phi(cmps.d);
  for (int i = 0; i < cmps.d; ++i) phi(i) = 0.5 * Cplx(gauss(rng), gauss(rng));
  const double delta = cmps.l / n_steps;
  Cplx log_p = 0.0;
  const Cplx kterm = (phi.adjoint() * cmps.k * phi)(0);
  for (int j = 0; j < n_steps; ++j)
    log_p += std::log(Cplx(1.0) - Cplx(0, delta) * kterm);
  const Cplx action = -cmps.l * kterm;  // S = int (i phi' d_t phi - phi' K phi), d_t phi = 0
  const double r_plus = std::abs(log_p - Cplx(0, 1) * action);
  const double r_minus = std::abs(log_p + Cplx(0, 1) * action);
  return r_plus <= r_minus ? +1 : -1;
}

}  // namespace cpeps
