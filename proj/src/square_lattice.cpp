#include "cpeps/square_lattice.hpp"

#include <cmath>

#include "cpeps/clifford.hpp"

namespace cpeps {

SquarePepsTensor SquarePepsTensor::zero(int d, int r_dim) {
  SquarePepsTensor t;
  t.d = d;
  t.r_dim = r_dim;
  t.a.assign(r_dim, Vec::Zero(d * d * d * d));
  return t;
}

SquarePepsTensor SquarePepsTensor::from_raw(int d, std::vector<Vec> a) {
  SquarePepsTensor t;
  t.d = d;
  t.r_dim = static_cast<int>(a.size());
  for (const auto& v : a)
    if (v.size() != static_cast<long>(d) * d * d * d)
      throw ConfigError("SquarePepsTensor: tensor size does not match d^4");
  t.a = std::move(a);
  return t;
}

SquarePepsTensor SquarePepsTensor::from_q(double eps, const Mat& q_a, const Mat& q_b) {
  const int d = static_cast<int>(q_a.rows());
  SquarePepsTensor t = zero(d, 1);
  t.kind = Kind::Q;
  t.q_a = 0.5 * eps * q_a;
  t.q_b = 0.5 * eps * q_b;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l)
          t.a[0](((i * d + j) * d + k) * d + l) =
              t.q_a(i, k) * (j == l ? 1.0 : 0.0) + (i == k ? 1.0 : 0.0) * t.q_b(j, l);
  return t;
}

SquarePepsTensor SquarePepsTensor::from_quartic(double eps, const Vec& r_hat, int d) {
  SquarePepsTensor t = zero(d, 1);
  t.kind = Kind::Quartic;
  if (r_hat.size() != static_cast<long>(d) * d * d * d)
    throw ConfigError("SquarePepsTensor: R-hat size does not match d^4");
  t.a[0] = eps * r_hat;
  return t;
}

SquarePepsTensor SquarePepsTensor::expanded() const {
  SquarePepsTensor t = *this;
  t.kind = Kind::Raw;
  t.q_a = Mat();
  t.q_b = Mat();
  return t;
}

SquareBoundary uniform_square_boundary(int n_u, int d) {
  SquareBoundary b;
  const int dim = n_u * d * n_u * d;
  b.omega_l = Vec::Constant(dim, 1.0 / std::sqrt(double(dim)));
  b.omega_r = b.omega_l;
  return b;
}

namespace {

inline int sector_index(int pa, int fa, int pb, int fb, int n_u, int d) {
  return ((pa * d + fa) * n_u + pb) * d + fb;
}

void check_shapes(const DiagonalLattice& lat,
                  const std::vector<std::vector<SquarePepsTensor>>& site_tensors,
                  const std::vector<std::vector<int>>& r_array) {
  if (static_cast<int>(site_tensors.size()) != lat.n_v ||
      static_cast<int>(r_array.size()) != lat.n_v)
    throw ConfigError("contract_square: slice count mismatch");
  for (int n = 0; n < lat.n_v; ++n) {
    if (static_cast<int>(site_tensors[n].size()) != lat.n_u ||
        static_cast<int>(r_array[n].size()) != lat.n_u)
      throw ConfigError("contract_square: site count mismatch");
    for (int i = 0; i < lat.n_u; ++i)
      if (r_array[n][i] < 0 || r_array[n][i] >= site_tensors[n][i].r_dim)
        throw ConfigError("contract_square: physical index out of range");
  }
}

}  // namespace

Cplx contract_square(const DiagonalLattice& lat,
                     const std::vector<std::vector<SquarePepsTensor>>& site_tensors,
                     const std::vector<std::vector<int>>& r_array,
                     const SquareBoundary& boundary) {
  check_shapes(lat, site_tensors, r_array);
  const int d = site_tensors[0][0].d;
  const int n_u = lat.n_u;
  const long dim = static_cast<long>(n_u) * d * n_u * d;
  if (boundary.omega_l.size() != dim || boundary.omega_r.size() != dim)
    throw ConfigError("contract_square: boundary dimension mismatch");

  Vec state = boundary.omega_r;
  for (int n = lat.n_v - 1; n >= 0; --n) {
    // drift: outgoing a at index i comes from incoming a at index i + 1
    Vec shifted = Vec::Zero(dim);
    for (int pa = 0; pa < n_u; ++pa)
      for (int fa = 0; fa < d; ++fa)
        for (int pb = 0; pb < n_u; ++pb)
          for (int fb = 0; fb < d; ++fb)
            shifted(sector_index(pa, fa, pb, fb, n_u, d)) =
                state(sector_index((pa + 1) % n_u, fa, pb, fb, n_u, d));
    Vec next = shifted;
    for (int i = 0; i < n_u; ++i) {
      const SquarePepsTensor& t = site_tensors[n][i];
      const int r = r_array[n][i];
      for (int ia = 0; ia < d; ++ia)
        for (int ib = 0; ib < d; ++ib)
          for (int ja = 0; ja < d; ++ja)
            for (int jb = 0; jb < d; ++jb) {
              const Cplx amp = t.entry(r, ia, ib, ja, jb);
              if (amp == 0.0) continue;
              next(sector_index(i, ia, i, ib, n_u, d)) +=
                  amp * shifted(sector_index(i, ja, i, jb, n_u, d));
            }
    }
    state = std::move(next);
  }
  return boundary.omega_l.dot(state);
}

namespace {

void brute_recurse(const DiagonalLattice& lat,
                   const std::vector<std::vector<SquarePepsTensor>>& site_tensors,
                   const std::vector<std::vector<int>>& r_array, const Vec& omega_l,
                   int slice, int pa, int fa, int pb, int fb, Cplx weight, Cplx& acc) {
  const int n_u = lat.n_u;
  const int d = site_tensors[0][0].d;
  if (slice < 0) {
    acc += std::conj(omega_l(sector_index(pa, fa, pb, fb, n_u, d))) * weight;
    return;
  }
  const int pa_shift = (pa - 1 + n_u) % n_u;
  // no scattering on this slice
  brute_recurse(lat, site_tensors, r_array, omega_l, slice - 1, pa_shift, fa, pb, fb,
                weight, acc);
  if (pa_shift == pb) {
    const int i = pb;
    const SquarePepsTensor& t = site_tensors[slice][i];
    const int r = r_array[slice][i];
    for (int ia = 0; ia < d; ++ia)
      for (int ib = 0; ib < d; ++ib) {
        const Cplx amp = t.entry(r, ia, ib, fa, fb);
        if (amp == 0.0) continue;
        brute_recurse(lat, site_tensors, r_array, omega_l, slice - 1, i, ia, i, ib,
                      weight * amp, acc);
      }
  }
}

}  // namespace

Cplx contract_square_bruteforce(const DiagonalLattice& lat,
                                const std::vector<std::vector<SquarePepsTensor>>& site_tensors,
                                const std::vector<std::vector<int>>& r_array,
                                const SquareBoundary& boundary) {
  check_shapes(lat, site_tensors, r_array);
  const int d = site_tensors[0][0].d;
  const int n_u = lat.n_u;
  Cplx acc = 0.0;
  for (int pa = 0; pa < n_u; ++pa)
    for (int fa = 0; fa < d; ++fa)
      for (int pb = 0; pb < n_u; ++pb)
        for (int fb = 0; fb < d; ++fb)
          brute_recurse(lat, site_tensors, r_array, boundary.omega_l, lat.n_v - 1, pa, fa,
                        pb, fb, boundary.omega_r(sector_index(pa, fa, pb, fb, n_u, d)),
                        acc);
  return acc;
}

SliceLabels SliceLabels::zero(int n_u, int d) {
  SliceLabels s;
  s.n_u = n_u;
  s.d = d;
  s.vals.assign(static_cast<size_t>(n_u) * 2 * d, Cplx(0.0));
  return s;
}

Cplx square_step_amplitude(const DiagonalLattice& lat,
                           const std::vector<SquarePepsTensor>& slice_tensors,
                           const std::vector<int>& r_slice, const SliceLabels& out,
                           const SliceLabels& in) {
  const int n_u = lat.n_u;
  const int d = out.d;
  // identity transport: out(i, a) <- in(i+1, a), out(i, b) <- in(i, b)
  Cplx expo = 0.0;
  for (int i = 0; i < n_u; ++i)
    for (int f = 0; f < d; ++f) {
      expo += std::conj(out.at(i, 0, f)) * in.at((i + 1) % n_u, 0, f);
      expo += std::conj(out.at(i, 1, f)) * in.at(i, 1, f);
      for (int s = 0; s < 2; ++s)
        expo -= 0.5 * (std::norm(out.at(i, s, f)) + std::norm(in.at(i, s, f)));
    }
  Cplx poly = 1.0;
  for (int i = 0; i < n_u; ++i) {
    const SquarePepsTensor& t = slice_tensors[i];
    Cplx site = 1.0;
    if (t.kind == SquarePepsTensor::Kind::Q) {
      // quadratic candidate: normal-ordered element is bilinear in the labels
      for (int f = 0; f < d; ++f)
        for (int g = 0; g < d; ++g) {
          site += t.q_a(f, g) * std::conj(out.at(i, 0, f)) * in.at((i + 1) % n_u, 0, g);
          site += t.q_b(f, g) * std::conj(out.at(i, 1, f)) * in.at(i, 1, g);
        }
    } else {
      for (int ia = 0; ia < d; ++ia)
        for (int ib = 0; ib < d; ++ib)
          for (int ja = 0; ja < d; ++ja)
            for (int jb = 0; jb < d; ++jb) {
              const Cplx amp = t.entry(r_slice[i], ia, ib, ja, jb);
              if (amp == 0.0) continue;
              site += amp * std::conj(out.at(i, 0, ia)) * std::conj(out.at(i, 1, ib)) *
                      in.at((i + 1) % n_u, 0, ja) * in.at(i, 1, jb);
            }
    }
    poly *= site;
  }
  return poly * std::exp(expo);
}

LiteralQSectorNorms literal_q_candidate_norms(const Mat& q_a) {
  const int d = static_cast<int>(q_a.rows());
  // one-a + one-b sector basis: (a flavor m, b flavor j); image sector
  // (2a, 0b): unordered a pairs (i <= k)
  const int dim11 = d * d;
  std::vector<std::pair<int, int>> pairs20;
  for (int i = 0; i < d; ++i)
    for (int k = i; k < d; ++k) pairs20.push_back({i, k});
  Mat within = Mat::Zero(dim11, dim11);
  Mat cross = Mat::Zero(static_cast<int>(pairs20.size()), dim11);
  for (int m = 0; m < d; ++m) {
    for (int j = 0; j < d; ++j) {
      const int col = m * d + j;
      // sum_i Q_a^{ij} a'_i b_j |a_m b_j> = sum_i Q_a^{ij} sqrt(1 + delta_im) |a_i a_m>
      for (int i = 0; i < d; ++i) {
        const Cplx amp = q_a(i, j) * std::sqrt(i == m ? 2.0 : 1.0);
        const auto key = std::minmax(i, m);
        for (size_t row = 0; row < pairs20.size(); ++row)
          if (pairs20[row] == std::pair<int, int>{key.first, key.second})
            cross(static_cast<int>(row), col) += amp;
      }
    }
  }
  LiteralQSectorNorms out;
  Eigen::JacobiSVD<Mat> sw(within), sc(cross);
  out.within_sector = sw.singularValues().size() ? sw.singularValues()(0) : 0.0;
  out.cross_sector = sc.singularValues().size() ? sc.singularValues()(0) : 0.0;
  return out;
}

Cplx square_action_uv(const FieldConfiguration& cfg, double q, DerivMode mode) {
  const double cell = cfg.grid.h() * cfg.grid.h();
  Cplx acc = 0.0;
  for (int fl = 0; fl < cfg.n_flavors(); ++fl) {
    const auto& psi = cfg.comp[fl];
    const Mat du_a = grid_derivative(psi[0], 1, cfg.grid, mode);
    const Mat du_b = grid_derivative(psi[1], 1, cfg.grid, mode);
    const Mat dv_a = grid_derivative(psi[0], 0, cfg.grid, mode);
    const Mat dv_b = grid_derivative(psi[1], 0, cfg.grid, mode);
    // (1/2) Psi' (sigma_z d_u + d_v) Psi - Q Psi' Psi
    acc += 0.5 * (psi[0].conjugate().cwiseProduct(du_a + dv_a).sum() +
                  psi[1].conjugate().cwiseProduct(-du_b + dv_b).sum());
    acc -= q * (psi[0].conjugate().cwiseProduct(psi[0]).sum() +
                psi[1].conjugate().cwiseProduct(psi[1]).sum());
  }
  return cell * acc;
}

Cplx square_action_xy(const FieldConfiguration& cfg, double q, DerivMode mode) {
  const double cell = cfg.grid.h() * cfg.grid.h();
  Cplx acc = 0.0;
  for (int fl = 0; fl < cfg.n_flavors(); ++fl) {
    const auto& psi = cfg.comp[fl];
    const Mat dx_a = grid_derivative(psi[0], 1, cfg.grid, mode);
    const Mat dy_b = grid_derivative(psi[1], 0, cfg.grid, mode);
    acc += 0.5 * (psi[0].conjugate().cwiseProduct(dx_a).sum() +
                  psi[1].conjugate().cwiseProduct(dy_b).sum());
    acc -= 0.5 * q * (psi[0].conjugate().cwiseProduct(psi[0]).sum() +
                      psi[1].conjugate().cwiseProduct(psi[1]).sum());
  }
  return cell * acc;
}

double anisotropy_witness(const FieldConfiguration& cfg, double alpha, double q,
                          DerivMode mode) {
  const Cplx s0 = square_action_xy(cfg, q, mode);
  const Cplx s1 = square_action_xy(rotate_config(cfg, alpha), q, mode);
  if (std::abs(s0) == 0.0) throw ToleranceError("anisotropy_witness: zero base action");
  return std::abs(s1 - s0) / std::abs(s0);
}

}  // namespace cpeps
