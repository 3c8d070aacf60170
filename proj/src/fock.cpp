#include "cpeps/fock.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <functional>

namespace cpeps {

namespace {

void enumerate_occs(int n_modes, int cutoff, int remaining, int mode,
                    std::vector<uint8_t>& cur,
                    std::vector<std::vector<uint8_t>>& out) {
  if (mode == n_modes) {
    if (remaining == 0) out.push_back(cur);
    return;
  }
  const int hi = std::min(cutoff, remaining);
  for (int n = 0; n <= hi; ++n) {
    cur[mode] = static_cast<uint8_t>(n);
    enumerate_occs(n_modes, cutoff, remaining - n, mode + 1, cur, out);
  }
  cur[mode] = 0;
}

}  // namespace

uint64_t AuxBasis::pack(const std::vector<uint8_t>& occ) const {
  if (stat_ == AuxStatistics::Fermionic) {
    uint64_t m = 0;
    for (int i = 0; i < n_modes_; ++i)
      if (occ[i]) m |= 1ull << i;
    return m;
  }
  // bosonic: base (cutoff+1) packing
  uint64_t key = 0;
  for (int i = n_modes_ - 1; i >= 0; --i) key = key * (cutoff_ + 1) + occ[i];
  return key;
}

void AuxBasis::build_index() {
  index_.clear();
  index_.reserve(occs_.size() * 2);
  for (int i = 0; i < dim(); ++i) index_[pack(occs_[i])] = i;
}

AuxBasis AuxBasis::fermionic_sector(int n_modes, int n_aux) {
  AuxBasis b;
  b.stat_ = AuxStatistics::Fermionic;
  b.n_modes_ = n_modes;
  b.cutoff_ = 1;
  b.n_aux_ = n_aux;
  std::vector<uint8_t> cur(n_modes, 0);
  enumerate_occs(n_modes, 1, n_aux, 0, cur, b.occs_);
  b.build_index();
  return b;
}

AuxBasis AuxBasis::fermionic_full(int n_modes) {
  AuxBasis b;
  b.stat_ = AuxStatistics::Fermionic;
  b.n_modes_ = n_modes;
  b.cutoff_ = 1;
  b.n_aux_ = -1;
  b.occs_.reserve(1ull << n_modes);
  for (uint64_t m = 0; m < (1ull << n_modes); ++m) {
    std::vector<uint8_t> occ(n_modes, 0);
    for (int i = 0; i < n_modes; ++i) occ[i] = (m >> i) & 1;
    b.occs_.push_back(std::move(occ));
  }
  b.build_index();
  return b;
}

AuxBasis AuxBasis::bosonic_sector(int n_modes, int cutoff, int n_aux) {
  AuxBasis b;
  b.stat_ = AuxStatistics::Bosonic;
  b.n_modes_ = n_modes;
  b.cutoff_ = cutoff;
  b.n_aux_ = n_aux;
  std::vector<uint8_t> cur(n_modes, 0);
  enumerate_occs(n_modes, cutoff, n_aux, 0, cur, b.occs_);
  b.build_index();
  return b;
}

uint64_t AuxBasis::mask(int idx) const { return pack(occs_[idx]); }

int AuxBasis::index_of_mask(uint64_t mask) const {
  auto it = index_.find(mask);
  return it == index_.end() ? -1 : it->second;
}

SpMat AuxBasis::quadratic(int m_create, int m_annihilate) const {
  std::vector<Triplet> trips;
  for (int col = 0; col < dim(); ++col) {
    const auto& occ = occs_[col];
    if (occ[m_annihilate] == 0) continue;
    if (stat_ == AuxStatistics::Fermionic) {
      uint64_t m = pack(occ);
      double sign = 1.0;
      // annihilate
      {
        const uint64_t below = m & ((1ull << m_annihilate) - 1ull);
        if (std::popcount(below) & 1) sign = -sign;
        m &= ~(1ull << m_annihilate);
      }
      // create
      if (m & (1ull << m_create)) continue;
      {
        const uint64_t below = m & ((1ull << m_create) - 1ull);
        if (std::popcount(below) & 1) sign = -sign;
        m |= 1ull << m_create;
      }
      const int row = index_of_mask(m);
      if (row >= 0) trips.emplace_back(row, col, Cplx(sign));
    } else {
      std::vector<uint8_t> occ2 = occ;
      double amp = std::sqrt(static_cast<double>(occ2[m_annihilate]));
      occ2[m_annihilate]--;
      if (occ2[m_create] >= cutoff_ && m_create != m_annihilate) continue;
      if (m_create == m_annihilate && occ2[m_create] + 1 > cutoff_) continue;
      amp *= std::sqrt(static_cast<double>(occ2[m_create] + 1));
      occ2[m_create]++;
      auto it = index_.find(pack(occ2));
      if (it != index_.end()) trips.emplace_back(it->second, col, Cplx(amp));
    }
  }
  SpMat out(dim(), dim());
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

SpMat AuxBasis::quadratic_form(const Mat& coeff) const {
  SpMat out(dim(), dim());
  for (int m = 0; m < n_modes_; ++m)
    for (int n = 0; n < n_modes_; ++n)
      if (coeff(m, n) != 0.0) out += coeff(m, n) * quadratic(m, n);
  return out;
}

SpMat AuxBasis::number_operator() const {
  std::vector<Triplet> trips;
  for (int i = 0; i < dim(); ++i) {
    long total = 0;
    for (uint8_t n : occs_[i]) total += n;
    trips.emplace_back(i, i, Cplx(static_cast<double>(total)));
  }
  SpMat out(dim(), dim());
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

long PhysBasis::dim() const {
  long d = 1;
  for (long i = 0; i < n_modes(); ++i) {
    d *= (n_max + 1);
    if (d < 0 || d > (1l << 40)) throw ResourceError("physical basis dimension overflow");
  }
  return d;
}

int PhysBasis::digit(long pattern, int mode) const {
  long p = pattern;
  for (int i = 0; i < mode; ++i) p /= (n_max + 1);
  return static_cast<int>(p % (n_max + 1));
}

long PhysBasis::bump(long pattern, int mode) const {
  long base = 1;
  for (int i = 0; i < mode; ++i) base *= (n_max + 1);
  return pattern + base;
}

long PhysBasis::total_occupation(long pattern) const {
  long total = 0;
  long p = pattern;
  for (long i = 0; i < n_modes(); ++i) {
    total += p % (n_max + 1);
    p /= (n_max + 1);
  }
  return total;
}

// One-body coefficient matrix of the hopping term: J^{jk}(t) multiplies both
// the a'b string and its h.c. (so H_h is hermitian iff J is).
Mat one_body_hopping_coeff(const ModelSpec& spec, int t) {
  const int d = spec.couplings.d;
  const int n_x = spec.lattice.n_x;
  const int n_modes = 2 * d * n_x;
  const Mat& J = spec.couplings.j_at(t);
  Mat h = Mat::Zero(n_modes, n_modes);
  const double w = 1.0 / spec.lattice.epsilon;
  for (int x = 0; x < n_x; ++x) {
    for (int dx = -1; dx <= 1; ++dx) {
      int xb = x + dx;
      if (xb < 0 || xb >= n_x) {
        if (spec.lattice.bc == SpatialBc::Open) continue;  // drop wrapping pair
        xb = (xb + n_x) % n_x;
      }
      for (int j = 0; j < d; ++j) {
        for (int k = 0; k < d; ++k) {
          // a'_{j,x} b_{k,x+dx} + b'_{j,x} a_{k,x+dx}, both with J^{jk}:
          // the conjugate string keeps the flavor slots, so H_h inherits
          // exactly the hermiticity of J
          h(mode_id({x, Species::A, j, {}}, d), mode_id({xb, Species::B, k, {}}, d)) +=
              w * J(j, k);
          h(mode_id({x, Species::B, j, {}}, d), mode_id({xb, Species::A, k, {}}, d)) +=
              w * J(j, k);
        }
      }
    }
  }
  return h;
}

Mat one_body_mass_coeff(const ModelSpec& spec, int t) {
  const int d = spec.couplings.d;
  const int n_x = spec.lattice.n_x;
  const int n_modes = 2 * d * n_x;
  Mat h = Mat::Zero(n_modes, n_modes);
  for (int x = 0; x < n_x; ++x) {
    const Mat& m0 = spec.couplings.m0_at(x, t);
    for (int j = 0; j < d; ++j) {
      for (int k = 0; k < d; ++k) {
        const int aj = mode_id({x, Species::A, j, {}}, d);
        const int ak = mode_id({x, Species::A, k, {}}, d);
        const int bj = mode_id({x, Species::B, j, {}}, d);
        const int bk = mode_id({x, Species::B, k, {}}, d);
        h(aj, ak) += m0(j, k);
        h(bj, bk) -= m0(j, k);
      }
    }
  }
  return h;
}

Mat one_body_density_coeff(const ModelSpec& spec, int x, int t) {
  const int d = spec.couplings.d;
  const int n_modes = 2 * d * spec.lattice.n_x;
  Mat h = Mat::Zero(n_modes, n_modes);
  const Mat& R = spec.couplings.r_at(x, t);
  for (int j = 0; j < d; ++j) {
    for (int k = 0; k < d; ++k) {
      const int aj = mode_id({x, Species::A, j, {}}, d);
      const int ak = mode_id({x, Species::A, k, {}}, d);
      const int bj = mode_id({x, Species::B, j, {}}, d);
      const int bk = mode_id({x, Species::B, k, {}}, d);
      h(aj, ak) += R(j, k);
      h(bj, bk) += R(j, k);
    }
  }
  return h;
}

SpMat build_H_h(const ModelSpec& spec, const AuxBasis& basis, int t) {
  return basis.quadratic_form(one_body_hopping_coeff(spec, t));
}

SpMat build_H_m(const ModelSpec& spec, const AuxBasis& basis, int t) {
  return basis.quadratic_form(one_body_mass_coeff(spec, t));
}

std::vector<SpMat> build_H_int_densities(const ModelSpec& spec, const AuxBasis& basis, int t) {
  std::vector<SpMat> out;
  out.reserve(spec.lattice.n_x);
  for (int x = 0; x < spec.lattice.n_x; ++x)
    out.push_back(basis.quadratic_form(one_body_density_coeff(spec, x, t)));
  return out;
}

TransferOp build_transfer(const ModelSpec& spec, const AuxBasis& basis, int t) {
  TransferOp op;
  op.t = t;
  op.eps = spec.lattice.epsilon;
  op.h_h = build_H_h(spec, basis, t);
  op.h_m = build_H_m(spec, basis, t);
  op.int_density = build_H_int_densities(spec, basis, t);
  return op;
}

Mat TransferOp::dense_aux_step() const {
  Mat m = Mat(h_h) + Mat(h_m);
  return Mat::Identity(m.rows(), m.cols()) + eps * m;
}

Vec boundary_vector(const BoundarySpec& b, bool left, const AuxBasis& basis, int d) {
  const BoundaryKind kind = left ? b.kind_l : b.kind_r;
  const auto& amps = left ? b.amps_l : b.amps_r;
  Vec v = Vec::Zero(basis.dim());
  switch (kind) {
    case BoundaryKind::UniformA: {
      for (int i = 0; i < basis.dim(); ++i) {
        const auto& occ = basis.occupation(i);
        bool all_a = true;
        for (int m = 0; m < basis.n_modes(); ++m) {
          if (!occ[m]) continue;
          if (mode_from_id(m, d).species != Species::A) { all_a = false; break; }
        }
        if (all_a) v(i) = 1.0;
      }
      break;
    }
    case BoundaryKind::UniformAB:
      v.setOnes();
      break;
    case BoundaryKind::SingleParticle: {
      if (basis.n_aux() != 1)
        throw ConfigError("boundary: explicit amplitudes require the n_aux = 1 sector");
      for (int i = 0; i < basis.dim(); ++i) {
        const auto& occ = basis.occupation(i);
        for (int m = 0; m < basis.n_modes(); ++m)
          if (occ[m]) v(i) = amps.at(m);
      }
      break;
    }
  }
  const double n = v.norm();
  if (!(n > 0.0) || !std::isfinite(n))
    throw ConfigError("boundary: vector is zero or not finite in the requested sector");
  v /= n;
  return v;
}

AuxBasis aux_basis_for(const ModelSpec& spec) {
  const int n_modes = 2 * spec.couplings.d * spec.lattice.n_x;
  if (spec.statistics.aux == AuxStatistics::Fermionic)
    return AuxBasis::fermionic_sector(n_modes, spec.boundary.n_aux);
  return AuxBasis::bosonic_sector(n_modes, spec.statistics.aux_cutoff, spec.boundary.n_aux);
}

GeneratedState generate_state(const ModelSpec& spec, long budget_bytes) {
  const AuxBasis basis = aux_basis_for(spec);
  GeneratedState st;
  st.phys.n_x = spec.lattice.n_x;
  st.phys.n_t = spec.lattice.n_t;
  st.phys.n_max = spec.statistics.phys_cutoff;
  st.aux_sector_dim = basis.dim();

  const long pdim = st.phys.dim();
  const long bytes = static_cast<long>(basis.dim()) * pdim * static_cast<long>(sizeof(Cplx));
  if (bytes > budget_bytes) {
    // suggest the largest n_t that fits at this n_x
    int nt_ok = 0;
    for (int nt = spec.lattice.n_t - 1; nt >= 0; --nt) {
      PhysBasis pb{spec.lattice.n_x, nt, spec.statistics.phys_cutoff};
      if (static_cast<long>(basis.dim()) * pb.dim() * 16 <= budget_bytes) { nt_ok = nt; break; }
    }
    throw ResourceError("generate_state: joint state needs " + std::to_string(bytes) +
                        " bytes (budget " + std::to_string(budget_bytes) +
                        "); largest admissible n_t at this n_x is " + std::to_string(nt_ok));
  }

  const Vec wl = boundary_vector(spec.boundary, true, basis, spec.couplings.d);
  const Vec wr = boundary_vector(spec.boundary, false, basis, spec.couplings.d);

  Mat joint = Mat::Zero(basis.dim(), pdim);
  joint.col(0) = wr;

  for (int t = 0; t < spec.lattice.n_t; ++t) {
    const TransferOp op = build_transfer(spec, basis, t);
    const SpMat gen = op.aux_generator();
    Mat next = joint + spec.lattice.epsilon * (gen * joint);
    for (long p = 0; p < pdim; ++p) {
      if (joint.col(p).isZero(0)) continue;
      for (int x = 0; x < spec.lattice.n_x; ++x) {
        const Vec kicked = op.int_density[x] * joint.col(p);
        if (kicked.isZero(0)) continue;
        const int mode = st.phys.mode(x, t);
        const int n = st.phys.digit(p, mode);
        if (n >= st.phys.n_max) {
          const double eps = spec.lattice.epsilon;
          st.truncation_weight += eps * eps * (n + 1.0) * kicked.squaredNorm();
          continue;
        }
        next.col(st.phys.bump(p, mode)) +=
            spec.lattice.epsilon * std::sqrt(n + 1.0) * kicked;
      }
    }
    joint = std::move(next);
  }

  st.amplitudes = Vec(pdim);
  for (long p = 0; p < pdim; ++p) st.amplitudes(p) = wl.dot(joint.col(p));
  st.norm = st.amplitudes.norm();
  st.normalized = (st.norm > 0) ? Vec(st.amplitudes / st.norm) : st.amplitudes;
  return st;
}

namespace {
template <typename T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <typename T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  return v;
}
}  // namespace

void write_state_file(const std::string& path, const GeneratedState& st) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot open state file for writing: " + path);
  os.write("CPEPS1", 6);
  put<uint32_t>(os, 1);  // schema
  put<uint32_t>(os, static_cast<uint32_t>(st.phys.n_x));
  put<uint32_t>(os, static_cast<uint32_t>(st.phys.n_t));
  put<uint32_t>(os, static_cast<uint32_t>(st.phys.n_max));
  put<uint32_t>(os, static_cast<uint32_t>(st.aux_sector_dim));
  put<uint64_t>(os, static_cast<uint64_t>(st.amplitudes.size()));
  for (long i = 0; i < st.amplitudes.size(); ++i) {
    put<float>(os, static_cast<float>(st.amplitudes(i).real()));
    put<float>(os, static_cast<float>(st.amplitudes(i).imag()));
  }
}

GeneratedState read_state_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open state file: " + path);
  char magic[6];
  is.read(magic, 6);
  if (!is || std::memcmp(magic, "CPEPS1", 6) != 0)
    throw ConfigError("state file: bad magic");
  if (get<uint32_t>(is) != 1) throw ConfigError("state file: unsupported schema");
  GeneratedState st;
  st.phys.n_x = static_cast<int>(get<uint32_t>(is));
  st.phys.n_t = static_cast<int>(get<uint32_t>(is));
  st.phys.n_max = static_cast<int>(get<uint32_t>(is));
  st.aux_sector_dim = static_cast<int>(get<uint32_t>(is));
  const uint64_t n = get<uint64_t>(is);
  if (static_cast<long>(n) != st.phys.dim())
    throw ConfigError("state file: amplitude count does not match header");
  st.amplitudes = Vec(n);
  for (uint64_t i = 0; i < n; ++i) {
    const float re = get<float>(is);
    const float im = get<float>(is);
    st.amplitudes(i) = Cplx(re, im);
  }
  if (!is) throw ConfigError("state file: truncated payload");
  st.norm = st.amplitudes.norm();
  st.normalized = (st.norm > 0) ? Vec(st.amplitudes / st.norm) : st.amplitudes;
  return st;
}

}  // namespace cpeps
