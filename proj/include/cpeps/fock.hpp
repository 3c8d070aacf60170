#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "cpeps/model.hpp"
#include "cpeps/types.hpp"

namespace cpeps {

// Occupation basis for the auxiliary modes (2 * D * N_x of them), either the
// full Fock space or a fixed total-particle-number sector.  Fermionic states
// are bitmasks over the canonical mode order; bosonic states are occupation
// vectors with a per-mode cutoff.  All operator matrix elements derive from
// the Jordan-Wigner string along the canonical order.
class AuxBasis {
 public:
  static AuxBasis fermionic_sector(int n_modes, int n_aux);
  static AuxBasis fermionic_full(int n_modes);
  static AuxBasis bosonic_sector(int n_modes, int cutoff, int n_aux);

  int dim() const { return static_cast<int>(occs_.size()); }
  int n_modes() const { return n_modes_; }
  AuxStatistics statistics() const { return stat_; }
  int n_aux() const { return n_aux_; }

  const std::vector<uint8_t>& occupation(int idx) const { return occs_[idx]; }
  uint64_t mask(int idx) const;  // fermionic only
  int index_of_mask(uint64_t mask) const;

  // c_dag_{m} c_{n} on this basis (number conserving, stays in the sector).
  SpMat quadratic(int m_create, int m_annihilate) const;
  // sum_{mn} coeff(m,n) c_dag_m c_n
  SpMat quadratic_form(const Mat& coeff) const;
  // total number operator restricted to the basis
  SpMat number_operator() const;

 private:
  AuxStatistics stat_ = AuxStatistics::Fermionic;
  int n_modes_ = 0;
  int cutoff_ = 1;
  int n_aux_ = -1;  // -1: full space
  std::vector<std::vector<uint8_t>> occs_;
  std::unordered_map<uint64_t, int> index_;  // key: fermionic mask or packed occ

  uint64_t pack(const std::vector<uint8_t>& occ) const;
  void build_index();
};

// Physical bosonic modes, one per lattice point (x, t), occupation cutoff
// n_max; pattern index is mixed-radix in canonical (x-major within t-major)
// order.
struct PhysBasis {
  int n_x = 1, n_t = 0, n_max = 1;

  long n_modes() const { return static_cast<long>(n_x) * n_t; }
  long dim() const;
  int mode(int x, int t) const { return t * n_x + x; }
  int digit(long pattern, int mode) const;
  long bump(long pattern, int mode) const;  // pattern with occupation(mode)+1
  long total_occupation(long pattern) const;
};

// M_eps(t) = 1 + eps (H_m + H_h + H_int(t)); the generator pieces are kept
// separate.  H_int is stored per site as the R-weighted density operator
// carrying one physical creation at (x, t).
struct TransferOp {
  int t = 0;
  double eps = 1.0;
  SpMat h_h;                       // auxiliary hopping
  SpMat h_m;                       // auxiliary on-site potential
  std::vector<SpMat> int_density;  // per x: sum_{jk} R^{jk}(x,t)(a'a + b'b)

  SpMat aux_generator() const { return h_h + h_m; }
  Mat dense_aux_step() const;      // 1 + eps (H_m + H_h), physical part dropped
};

// One-body coefficient matrices over the 2*D*N_x auxiliary modes
// (H = sum c' h c).  The many-body operators are their quadratic forms.
Mat one_body_hopping_coeff(const ModelSpec& spec, int t);
Mat one_body_mass_coeff(const ModelSpec& spec, int t);
Mat one_body_density_coeff(const ModelSpec& spec, int x, int t);

SpMat build_H_h(const ModelSpec& spec, const AuxBasis& basis, int t);
SpMat build_H_m(const ModelSpec& spec, const AuxBasis& basis, int t);
std::vector<SpMat> build_H_int_densities(const ModelSpec& spec, const AuxBasis& basis, int t);
TransferOp build_transfer(const ModelSpec& spec, const AuxBasis& basis, int t);

Vec boundary_vector(const BoundarySpec& b, bool left, const AuxBasis& basis, int d);

struct GeneratedState {
  PhysBasis phys;
  Vec amplitudes;          // unnormalized, canonical pattern order
  double norm = 0.0;
  Vec normalized;
  double truncation_weight = 0.0;  // squared weight lost to the physical cutoff
  int aux_sector_dim = 0;
};

AuxBasis aux_basis_for(const ModelSpec& spec);

// |chi_eps> = <omega_L| M(t_{N_t-1}) ... M(t_0) |omega_R> |Omega>, with
// t_i = i * eps; one physical mode per (x, t_i).
GeneratedState generate_state(const ModelSpec& spec, long budget_bytes = 512l << 20);

// Serialization of generated states (little-endian, complex64 payload).
void write_state_file(const std::string& path, const GeneratedState& st);
GeneratedState read_state_file(const std::string& path);

}  // namespace cpeps
