#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cpeps/types.hpp"

namespace cpeps {

enum class SpatialBc { Periodic, Open };
enum class Species : int { A = 0, B = 1 };
enum class AuxStatistics { Fermionic, Bosonic };

struct LatticeSpec {
  double epsilon = 1.0;    // temporal spacing (hbar = 1)
  double epsilon_x = 1.0;  // spatial spacing
  int n_x = 1;             // spatial sites
  int n_t = 0;             // time steps; total extent l = n_t * epsilon
  SpatialBc bc = SpatialBc::Periodic;

  double extent() const { return n_t * epsilon; }
};

// Auxiliary mode label (x, species, flavor).  The canonical total order is
// x-major, then species a < b, then flavor ascending; every sign convention
// (Jordan-Wigner strings, Grassmann generator order) derives from it.
struct ModeIndex {
  int x = 0;
  Species species = Species::A;
  int flavor = 0;  // 0-based, < D
  std::optional<int> sector;  // mu in {0,1}, set only for envelope-field modes

  friend bool operator==(const ModeIndex&, const ModeIndex&) = default;
};

inline int mode_id(const ModeIndex& m, int d) {
  return (m.x * 2 + static_cast<int>(m.species)) * d + m.flavor;
}
inline ModeIndex mode_from_id(int id, int d) {
  ModeIndex m;
  m.flavor = id % d;
  const int xs = id / d;
  m.species = static_cast<Species>(xs % 2);
  m.x = xs / 2;
  return m;
}
bool mode_less(const ModeIndex& a, const ModeIndex& b);

// Analytic profile parameters, retained so refinement studies can re-evaluate
// the same physical function on finer lattices.
struct GaussianBumpSpec {
  Mat amplitude;
  double width = 1.0;
  double center = 0.0;
};

// Per-lattice-point coupling tables.  J depends on t only; m0 and R on (x,t);
// f (optional on-site perturbation for decoupling studies) on x only.
struct CouplingFields {
  int d = 1;
  std::vector<Mat> j;                   // [t], each d x d
  std::vector<std::vector<Mat>> m0;     // [t][x]
  std::vector<std::vector<Mat>> r;      // [t][x]
  std::optional<std::vector<Mat>> f;    // [x]
  std::optional<GaussianBumpSpec> f_bump;  // set when f came from the preset
  double smoothness_score = 0.0;        // max entrywise difference over neighbors

  const Mat& j_at(int t) const { return j.at(t); }
  const Mat& m0_at(int x, int t) const { return m0.at(t).at(x); }
  const Mat& r_at(int x, int t) const { return r.at(t).at(x); }
};

enum class BoundaryKind { UniformA, UniformAB, SingleParticle };

// Boundary state specification in a fixed auxiliary particle-number sector.
// SingleParticle carries explicit per-mode amplitudes (requires n_aux = 1).
struct BoundarySpec {
  BoundaryKind kind_l = BoundaryKind::UniformA;
  BoundaryKind kind_r = BoundaryKind::UniformA;
  std::vector<Cplx> amps_l;  // per mode_id, only for SingleParticle
  std::vector<Cplx> amps_r;
  int n_aux = 1;
};

struct StatisticsSpec {
  AuxStatistics aux = AuxStatistics::Fermionic;
  int aux_cutoff = 1;   // per-mode occupation cutoff (bosonic auxiliary only)
  int phys_cutoff = 1;  // physical bosonic mode cutoff
};

// 1D cMPS data (optional config section, consumed by the cmps1d module).
struct CmpsSpec {
  int d = 1;
  Mat k;   // d x d hermitian
  Mat r1;  // d x d
  Vec omega_l, omega_r;  // d components
  double l = 1.0;
  int n_steps = 4;
  int n_max = 1;
  AuxStatistics statistics = AuxStatistics::Fermionic;
  bool exp_step = false;  // matrix-exponential step instead of first order
};

struct ModelSpec {
  LatticeSpec lattice;
  CouplingFields couplings;
  BoundarySpec boundary;
  StatisticsSpec statistics;
  std::optional<CmpsSpec> cmps;
  std::optional<double> theta;
  std::vector<double> momenta;          // precomputed grid (periodic bc)
  std::vector<ModeIndex> mode_order;    // canonical enumeration
  std::string config_hash;              // FNV-1a of the canonical config bytes
};

// p_n = 2 pi n / (N_x eps), folded into the symmetric window (-pi/eps, pi/eps],
// reported in n-order.  Open boundaries have no reciprocal lattice.
std::vector<double> momentum_grid(int n_x, double eps);

// Parse + validate a JSON config (text form).  Throws ConfigError naming the
// first violated invariant with its field path.  Unknown keys are errors.
ModelSpec validate_config_text(const std::string& json_text);
ModelSpec load_config_file(const std::string& path);

std::string fnv1a_hex(const std::string& bytes);

// Preset generators for coupling profiles ("vary sufficiently slowly" has to
// be made concrete somewhere).
std::vector<Mat> constant_profile(const Mat& value, int n_x);
std::vector<Mat> gaussian_bump_profile(const Mat& amplitude, double width,
                                       double center, int n_x, double eps_x);

}  // namespace cpeps
