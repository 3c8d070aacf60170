// Command-line driver: every subcommand loads a JSON config, runs one
// experiment on the library and writes deterministic CSV/binary artifacts.
// Exit codes: 0 ok, 1 tolerance/invariant failure, 2 config error,
// 3 resource budget.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "cpeps/clifford.hpp"
#include "cpeps/cmps1d.hpp"
#include "cpeps/entanglement.hpp"
#include "cpeps/fock.hpp"
#include "cpeps/model.hpp"
#include "cpeps/oracle.hpp"
#include "cpeps/runner.hpp"
#include "cpeps/spectrum.hpp"
#include "cpeps/square_lattice.hpp"

#include "json.hpp"

using namespace cpeps;

namespace {

struct GlobalArgs {
  std::string config;
  std::string out;
  unsigned seed = 12345;
  long budget_mb = 512;
  double tol = 1e-9;
};

void add_common(CLI::App* cmd, GlobalArgs& g, bool needs_config = true,
                bool needs_out = true) {
  auto* copt = cmd->add_option("--config", g.config, "JSON configuration file");
  if (needs_config) copt->required();
  auto* oopt = cmd->add_option("--out", g.out, "output artifact path");
  if (needs_out) oopt->required();
  cmd->add_option("--seed", g.seed, "seed for random batteries");
  cmd->add_option("--budget-mb", g.budget_mb, "memory budget in MiB");
  cmd->add_option("--tol", g.tol, "tolerance override");
}

int run_cmps1d(const GlobalArgs& g, const std::string& observable) {
  const ModelSpec spec = load_config_file(g.config);
  if (!spec.cmps) throw ConfigError("cmps1d: config has no 'cmps' section");
  const CmpsSpec& c = *spec.cmps;
  CsvTable t;
  t.columns = {"n_steps", "delta", "value_re", "value_im"};
  for (int n = 8; n <= std::max(c.n_steps, 8); n *= 2) {
    const double delta = c.l / n;
    const double v = observable == "density" ? density_estimate(c, n) : norm_estimate(c, n);
    t.rows.push_back({double(n), delta, v, 0.0});
  }
  write_csv_atomic(g.out, t, spec.config_hash, g.seed);
  return 0;
}

int run_generate_state(const GlobalArgs& g) {
  const ModelSpec spec = load_config_file(g.config);
  const GeneratedState st = generate_state(spec, g.budget_mb << 20);
  write_state_file(g.out, st);
  std::printf("state written: %s (n_x=%d n_t=%d dim=%ld norm=%.12g trunc=%.3g)\n",
              g.out.c_str(), st.phys.n_x, st.phys.n_t, long(st.amplitudes.size()),
              st.norm, st.truncation_weight);
  return 0;
}

int run_dispersion(const GlobalArgs& g) {
  const ModelSpec spec = load_config_file(g.config);
  const double eps = spec.lattice.epsilon;
  const auto [q0, q1] = dispersion_zeros(eps);
  const double j_scale = std::abs(spec.couplings.j_at(0)(0, 0)) / std::sqrt(3.0);
  const double m = std::abs(spec.couplings.m0_at(0, 0)(0, 0));
  const DispersionResult r = low_energy_dispersion(
      spec.lattice.n_x, eps, j_scale > 0 ? j_scale : 1.0 / std::sqrt(3.0), m,
      0.2 / eps);
  CsvTable t;
  t.columns = {"p", "energy", "sector"};
  char buf[160];
  std::snprintf(buf, sizeof(buf), "dispersion zeros: q0=%.17g q1=%.17g", q0, q1);
  t.comments.push_back(buf);
  std::snprintf(buf, sizeof(buf), "raw_velocity=%.17g fit_slope=%.17g fit_intercept=%.17g",
                r.raw_velocity, r.fit_slope, r.fit_intercept);
  t.comments.push_back(buf);
  for (const auto& p : r.points) t.rows.push_back({p.p, p.energy, double(p.sector)});
  write_csv_atomic(g.out, t, spec.config_hash, g.seed);
  return 0;
}

int run_flavors(const GlobalArgs& g) {
  const ModelSpec spec = load_config_file(g.config);
  if (!spec.couplings.f_bump)
    throw ConfigError(
        "flavors: the refinement sweep needs an analytic f profile "
        "(couplings.f preset gaussian_bump) so it can be re-sampled at fixed "
        "physical width");
  const GaussianBumpSpec& bump = *spec.couplings.f_bump;
  const int base_nx = spec.lattice.n_x;
  const double length = base_nx * spec.lattice.epsilon;
  CsvTable t;
  t.columns = {"n_x", "inter_norm", "intra_norm"};
  for (int k = 0; k < 4; ++k) {
    const int n_x = base_nx << k;
    const double eps = length / n_x;
    const std::vector<Mat> prof =
        gaussian_bump_profile(bump.amplitude, bump.width, bump.center, n_x, eps);
    const auto rep = flavor_coupling_norm(prof, n_x, eps, default_envelope_window(eps));
    t.rows.push_back({double(n_x), rep.inter_norm, rep.intra_norm});
  }
  write_csv_atomic(g.out, t, spec.config_hash, g.seed);
  return 0;
}

int run_oracle_check(const GlobalArgs& g, int max_generators) {
  const ModelSpec spec = load_config_file(g.config);
  OracleOptions opt;
  opt.max_pairs = max_generators;
  const Vec oracle = contract_path_integral(spec, opt);
  const GeneratedState st = generate_state(spec, g.budget_mb << 20);
  const double dev = (oracle - st.amplitudes).cwiseAbs().maxCoeff();
  std::printf("oracle-check: %ld amplitudes, max deviation %.3e\n",
              long(oracle.size()), dev);
  if (dev > 1e-9) {
    std::fprintf(stderr, "oracle-check: deviation above 1e-9\n");
    return 1;
  }
  return 0;
}

int run_clifford_scan(const GlobalArgs& g, int grid_points) {
  CsvTable t;
  t.columns = {"theta", "clifford_residual", "eta00", "unitarity_residual"};
  const int half = grid_points / 2;
  std::vector<double> thetas;
  for (int i = 0; i < half; ++i)
    thetas.push_back((kPi / 4.0 - 0.05) * i / std::max(1, half - 1));
  for (int i = 0; i < grid_points - half; ++i)
    thetas.push_back(kPi / 4.0 + 0.05 +
                     (kPi / 2.0 - kPi / 4.0 - 0.05) * i / std::max(1, grid_points - half - 1));
  for (double theta : thetas) {
    const GammaSet s = gamma_family(theta);
    double res = 0.0;
    for (int mu = 0; mu < 2; ++mu)
      for (int nu = 0; nu < 2; ++nu) {
        const Eigen::Matrix2cd ac = s.gamma(mu) * s.gamma(nu) + s.gamma(nu) * s.gamma(mu) -
                                    2.0 * s.eta(mu, nu) * Eigen::Matrix2cd::Identity();
        res = std::max(res, ac.cwiseAbs().maxCoeff());
      }
    res = std::max(res, (s.gamma5 * s.gamma5 - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff());
    for (int mu = 0; mu < 2; ++mu)
      res = std::max(res, (s.gamma5 * s.gamma(mu) + s.gamma(mu) * s.gamma5).cwiseAbs().maxCoeff());
    const Eigen::Matrix2cd lam = group_element(1.0, theta).lambda;
    const double unit = (lam.adjoint() * lam - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff();
    t.rows.push_back({theta, res, s.eta(0, 0), unit});
  }
  write_csv_atomic(g.out, t, "", g.seed);
  return 0;
}

int run_action_eval(const GlobalArgs& g, double theta) {
  const ModelSpec spec = load_config_file(g.config);
  const double m = std::abs(spec.couplings.m0_at(0, 0)(0, 0));
  const GridSpec grid{32, 2.0 * kPi};
  const FieldConfiguration cfg = random_smooth_config(grid, 1, 4, g.seed);
  const Cplx sd = dirac_action(cfg, m, DerivMode::Spectral);
  const Cplx sf = family_action(cfg, m, theta, DerivMode::Spectral);
  const Cplx se = euclidean_action(cfg, m, DerivMode::Spectral);
  CsvTable t;
  t.columns = {"theta", "dirac_re", "dirac_im", "family_re", "family_im",
               "euclidean_re", "euclidean_im"};
  t.rows.push_back({theta, sd.real(), sd.imag(), sf.real(), sf.imag(), se.real(), se.imag()});
  write_csv_atomic(g.out, t, spec.config_hash, g.seed);
  return 0;
}

int run_area_law(const GlobalArgs& g, const std::string& state_path,
                 const std::string& regions_path) {
  const GeneratedState st = read_state_file(state_path);
  std::vector<Region> regions;
  if (regions_path.empty()) {
    // default family: growing strips 1 x k at t = 0
    for (int k = 1; k <= st.phys.n_x; ++k) {
      Region r;
      for (int x = 0; x < k; ++x)
        for (int t = 0; t < std::max(1, st.phys.n_t / 2); ++t) r.modes.push_back({x, t});
      regions.push_back(r);
    }
  } else {
    std::ifstream is(regions_path);
    if (!is) throw ConfigError("area-law: cannot open regions file");
    nlohmann::json j;
    is >> j;
    for (const auto& jr : j.at("regions")) {
      Region r;
      for (const auto& m : jr) r.modes.push_back({m.at(0).get<int>(), m.at(1).get<int>()});
      regions.push_back(r);
    }
  }
  const auto rows = area_law_scan(st, regions, SpatialBc::Periodic);
  CsvTable t;
  t.columns = {"region_size", "boundary_size", "entropy"};
  char buf[80];
  std::snprintf(buf, sizeof(buf), "fitted_area_constant: %.17g", fitted_area_constant(rows));
  t.comments.push_back(buf);
  for (const auto& r : rows)
    t.rows.push_back({double(r.region_size), double(r.boundary_size), r.entropy_a});
  write_csv_atomic(g.out, t, "", g.seed);
  return 0;
}

int run_square_compare(const GlobalArgs& g) {
  const GridSpec grid{64, 2.0 * kPi};
  const std::vector<double> alphas = {kPi / 2.0, kPi, 2.0 * kPi};
  const int battery = 20;
  CsvTable t;
  t.columns = {"alpha", "witness_square", "witness_euclidean"};
  for (double alpha : alphas) {
    std::vector<double> ws, we;
    for (int b = 0; b < battery; ++b) {
      const FieldConfiguration cfg = random_smooth_config(grid, 1, 5, g.seed + b);
      ws.push_back(anisotropy_witness(cfg, alpha, 0.0, DerivMode::Spectral));
      const Cplx s0 = euclidean_action(cfg, 0.35, DerivMode::Spectral);
      const Cplx s1 = euclidean_action(rotate_config(cfg, alpha), 0.35, DerivMode::Spectral);
      we.push_back(std::abs(s1 - s0) / std::abs(s0));
    }
    auto median = [](std::vector<double> v) {
      std::sort(v.begin(), v.end());
      return v[v.size() / 2];
    };
    t.rows.push_back({alpha, median(ws), median(we)});
  }
  write_csv_atomic(g.out, t, "", g.seed);
  return 0;
}

int run_regress(const std::string& golden, const std::string& candidate, double tol) {
  const RegressReport rep = regress(golden, candidate, tol);
  for (const auto& f : rep.files)
    std::printf("%-30s %s worst=%.3e %s\n", f.file.c_str(), f.ok ? "PASS" : "FAIL",
                f.worst, f.note.c_str());
  return rep.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"continuum-limit PEPS laboratory"};
  app.require_subcommand(1);

  GlobalArgs g;
  std::string observable = "density";
  std::string state_path, regions_path, golden_dir, candidate_dir;
  int max_generators = 16;
  int theta_grid = 64;
  double theta = 0.0;

  auto* cmps = app.add_subcommand("cmps1d", "1D cMPS observables over a refinement ladder");
  add_common(cmps, g);
  cmps->add_option("--observable", observable, "density|norm");

  auto* gen = app.add_subcommand("generate-state", "build |chi_eps> and write state.bin");
  add_common(gen, g);

  auto* disp = app.add_subcommand("dispersion", "momentum-space dispersion near the kernel zeros");
  add_common(disp, g);

  auto* flav = app.add_subcommand("flavors", "inter-sector coupling norms over lattice refinement");
  add_common(flav, g);

  auto* orc = app.add_subcommand("oracle-check", "Berezin path integral vs Fock generation");
  add_common(orc, g, true, false);
  orc->add_option("--max-generators", max_generators, "generator pair budget");

  auto* cls = app.add_subcommand("clifford-scan", "gamma-family residuals over a theta grid");
  add_common(cls, g, false, true);
  cls->add_option("--theta-grid", theta_grid, "number of theta points");

  auto* act = app.add_subcommand("action-eval", "evaluate the action family on a seeded field");
  add_common(act, g);
  act->add_option("--theta", theta, "continuation parameter");

  auto* area = app.add_subcommand("area-law", "entropy scan over regions of a stored state");
  add_common(area, g, false, true);
  area->add_option("--state", state_path, "state.bin path")->required();
  area->add_option("--regions", regions_path, "regions JSON (optional)");

  auto* sq = app.add_subcommand("square-compare", "square-lattice vs euclidean rotation witnesses");
  add_common(sq, g, false, true);

  auto* rg = app.add_subcommand("regress", "compare candidate artifacts against goldens");
  rg->add_option("--golden", golden_dir, "golden directory")->required();
  rg->add_option("--candidate", candidate_dir, "candidate directory")->required();
  rg->add_option("--tol", g.tol, "numeric tolerance");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmps->parsed()) return run_cmps1d(g, observable);
    if (gen->parsed()) return run_generate_state(g);
    if (disp->parsed()) return run_dispersion(g);
    if (flav->parsed()) return run_flavors(g);
    if (orc->parsed()) return run_oracle_check(g, max_generators);
    if (cls->parsed()) return run_clifford_scan(g, theta_grid);
    if (act->parsed()) return run_action_eval(g, theta);
    if (area->parsed()) return run_area_law(g, state_path, regions_path);
    if (sq->parsed()) return run_square_compare(g);
    if (rg->parsed()) return run_regress(golden_dir, candidate_dir, g.tol);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const ResourceError& e) {
    std::fprintf(stderr, "resource error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
