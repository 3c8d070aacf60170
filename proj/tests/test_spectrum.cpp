#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "cpeps/fock.hpp"
#include "cpeps/spectrum.hpp"
#include "test_helpers.hpp"

using namespace cpeps;
using testutil::make_spec;
using testutil::set_constant_couplings;

TEST_CASE("dispersion zeros at +-2pi/(3 eps)") {
  for (double eps : {0.1, 1.0, 2.0 * kPi}) {
    const auto [q0, q1] = dispersion_zeros(eps);
    CHECK(std::abs(q0 - 2.0 * kPi / (3.0 * eps)) < 1e-12);
    CHECK(std::abs(q1 + 2.0 * kPi / (3.0 * eps)) < 1e-12);
  }
}

TEST_CASE("kernel block values: zero at q_mu, 3J/eps at p = 0") {
  ModelSpec spec = make_spec(12, 1, 1, 3, AuxStatistics::Fermionic, 1.0);
  set_constant_couplings(spec, 1.0, 0.0, 0.0);
  const auto blocks = dft_kernel(spec, 0);
  for (const auto& b : blocks) {
    const double expect = (1.0 + 2.0 * std::cos(b.p));
    CHECK(std::abs(b.block(0, 1) - expect) < 1e-12);
  }
  CHECK(std::abs(blocks[0].block(0, 1) - 3.0) < 1e-14);  // p = 0
  CHECK(std::abs(1.0 + 2.0 * std::cos(2.0 * kPi / 3.0)) < 1e-15);
}

TEST_CASE("dft conjugation block-diagonalizes the one-body matrix exactly") {
  // N_x = 12, D = 2: build U h U' with the block DFT and compare blocks
  const int n_x = 12, d = 2;
  ModelSpec spec = make_spec(n_x, 1, d, 29, AuxStatistics::Fermionic, 1.0);
  std::mt19937 rng(4);
  Mat j = testutil::random_matrix(d, rng);
  spec.couplings.j[0] = 0.5 * (j + j.adjoint().eval());
  Mat m = testutil::random_matrix(d, rng);
  const Mat m0 = 0.5 * (m + m.adjoint().eval());
  for (auto& slice : spec.couplings.m0)
    for (auto& mm : slice) mm = m0;

  const Mat h = one_body_matrix(spec, 0);
  const int dim = 2 * d * n_x;
  Mat u = Mat::Zero(dim, dim);  // rows: (p, species, flavor), cols: (x, species, flavor)
  const auto grid = momentum_grid(n_x, 1.0);
  for (int ip = 0; ip < n_x; ++ip)
    for (int x = 0; x < n_x; ++x)
      for (int s = 0; s < 2; ++s)
        for (int fl = 0; fl < d; ++fl)
          u((ip * 2 + s) * d + fl, (x * 2 + s) * d + fl) =
              std::exp(Cplx(0, -grid[ip] * x)) / std::sqrt(double(n_x));
  const Mat hp = u * h * u.adjoint();
  const auto blocks = dft_kernel(spec, 0);
  double max_off = 0.0, max_block_dev = 0.0;
  for (int ip = 0; ip < n_x; ++ip) {
    for (int jp = 0; jp < n_x; ++jp) {
      const Mat sub = hp.block(ip * 2 * d, jp * 2 * d, 2 * d, 2 * d);
      if (ip == jp)
        max_block_dev = std::max(max_block_dev, (sub - blocks[ip].block).cwiseAbs().maxCoeff());
      else
        max_off = std::max(max_off, sub.cwiseAbs().maxCoeff());
    }
  }
  CHECK(max_off < 1e-12);
  CHECK(max_block_dev < 1e-12);
}

TEST_CASE("dft_kernel rejects position-dependent couplings") {
  ModelSpec spec = make_spec(6, 1, 1, 7);
  spec.couplings.m0[0][2](0, 0) += 0.5;
  CHECK_THROWS_AS(dft_kernel(spec, 0), ConfigError);
}

TEST_CASE("raw cone velocity is sqrt(3) |J| and the rescaled fit is relativistic") {
  const int n_x = 1200;
  const DispersionResult raw = low_energy_dispersion(n_x, 1.0, 1.0, 0.0, 0.1);
  CHECK(std::abs(raw.raw_velocity - std::sqrt(3.0)) < 1e-6);

  // after J -> J / sqrt(3): E/p -> 1 for the parity-symmetrized dispersion
  const DispersionResult r0 =
      low_energy_dispersion(n_x, 1.0, 1.0 / std::sqrt(3.0), 0.0, 0.05);
  const auto sym0 = symmetrized_dispersion_sq(r0);
  REQUIRE(sym0.size() >= 10);
  for (const auto& [p, e2] : sym0) {
    if (std::abs(p) < 1e-9) continue;
    CHECK(std::abs(std::sqrt(e2) / std::abs(p) - 1.0) < 1e-3);
  }

  // m = 0.2: least-squares intercept within 1% of m^2 over |p| <= 0.1
  const DispersionResult rm =
      low_energy_dispersion(n_x, 1.0, 1.0 / std::sqrt(3.0), 0.2, 0.1);
  CHECK(std::abs(rm.fit_intercept - 0.04) / 0.04 < 0.01);
  CHECK(rm.fit_slope == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("window overlapping both sectors is rejected") {
  CHECK_THROWS_AS(low_energy_dispersion(60, 1.0, 1.0, 0.0, kPi / 2.0), ConfigError);
}

TEST_CASE("kernel eigenvalues equal the dense one-body spectrum (multiset)") {
  const int n_x = 60;
  ModelSpec spec = make_spec(n_x, 1, 1, 31, AuxStatistics::Fermionic, 1.0);
  set_constant_couplings(spec, 1.0 / std::sqrt(3.0), 0.2, 0.0);
  const Mat h = one_body_matrix(spec, 0);
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  std::vector<double> dense(es.eigenvalues().data(),
                            es.eigenvalues().data() + es.eigenvalues().size());
  std::vector<double> blocks;
  for (const auto& b : dft_kernel(spec, 0)) {
    Eigen::SelfAdjointEigenSolver<Mat> eb(b.block);
    for (long i = 0; i < eb.eigenvalues().size(); ++i) blocks.push_back(eb.eigenvalues()(i));
  }
  std::sort(dense.begin(), dense.end());
  std::sort(blocks.begin(), blocks.end());
  REQUIRE(dense.size() == blocks.size());
  for (size_t i = 0; i < dense.size(); ++i)
    CHECK(dense[i] == doctest::Approx(blocks[i]).epsilon(1e-12));
}

TEST_CASE("parity relation between the sector kernels") {
  // linearized kernel at q_1 equals sigma_z (kernel at q_0) sigma_z:
  // realized as the sign flip of the off-diagonal slope
  const double eps = 1.0;
  const auto [q0, q1] = dispersion_zeros(eps);
  auto kp = [&](double p) { return (1.0 + 2.0 * std::cos(p * eps)) / eps; };
  const double h = 1e-6;
  const double slope0 = (kp(q0 + h) - kp(q0 - h)) / (2 * h);
  const double slope1 = (kp(q1 + h) - kp(q1 - h)) / (2 * h);
  CHECK(slope0 == doctest::Approx(-std::sqrt(3.0)).epsilon(1e-6));
  CHECK(slope1 == doctest::Approx(+std::sqrt(3.0)).epsilon(1e-6));
  // sigma_z sigma_x sigma_z = -sigma_x
  Mat sz(2, 2), sx(2, 2);
  sz << 1, 0, 0, -1;
  sx << 0, 1, 1, 0;
  CHECK(((sz * sx * sz) + sx).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("flavor coupling norms") {
  const int base_nx = 24;
  const double length = 24.0;
  const double width = 0.8;

  SUBCASE("constant potential with N_x divisible by 3 gives exactly zero") {
    std::vector<Mat> f(base_nx, Mat::Constant(1, 1, Cplx(1.0, 0.0)));
    const auto rep = flavor_coupling_norm(f, base_nx, 1.0, default_envelope_window(1.0));
    CHECK(rep.inter_norm < 1e-13);
    CHECK(rep.intra_norm > 0.5);
  }

  SUBCASE("gaussian bump of fixed physical width decouples under refinement") {
    std::vector<double> inter, ratio;
    for (int n_x : {24, 48, 96, 192}) {
      const double eps = length / n_x;
      std::vector<Mat> f;
      for (int i = 0; i < n_x; ++i) {
        const double x = i * eps - length / 2;
        f.push_back(Mat::Constant(1, 1, Cplx(std::exp(-0.5 * x * x / (width * width)), 0.0)));
      }
      const auto rep = flavor_coupling_norm(f, n_x, eps, default_envelope_window(eps));
      inter.push_back(rep.inter_norm);
      ratio.push_back(rep.inter_norm / rep.intra_norm);
    }
    for (size_t i = 0; i + 1 < inter.size(); ++i) CHECK(inter[i + 1] < inter[i]);
    CHECK(ratio.back() < 1e-6);
  }

  SUBCASE("rapidly varying potential keeps the flavors coupled") {
    // f(x) = cos((q0 - q1) x) transfers exactly the sector separation
    const int n_x = 24;
    const auto [q0, q1] = dispersion_zeros(1.0);
    std::vector<Mat> f;
    for (int i = 0; i < n_x; ++i)
      f.push_back(Mat::Constant(1, 1, Cplx(std::cos((q0 - q1) * i), 0.0)));
    const auto rep = flavor_coupling_norm(f, n_x, 1.0, default_envelope_window(1.0));
    CHECK(rep.inter_norm > 0.4);  // O(1) inter-sector coupling
  }
}

TEST_CASE("envelope decomposition") {
  const int n_x = 300;
  const double eps = 1.0;
  const auto [q0, q1] = dispersion_zeros(eps);
  const double window = default_envelope_window(eps);

  SUBCASE("plane wave at q_0 sits entirely in sector 0") {
    std::vector<Cplx> c(n_x);
    // q0 is on-grid for N_x divisible by 3
    for (int i = 0; i < n_x; ++i) c[i] = std::exp(Cplx(0, q0 * i)) / std::sqrt(double(n_x));
    const auto env = envelope_decompose(c, eps, window);
    CHECK(env.weight0 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(env.weight1 < 1e-12);
    CHECK(env.residual < 1e-12);
  }

  SUBCASE("equal superposition splits 50/50") {
    std::vector<Cplx> c(n_x);
    for (int i = 0; i < n_x; ++i)
      c[i] = (std::exp(Cplx(0, q0 * i)) + std::exp(Cplx(0, q1 * i))) / std::sqrt(2.0 * n_x);
    const auto env = envelope_decompose(c, eps, window);
    CHECK(env.weight0 == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(env.weight1 == doctest::Approx(0.5).epsilon(1e-10));
  }

  SUBCASE("wavepacket slightly off q_0 stays in sector 0 and reconstructs") {
    std::vector<Cplx> c(n_x);
    double norm = 0.0;
    for (int i = 0; i < n_x; ++i) {
      const double x = i - n_x / 2.0;
      c[i] = std::exp(Cplx(0, (q0 + 0.02) * i)) * std::exp(-x * x / (2.0 * 30.0 * 30.0));
      norm += std::norm(c[i]);
    }
    for (auto& v : c) v /= std::sqrt(norm);
    const auto env = envelope_decompose(c, eps, window);
    CHECK(env.weight0 > 0.99);
    // reconstruction a_x ~ env0 e^{i q0 x} + env1 e^{i q1 x}
    double err = 0.0;
    for (int i = 0; i < n_x; ++i) {
      const Cplx rec = env.envelope0[i] * std::exp(Cplx(0, q0 * i)) +
                       env.envelope1[i] * std::exp(Cplx(0, q1 * i));
      err += std::norm(c[i] - rec);
    }
    CHECK(err == doctest::Approx(env.residual).epsilon(1e-6));
  }
}
