#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <bit>
#include <random>

#include "cpeps/grassmann.hpp"
#include "cpeps/oracle.hpp"

using namespace cpeps;

namespace {

GrassmannElement random_element(std::mt19937& rng, int n_gens, int n_terms) {
  std::uniform_int_distribution<uint64_t> mask(0, (1ull << n_gens) - 1);
  std::normal_distribution<double> coeff(0.0, 1.0);
  GrassmannElement e;
  for (int i = 0; i < n_terms; ++i)
    e += GrassmannElement::monomial(mask(rng), Cplx(coeff(rng), coeff(rng)));
  return e;
}

double max_diff(const GrassmannElement& a, const GrassmannElement& b) {
  GrassmannElement d = a;
  d -= b;
  return d.max_abs_coeff();
}

}  // namespace

TEST_CASE("product is associative and generators anticommute") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const GrassmannElement a = random_element(rng, 6, 5);
    const GrassmannElement b = random_element(rng, 6, 5);
    const GrassmannElement c = random_element(rng, 6, 5);
    CHECK(max_diff((a * b) * c, a * (b * c)) < 1e-12);
  }
  const auto g0 = GrassmannElement::generator(0);
  const auto g3 = GrassmannElement::generator(3);
  CHECK(max_diff(g0 * g3, Cplx(-1.0) * (g3 * g0)) == 0.0);
  CHECK((g0 * g0).empty());
}

TEST_CASE("berezin basics") {
  const auto theta = GrassmannElement::generator(2);
  // int dtheta . theta = 1
  CHECK(berezin_integrate_one(theta, 2).scalar_part() == Cplx(1.0));
  // int dtheta . 1 = 0
  CHECK(berezin_integrate_one(GrassmannElement::scalar(1.0), 2).empty());

  // int dtheta* dtheta exp(-a theta* theta) = a
  const Cplx a(0.7, -0.3);
  const int id_phi = 0, id_star = 1;
  GrassmannElement expo =
      Cplx(-a) * (GrassmannElement::generator(id_star) * GrassmannElement::generator(id_phi));
  const GrassmannElement gauss = GrassmannElement::exponential(expo);
  const GrassmannElement val = berezin_pair(gauss, id_phi, id_star);
  CHECK(val.is_scalar());
  CHECK(std::abs(val.scalar_part() - a) < 1e-14);
}

TEST_CASE("gaussian pair integration equals the determinant") {
  // int prod dtheta*_i dtheta_i exp(-theta*.A.theta) = det A, checked against
  // a brute-force monomial expansion of the exponential for n = 3 and 4
  std::mt19937 rng(11);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int n : {3, 4}) {
    Mat a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = Cplx(gauss(rng), gauss(rng));
    // ids: theta_i = 2i, theta*_i = 2i+1
    GrassmannElement expo;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        expo += Cplx(-a(i, j)) * (GrassmannElement::generator(2 * i + 1) *
                                  GrassmannElement::generator(2 * j));
    GrassmannElement e = GrassmannElement::exponential(expo);
    for (int i = 0; i < n; ++i) e = berezin_pair(e, 2 * i, 2 * i + 1);
    CHECK(e.is_scalar(1e-13));
    CHECK(std::abs(e.scalar_part() - a.determinant()) < 1e-12);
  }
}

TEST_CASE("signed_by_parity flips only odd monomials") {
  GrassmannElement e = GrassmannElement::scalar(2.0);
  e += GrassmannElement::generator(1);
  e += GrassmannElement::generator(0) * GrassmannElement::generator(1);
  const GrassmannElement f = e.signed_by_parity(1);
  CHECK(f.coefficient(0) == Cplx(2.0));
  CHECK(f.coefficient(0b10) == Cplx(-1.0));
  CHECK(f.coefficient(0b11) == Cplx(1.0));
  CHECK(max_diff(e.signed_by_parity(2), e) == 0.0);
}

TEST_CASE("coherent resolution of identity reproduces slice matrix elements") {
  // 1 = int prod_m dphi*_m dphi_m |phi><phi| on the full basis, n = 1..3 modes
  for (int n = 1; n <= 3; ++n) {
    const SliceIds ids{0, n};
    const auto ket = coherent_ket_coeffs(ids);
    const auto bra = coherent_bra_coeffs(ids);
    for (uint64_t s = 0; s < (1ull << n); ++s) {
      for (uint64_t t = 0; t < (1ull << n); ++t) {
        // <s|phi><phi|t> with the supercommutation sign of the ket coefficient
        GrassmannElement integrand =
            ket[s].signed_by_parity(std::popcount(s)) * bra[t];
        for (int m = 0; m < n; ++m)
          integrand = berezin_pair(integrand, ids.phi(m), ids.star(m));
        CHECK(integrand.is_scalar(1e-13));
        const Cplx expect = (s == t) ? 1.0 : 0.0;
        CHECK(std::abs(integrand.scalar_part() - expect) < 1e-12);
      }
    }
  }
}

TEST_CASE("overlap formula matches ket/bra pairing and the derivative form") {
  // exact overlap from the closed form == pairing of expanded coefficients
  const int n = 2;
  const SliceIds out{0, n}, in{2 * n, n};
  const GrassmannElement closed = coherent_overlap(out, in);
  const auto ket = coherent_ket_coeffs(in);
  const auto bra = coherent_bra_coeffs(out);
  GrassmannElement paired;
  for (uint64_t s = 0; s < (1ull << n); ++s)
    paired += bra[s] * ket[s].signed_by_parity(std::popcount(s));
  CHECK(max_diff(closed, paired) < 1e-13);

  // bosonic labels: discrete-derivative exponent deviates at O(eps^2)
  std::mt19937 rng(3);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec base(3), dot(3);
  for (int i = 0; i < 3; ++i) {
    base(i) = Cplx(gauss(rng), gauss(rng));
    dot(i) = Cplx(gauss(rng), gauss(rng));
  }
  double prev_ratio = 0.0;
  for (int k = 0; k < 2; ++k) {
    const double eps = (k == 0) ? 1e-2 : 1e-3;
    const Vec outv = base + eps * dot;
    const Cplx exact = bosonic_overlap(outv, base);
    const Cplx deriv = bosonic_overlap_discrete_derivative(outv, base);
    const double diff = std::abs(std::log(exact) - std::log(deriv));
    const double expect = 0.5 * eps * eps * dot.squaredNorm();
    CHECK(diff == doctest::Approx(expect).epsilon(1e-6));
    if (k == 0) prev_ratio = diff;
    else CHECK(prev_ratio / diff == doctest::Approx(100.0).epsilon(1e-3));
  }
}

TEST_CASE("measure normalization") {
  CHECK(measure_pi_power(2) == doctest::Approx(kPi * kPi));
  CHECK(measure_pi_power(2, true) == doctest::Approx(std::pow(kPi, 4)));
  // bosonic resolution weight: (1/pi) int d^2phi e^{-|phi|^2} = 1 by quadrature
  double acc = 0.0;
  const int n = 4000;
  const double r_max = 8.0, dr = r_max / n;
  for (int i = 0; i < n; ++i) {
    const double r = (i + 0.5) * dr;
    acc += std::exp(-r * r) * r * dr * 2.0 * kPi;
  }
  CHECK(acc / measure_pi_power(1) == doctest::Approx(1.0).epsilon(1e-6));
}
