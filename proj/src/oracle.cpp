#include "cpeps/oracle.hpp"

#include <bit>
#include <cmath>
#include <map>

namespace cpeps {

GrassmannElement coherent_gaussian(const SliceIds& s) {
  GrassmannElement expo;
  for (int m = 0; m < s.n; ++m) {
    expo -= 0.5 * (GrassmannElement::generator(s.star(m)) *
                   GrassmannElement::generator(s.phi(m)));
  }
  return GrassmannElement::exponential(expo);
}

GrassmannElement coherent_overlap(const SliceIds& out, const SliceIds& in) {
  GrassmannElement expo;
  for (int m = 0; m < out.n; ++m) {
    expo += GrassmannElement::generator(out.star(m)) *
            GrassmannElement::generator(in.phi(m));
    expo -= 0.5 * (GrassmannElement::generator(out.star(m)) *
                   GrassmannElement::generator(out.phi(m)));
    expo -= 0.5 * (GrassmannElement::generator(in.star(m)) *
                   GrassmannElement::generator(in.phi(m)));
  }
  return GrassmannElement::exponential(expo);
}

GrassmannElement coherent_bilinear(const Mat& coeff, const SliceIds& out, const SliceIds& in) {
  GrassmannElement e;
  for (int m = 0; m < out.n; ++m)
    for (int n = 0; n < in.n; ++n)
      if (coeff(m, n) != 0.0)
        e += coeff(m, n) * (GrassmannElement::generator(out.star(m)) *
                            GrassmannElement::generator(in.phi(n)));
  return e;
}

std::vector<GrassmannElement> coherent_ket_coeffs(const SliceIds& s) {
  const GrassmannElement gauss = coherent_gaussian(s);
  std::vector<GrassmannElement> out(1ull << s.n);
  for (uint64_t mask = 0; mask < out.size(); ++mask) {
    const int k = std::popcount(mask);
    GrassmannElement mono = GrassmannElement::scalar((k * (k - 1) / 2) % 2 ? -1.0 : 1.0);
    for (int m = 0; m < s.n; ++m)
      if (mask & (1ull << m)) mono = mono * GrassmannElement::generator(s.phi(m));
    out[mask] = mono * gauss;
  }
  return out;
}

std::vector<GrassmannElement> coherent_bra_coeffs(const SliceIds& s) {
  const GrassmannElement gauss = coherent_gaussian(s);
  std::vector<GrassmannElement> out(1ull << s.n);
  for (uint64_t mask = 0; mask < out.size(); ++mask) {
    const int k = std::popcount(mask);
    GrassmannElement mono = GrassmannElement::scalar(k % 2 ? -1.0 : 1.0);
    for (int m = 0; m < s.n; ++m)
      if (mask & (1ull << m)) mono = mono * GrassmannElement::generator(s.star(m));
    out[mask] = mono * gauss;
  }
  return out;
}

std::vector<GrassmannElement> apply_even_operator(const SpMat& op,
                                                  const std::vector<GrassmannElement>& ket) {
  std::vector<GrassmannElement> out(ket.size());
  for (int col = 0; col < op.outerSize(); ++col) {
    for (SpMat::InnerIterator it(op, col); it; ++it) {
      if ((std::popcount(static_cast<uint64_t>(it.row())) ^
           std::popcount(static_cast<uint64_t>(col))) & 1)
        throw std::logic_error("apply_even_operator: operator has odd matrix elements");
      GrassmannElement term = ket[col];
      term *= it.value();
      out[it.row()] += term;
    }
  }
  return out;
}

GrassmannElement pair_bra_ket(const std::vector<GrassmannElement>& bra,
                              const std::vector<GrassmannElement>& ket) {
  GrassmannElement out;
  for (uint64_t mask = 0; mask < bra.size(); ++mask) {
    const int k = std::popcount(mask);
    out += bra[mask] * ket[mask].signed_by_parity(k);
  }
  return out;
}

GrassmannElement bra_boundary_overlap(const Vec& omega, const AuxBasis& sector, const SliceIds& s) {
  const GrassmannElement gauss = coherent_gaussian(s);
  GrassmannElement out;
  for (int i = 0; i < sector.dim(); ++i) {
    if (omega(i) == 0.0) continue;
    const uint64_t mask = sector.mask(i);
    const int k = std::popcount(mask);
    GrassmannElement mono = GrassmannElement::scalar((k % 2 ? -1.0 : 1.0) * omega(i));
    for (int m = 0; m < s.n; ++m)
      if (mask & (1ull << m)) mono = mono * GrassmannElement::generator(s.star(m));
    out += mono * gauss;
  }
  return out;
}

GrassmannElement ket_boundary_overlap(const Vec& omega, const AuxBasis& sector, const SliceIds& s) {
  const GrassmannElement gauss = coherent_gaussian(s);
  GrassmannElement out;
  for (int i = 0; i < sector.dim(); ++i) {
    if (omega(i) == 0.0) continue;
    const uint64_t mask = sector.mask(i);
    const int k = std::popcount(mask);
    const double sigma = (k * (k - 1) / 2) % 2 ? -1.0 : 1.0;
    const double parity = k % 2 ? -1.0 : 1.0;
    GrassmannElement mono = GrassmannElement::scalar(sigma * parity * std::conj(omega(i)));
    for (int m = 0; m < s.n; ++m)
      if (mask & (1ull << m)) mono = mono * GrassmannElement::generator(s.phi(m));
    out += mono * gauss;
  }
  return out;
}

StepAmplitude step_amplitude(const ModelSpec& spec, int t, const SliceIds& out,
                             const SliceIds& in) {
  const double eps = spec.lattice.epsilon;
  const GrassmannElement ovl = coherent_overlap(out, in);
  const Mat h = one_body_hopping_coeff(spec, t) + one_body_mass_coeff(spec, t);
  StepAmplitude amp;
  amp.no_emission =
      ovl + Cplx(eps) * (coherent_bilinear(h, out, in) * ovl);
  amp.emission.reserve(spec.lattice.n_x);
  for (int x = 0; x < spec.lattice.n_x; ++x) {
    const Mat dens = one_body_density_coeff(spec, x, t);
    amp.emission.push_back(Cplx(eps) * (coherent_bilinear(dens, out, in) * ovl));
  }
  return amp;
}

StepAmplitude step_amplitude_operator_route(const ModelSpec& spec, int t,
                                            const SliceIds& out, const SliceIds& in) {
  const int n_modes = 2 * spec.couplings.d * spec.lattice.n_x;
  if (n_modes > 16)
    throw ResourceError("step_amplitude_operator_route: full Fock expansion needs "
                        "n_modes <= 16");
  const AuxBasis full = AuxBasis::fermionic_full(n_modes);
  const auto ket = coherent_ket_coeffs(in);
  const auto bra = coherent_bra_coeffs(out);
  const double eps = spec.lattice.epsilon;

  SpMat one(full.dim(), full.dim());
  one.setIdentity();
  const SpMat gen = build_H_h(spec, full, t) + build_H_m(spec, full, t);
  SpMat step = one + Cplx(eps) * gen;

  StepAmplitude amp;
  amp.no_emission = pair_bra_ket(bra, apply_even_operator(step, ket));
  const auto dens = build_H_int_densities(spec, full, t);
  for (int x = 0; x < spec.lattice.n_x; ++x) {
    SpMat d = Cplx(eps) * dens[x];
    amp.emission.push_back(pair_bra_ket(bra, apply_even_operator(d, ket)));
  }
  return amp;
}

Vec contract_path_integral(const ModelSpec& spec, const OracleOptions& opt) {
  if (spec.statistics.aux != AuxStatistics::Fermionic)
    throw ConfigError(
        "contract_path_integral: exact Berezin contraction requires a fermionic "
        "auxiliary; the bosonic route goes through the operator identity");
  const int n_modes = 2 * spec.couplings.d * spec.lattice.n_x;
  const int n_slices = spec.lattice.n_t + 1;
  const long total_pairs = static_cast<long>(n_modes) * n_slices;
  if (total_pairs > opt.max_pairs)
    throw ResourceError("contract_path_integral: " + std::to_string(total_pairs) +
                        " generator pairs exceed the budget of " +
                        std::to_string(opt.max_pairs));
  if (4 * n_modes > 64)
    throw ResourceError("contract_path_integral: live generator window exceeds 64 ids");

  const AuxBasis sector = aux_basis_for(spec);
  const Vec wl = boundary_vector(spec.boundary, true, sector, spec.couplings.d);
  const Vec wr = boundary_vector(spec.boundary, false, sector, spec.couplings.d);

  auto slice_ids = [&](int slice) {
    return SliceIds{(slice % 2) * 2 * n_modes, n_modes};
  };
  auto integrate_slice = [&](const GrassmannElement& e, const SliceIds& s) {
    GrassmannElement cur = e;
    for (int m = 0; m < s.n; ++m) cur = berezin_pair(cur, s.phi(m), s.star(m));
    return cur;
  };

  PhysBasis phys{spec.lattice.n_x, spec.lattice.n_t, spec.statistics.phys_cutoff};
  std::map<long, GrassmannElement> state;
  state[0] = bra_boundary_overlap(wr, sector, slice_ids(0));

  for (int t = 0; t < spec.lattice.n_t; ++t) {
    const SliceIds in = slice_ids(t);
    const SliceIds out = slice_ids(t + 1);
    const StepAmplitude amp = step_amplitude(spec, t, out, in);
    std::map<long, GrassmannElement> next;
    for (const auto& [pattern, elem] : state) {
      next[pattern] += integrate_slice(amp.no_emission * elem, in);
      for (int x = 0; x < spec.lattice.n_x; ++x) {
        const int mode = phys.mode(x, t);
        const int n = phys.digit(pattern, mode);
        if (n >= phys.n_max) continue;  // cutoff; cannot occur at n_max >= 1
        GrassmannElement emitted = integrate_slice(amp.emission[x] * elem, in);
        emitted *= std::sqrt(n + 1.0);
        if (!emitted.empty()) next[phys.bump(pattern, mode)] += emitted;
      }
    }
    for (auto& [pattern, elem] : next) elem.prune(0.0);
    state = std::move(next);
  }

  const SliceIds last = slice_ids(spec.lattice.n_t);
  const GrassmannElement left = ket_boundary_overlap(wl, sector, last);
  Vec result = Vec::Zero(phys.dim());
  for (const auto& [pattern, elem] : state) {
    GrassmannElement done = integrate_slice(left * elem, last);
    if (!done.is_scalar(1e-13))
      throw ToleranceError("contract_path_integral: residual generators after full integration");
    result(pattern) = done.scalar_part();
  }
  return result;
}

double measure_pi_power(int n_complex_modes, bool paper_literal) {
  return std::pow(kPi, paper_literal ? 2.0 * n_complex_modes : 1.0 * n_complex_modes);
}

Cplx bosonic_overlap(const Vec& out, const Vec& in) {
  Cplx expo = 0.0;
  for (long m = 0; m < out.size(); ++m)
    expo += std::conj(out(m)) * in(m) - 0.5 * std::norm(out(m)) - 0.5 * std::norm(in(m));
  return std::exp(expo);
}

Cplx bosonic_overlap_discrete_derivative(const Vec& out, const Vec& in) {
  // exp[-(1/2) sum (phi+ dphi - dphi+ phi)] with both fields at the in slice
  Cplx expo = 0.0;
  for (long m = 0; m < out.size(); ++m) {
    const Cplx dphi = out(m) - in(m);
    const Cplx dphis = std::conj(out(m)) - std::conj(in(m));
    expo += -0.5 * (std::conj(in(m)) * dphi - dphis * in(m));
  }
  return std::exp(expo);
}

}  // namespace cpeps
