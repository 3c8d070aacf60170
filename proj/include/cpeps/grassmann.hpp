#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "cpeps/types.hpp"

namespace cpeps {

// Element of the Grassmann algebra over up to 64 named generators.
// Monomials are stored as bitmasks; a set bit g means the generator with id g
// appears, and the monomial is the product of its generators in ascending id
// order.  All signs flow from that single ordering convention.
class GrassmannElement {
 public:
  using Key = uint64_t;

  GrassmannElement() = default;
  static GrassmannElement scalar(Cplx c);
  static GrassmannElement generator(int id);
  static GrassmannElement monomial(Key mask, Cplx c);

  bool empty() const { return terms_.empty(); }
  int term_count() const { return static_cast<int>(terms_.size()); }
  const std::map<Key, Cplx>& terms() const { return terms_; }

  Cplx coefficient(Key mask) const;
  Cplx scalar_part() const { return coefficient(0); }
  bool is_scalar(double tol = 0.0) const;
  int max_degree() const;

  GrassmannElement& operator+=(const GrassmannElement& o);
  GrassmannElement& operator-=(const GrassmannElement& o);
  GrassmannElement& operator*=(Cplx c);
  friend GrassmannElement operator+(GrassmannElement a, const GrassmannElement& b) { return a += b; }
  friend GrassmannElement operator-(GrassmannElement a, const GrassmannElement& b) { return a -= b; }
  friend GrassmannElement operator*(GrassmannElement a, Cplx c) { return a *= c; }
  friend GrassmannElement operator*(Cplx c, GrassmannElement a) { return a *= c; }
  GrassmannElement operator*(const GrassmannElement& o) const;

  // Flip the sign of every odd-degree monomial when `count` is odd.  This is
  // the supercommutation sign picked up when an element crosses `count`
  // fermionic operators.
  GrassmannElement signed_by_parity(int count) const;

  // exp(e) for an element with nilpotent non-scalar part; the series
  // terminates because every generator squares to zero.
  static GrassmannElement exponential(const GrassmannElement& e);

  double max_abs_coeff() const;
  void prune(double tol = 0.0);  // drop exact zeros (and |c| <= tol)

  // Parity of the permutation that interleaves the ascending monomial `a`
  // into `b` (number of transpositions mod 2); 1 means odd.
  static int crossing_parity(Key a, Key b);

 private:
  std::map<Key, Cplx> terms_;
};

// Berezin integration over a single generator: keep monomials containing it,
// commute the generator to the front (sign), strip it.
GrassmannElement berezin_integrate_one(const GrassmannElement& e, int id);

// Iterated integral \int d g0 d g1 ... ; the innermost (last listed) generator
// is integrated first.
GrassmannElement berezin_integrate(const GrassmannElement& e, const std::vector<int>& ids);

// Pair measure \int d phi* d phi for one mode: phi first, then phi*.
GrassmannElement berezin_pair(const GrassmannElement& e, int id_phi, int id_phi_star);

}  // namespace cpeps
