#include "cpeps/grassmann.hpp"

#include <bit>
#include <cmath>

namespace cpeps {

namespace {
constexpr double kDropTol = 0.0;  // keep everything; callers prune explicitly

inline int popcount_below(uint64_t mask, int id) {
  const uint64_t below = (id == 0) ? 0ull : (mask & ((1ull << id) - 1ull));
  return std::popcount(below);
}
}  // namespace

GrassmannElement GrassmannElement::scalar(Cplx c) {
  GrassmannElement e;
  if (c != 0.0) e.terms_[0] = c;
  return e;
}

GrassmannElement GrassmannElement::generator(int id) {
  if (id < 0 || id >= 64)
    throw std::out_of_range("GrassmannElement: generator id outside [0, 64)");
  GrassmannElement e;
  e.terms_[1ull << id] = 1.0;
  return e;
}

GrassmannElement GrassmannElement::monomial(Key mask, Cplx c) {
  GrassmannElement e;
  if (c != 0.0) e.terms_[mask] = c;
  return e;
}

Cplx GrassmannElement::coefficient(Key mask) const {
  auto it = terms_.find(mask);
  return it == terms_.end() ? Cplx(0.0) : it->second;
}

bool GrassmannElement::is_scalar(double tol) const {
  for (const auto& [mask, c] : terms_)
    if (mask != 0 && std::abs(c) > tol) return false;
  return true;
}

int GrassmannElement::max_degree() const {
  int deg = 0;
  for (const auto& [mask, c] : terms_)
    if (c != 0.0) deg = std::max(deg, std::popcount(mask));
  return deg;
}

GrassmannElement& GrassmannElement::operator+=(const GrassmannElement& o) {
  for (const auto& [mask, c] : o.terms_) {
    auto [it, inserted] = terms_.try_emplace(mask, c);
    if (!inserted) it->second += c;
  }
  return *this;
}

GrassmannElement& GrassmannElement::operator-=(const GrassmannElement& o) {
  for (const auto& [mask, c] : o.terms_) {
    auto [it, inserted] = terms_.try_emplace(mask, -c);
    if (!inserted) it->second -= c;
  }
  return *this;
}

GrassmannElement& GrassmannElement::operator*=(Cplx c) {
  if (c == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [mask, coeff] : terms_) coeff *= c;
  return *this;
}

int GrassmannElement::crossing_parity(Key a, Key b) {
  // each generator of b crosses every generator of a with larger id
  int crossings = 0;
  uint64_t rest = b;
  while (rest) {
    const int id = std::countr_zero(rest);
    rest &= rest - 1;
    const uint64_t above = (id == 63) ? 0ull : (a >> (id + 1));
    crossings += std::popcount(above);
  }
  return crossings & 1;
}

GrassmannElement GrassmannElement::operator*(const GrassmannElement& o) const {
  GrassmannElement out;
  for (const auto& [ma, ca] : terms_) {
    for (const auto& [mb, cb] : o.terms_) {
      if (ma & mb) continue;  // repeated generator
      const Cplx c = ca * cb * (crossing_parity(ma, mb) ? -1.0 : 1.0);
      if (c == 0.0) continue;
      auto [it, inserted] = out.terms_.try_emplace(ma | mb, c);
      if (!inserted) it->second += c;
    }
  }
  return out;
}

GrassmannElement GrassmannElement::signed_by_parity(int count) const {
  if ((count & 1) == 0) return *this;
  GrassmannElement out = *this;
  for (auto& [mask, c] : out.terms_)
    if (std::popcount(mask) & 1) c = -c;
  return out;
}

GrassmannElement GrassmannElement::exponential(const GrassmannElement& e) {
  const Cplx s = e.scalar_part();
  GrassmannElement nil = e;
  nil.terms_.erase(0);
  GrassmannElement result = GrassmannElement::scalar(1.0);
  GrassmannElement power = GrassmannElement::scalar(1.0);
  double fact = 1.0;
  for (int k = 1; k <= 64; ++k) {
    power = power * nil;
    power.prune(kDropTol);
    if (power.empty()) break;
    fact *= k;
    GrassmannElement term = power;
    term *= Cplx(1.0 / fact);
    result += term;
  }
  result *= std::exp(s);
  return result;
}

double GrassmannElement::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& [mask, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

void GrassmannElement::prune(double tol) {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (std::abs(it->second) <= tol)
      it = terms_.erase(it);
    else
      ++it;
  }
}

GrassmannElement berezin_integrate_one(const GrassmannElement& e, int id) {
  GrassmannElement out;
  const uint64_t bit = 1ull << id;
  for (const auto& [mask, c] : e.terms()) {
    if (!(mask & bit)) continue;
    const int sign = popcount_below(mask, id) & 1;
    const Cplx v = sign ? -c : c;
    out += GrassmannElement::monomial(mask & ~bit, v);
  }
  return out;
}

GrassmannElement berezin_integrate(const GrassmannElement& e, const std::vector<int>& ids) {
  GrassmannElement cur = e;
  for (auto it = ids.rbegin(); it != ids.rend(); ++it)
    cur = berezin_integrate_one(cur, *it);
  return cur;
}

GrassmannElement berezin_pair(const GrassmannElement& e, int id_phi, int id_phi_star) {
  return berezin_integrate_one(berezin_integrate_one(e, id_phi), id_phi_star);
}

}  // namespace cpeps
