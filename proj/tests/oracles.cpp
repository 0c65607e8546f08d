#include "oracles.hpp"

#include <functional>
#include <map>
#include <stdexcept>

namespace oracle {

using invar::Elem;
using invar::Exp;
using invar::Monomial;

std::vector<Monomial> monomials_of_degree(std::size_t n, unsigned d) {
  std::vector<Monomial> out;
  std::vector<Exp> e(n, 0);
  std::function<void(std::size_t, unsigned)> rec = [&](std::size_t i, unsigned left) {
    if (i + 1 == n) {
      e[i] = left;
      out.emplace_back(e);
      return;
    }
    for (unsigned a = 0; a <= left; ++a) {
      e[i] = a;
      rec(i + 1, left - a);
    }
  };
  if (n == 0) {
    if (d == 0) out.emplace_back(std::vector<Exp>{});
    return out;
  }
  rec(0, d);
  return out;
}

bool homogeneous_member(const Polynomial& f, const std::vector<Polynomial>& gens, std::vector<Polynomial>* cofactors) {
  const RingPtr& ring = f.ring();
  const auto& F = ring->field();
  if (f.is_zero()) {
    if (cofactors) cofactors->assign(gens.size(), Polynomial(ring));
    return true;
  }
  if (!f.is_homogeneous()) throw std::invalid_argument("oracle needs a homogeneous element");
  const auto d = static_cast<unsigned>(f.degree());

  const auto cols = monomials_of_degree(ring->nvars(), d);
  std::map<std::vector<Exp>, std::size_t> col_of;
  for (std::size_t c = 0; c < cols.size(); ++c) {
    col_of[std::vector<Exp>(cols[c].exponents().begin(), cols[c].exponents().end())] = c;
  }
  auto column = [&](std::span<const Exp> e) { return col_of.at(std::vector<Exp>(e.begin(), e.end())); };

  // Unknowns: one per (generator, multiplier monomial).
  struct Unknown {
    std::size_t gen;
    Monomial mult;
  };
  std::vector<Unknown> unknowns;
  for (std::size_t k = 0; k < gens.size(); ++k) {
    if (gens[k].is_zero()) continue;
    if (!gens[k].is_homogeneous()) throw std::invalid_argument("oracle needs homogeneous generators");
    if (gens[k].degree() > static_cast<std::int64_t>(d)) continue;
    for (auto& m : monomials_of_degree(ring->nvars(), d - static_cast<unsigned>(gens[k].degree()))) {
      unknowns.push_back({k, std::move(m)});
    }
  }

  // Rows are monomials of degree d; the last column is f.
  const std::size_t nu = unknowns.size();
  std::vector<std::vector<Elem>> a(cols.size(), std::vector<Elem>(nu + 1, 0));
  for (std::size_t u = 0; u < nu; ++u) {
    const Polynomial prod = gens[unknowns[u].gen].mul_term(unknowns[u].mult, 1);
    for (std::size_t t = 0; t < prod.size(); ++t) a[column(prod.exponents(t))][u] = prod.coeff(t);
  }
  for (std::size_t t = 0; t < f.size(); ++t) a[column(f.exponents(t))][nu] = f.coeff(t);

  std::vector<std::size_t> pivot_col;
  std::size_t row = 0;
  for (std::size_t c = 0; c < nu && row < a.size(); ++c) {
    std::size_t r = row;
    while (r < a.size() && a[r][c] == 0) ++r;
    if (r == a.size()) continue;
    std::swap(a[r], a[row]);
    const Elem inv = F.inv(a[row][c]);
    for (auto& x : a[row]) x = F.mul(x, inv);
    for (std::size_t r2 = 0; r2 < a.size(); ++r2) {
      if (r2 == row || a[r2][c] == 0) continue;
      const Elem factor = a[r2][c];
      for (std::size_t c2 = c; c2 <= nu; ++c2) a[r2][c2] = F.sub(a[r2][c2], F.mul(factor, a[row][c2]));
    }
    pivot_col.push_back(c);
    ++row;
  }
  for (std::size_t r = row; r < a.size(); ++r) {
    if (a[r][nu] != 0) return false;
  }
  if (cofactors) {
    std::vector<std::vector<std::pair<Monomial, Elem>>> terms(gens.size());
    for (std::size_t r = 0; r < pivot_col.size(); ++r) {
      const Elem v = a[r][nu];
      if (v == 0) continue;
      const Unknown& u = unknowns[pivot_col[r]];
      terms[u.gen].emplace_back(u.mult, v);
    }
    cofactors->clear();
    for (auto& t : terms) cofactors->push_back(Polynomial::from_terms(ring, std::move(t)));
  }
  return true;
}

std::vector<Polynomial> dickson_by_recursion(const RingPtr& ring, std::uint64_t q) {
  if (ring->field().order() != q) throw std::invalid_argument("ring field must be GF(q)");
  const std::size_t n = ring->nvars();
  std::vector<std::string> names{"T_oracle"};
  for (const auto& s : ring->names()) names.push_back(s);
  const RingPtr big = invar::Ring::make(ring->field(), names, invar::MonomialOrder::lex());

  Polynomial fk = Polynomial::variable(big, 0);
  for (std::size_t k = 1; k <= n; ++k) {
    std::vector<Polynomial> images;
    images.push_back(Polynomial::variable(big, k));
    for (std::size_t j = 1; j <= n; ++j) images.push_back(Polynomial::variable(big, j));
    const Polynomial at_xk = fk.substitute(images);
    fk = fk.pow(q) - at_xk.pow(q - 1) * fk;
  }

  // Coefficient of T^(q^i), with the sign (-1)^(n-i) removed.
  std::vector<std::uint64_t> qpow(n + 1, 1);
  for (std::size_t i = 1; i <= n; ++i) qpow[i] = qpow[i - 1] * q;
  std::vector<std::vector<std::pair<Monomial, Elem>>> terms(n);
  const auto& F = ring->field();
  for (std::size_t t = 0; t < fk.size(); ++t) {
    const auto e = fk.exponents(t);
    std::size_t i = 0;
    while (i <= n && qpow[i] != e[0]) ++i;
    if (i > n) throw std::logic_error("T exponent outside {q^i}");
    if (i == n) continue;
    Elem c = fk.coeff(t);
    if ((n - i) % 2 == 1) c = F.neg(c);
    terms[i].emplace_back(Monomial(std::vector<Exp>(e.begin() + 1, e.end())), c);
  }
  std::vector<Polynomial> out;
  for (auto& t : terms) out.push_back(Polynomial::from_terms(ring, std::move(t)));
  return out;
}

std::vector<std::vector<std::uint64_t>> box_tuples(const std::vector<std::uint64_t>& bounds,
                                                   const std::vector<std::uint64_t>& weights, std::uint64_t target) {
  std::vector<std::vector<std::uint64_t>> out;
  std::vector<std::uint64_t> a(bounds.size(), 0);
  std::function<void(std::size_t, std::uint64_t)> rec = [&](std::size_t i, std::uint64_t sum) {
    if (i == bounds.size()) {
      if (sum == target) out.push_back(a);
      return;
    }
    for (std::uint64_t v = 0; v <= bounds[i]; ++v) {
      a[i] = v;
      rec(i + 1, sum + v * weights[i]);
    }
  };
  rec(0, 0);
  return out;
}

}  // namespace oracle
