#include "invar/groebner.hpp"

#include <algorithm>
#include <set>

#include "invar/error.hpp"

namespace invar {

IdealBasis::IdealBasis(std::vector<Polynomial> gens) : gens_(std::move(gens)) {
  if (gens_.empty()) throw UsageError("an ideal basis needs at least one generator");
  for (const auto& g : gens_) {
    if (g.is_zero()) throw UsageError("ideal generators must be nonzero");
    require_same_context(*g.ring(), *gens_.front().ring());
  }
}

IdealBasis IdealBasis::change_ring(RingPtr target) const {
  std::vector<Polynomial> out;
  out.reserve(gens_.size());
  for (const auto& g : gens_) out.push_back(g.change_ring(target));
  return IdealBasis(std::move(out));
}

// ---------------------------------------------------------------------------
// Division

namespace {

bool record_divides(const Exp* d, const Exp* m, std::size_t n) {
  if (d[0] > m[0]) return false;
  for (std::size_t v = 1; v <= n; ++v) {
    if (d[v] > m[v]) return false;
  }
  return true;
}

// p[from:] - c * shift * g[1:]; the caller has cancelled p's previous leading
// term against c * shift * g[0].
Polynomial sub_shifted_tail(const Polynomial& p, std::size_t from, Elem c, const Exp* shift, const Polynomial& g) {
  const Ring& ring = *p.ring();
  const auto& field = ring.field();
  const std::size_t stride = ring.stride();
  const Exp cap = ring.limits().max_exponent;
  const Elem negc = field.neg(c);
  PolyBuilder out(p.ring(), p.size() - from + g.size());
  std::vector<Exp> cur(stride);
  std::size_t i = from, j = 1;
  auto load = [&] {
    const Exp* r = g.record(j);
    for (std::size_t k = 0; k < stride; ++k) cur[k] = r[k] + shift[k];
    for (std::size_t k = 1; k < stride; ++k) {
      if (cur[k] > cap) throw ResourceError("exponent exceeds the configured cap during reduction");
    }
  };
  if (j < g.size()) load();
  while (i < p.size() && j < g.size()) {
    const int cmp = ring.compare(p.record(i), cur.data());
    if (cmp > 0) {
      out.push(p.record(i), p.coeff(i));
      ++i;
    } else if (cmp < 0) {
      out.push(cur.data(), field.mul(negc, g.coeff(j)));
      if (++j < g.size()) load();
    } else {
      const Elem s = field.add(p.coeff(i), field.mul(negc, g.coeff(j)));
      if (s != 0) out.push(p.record(i), s);
      ++i;
      if (++j < g.size()) load();
    }
  }
  for (; i < p.size(); ++i) out.push(p.record(i), p.coeff(i));
  while (j < g.size()) {
    out.push(cur.data(), field.mul(negc, g.coeff(j)));
    if (++j < g.size()) load();
  }
  return std::move(out).finish();
}

Polynomial combine(const std::vector<Polynomial>& cofactors, std::span<const Polynomial> divisors, const RingPtr& ring) {
  Polynomial acc(ring);
  for (std::size_t i = 0; i < cofactors.size(); ++i) {
    if (!cofactors[i].is_zero()) acc += cofactors[i] * divisors[i];
  }
  return acc;
}

}  // namespace

bool MembershipCertificate::verify(const Polynomial& f, std::span<const Polynomial> divisors) const {
  if (cofactors.size() != divisors.size()) return false;
  return combine(cofactors, divisors, f.ring()) + remainder == f;
}

MembershipCertificate divide(const Polynomial& f, std::span<const Polynomial> divisors) {
  const RingPtr& ring = f.ring();
  for (const auto& d : divisors) require_same_context(*d.ring(), *ring);
  const auto& field = ring->field();
  const std::size_t n = ring->nvars();
  const std::size_t stride = ring->stride();

  std::vector<const Exp*> lead(divisors.size(), nullptr);
  std::vector<Elem> lead_inv(divisors.size(), 0);
  for (std::size_t k = 0; k < divisors.size(); ++k) {
    if (divisors[k].is_zero()) continue;
    lead[k] = divisors[k].record(0);
    lead_inv[k] = field.inv(divisors[k].coeff(0));
  }
  std::vector<PolyBuilder> quotients;
  quotients.reserve(divisors.size());
  for (std::size_t k = 0; k < divisors.size(); ++k) quotients.emplace_back(ring);
  PolyBuilder remainder(ring);
  std::vector<Exp> shift(stride);

  Polynomial p = f;
  std::size_t pos = 0;
  while (pos < p.size()) {
    const Exp* lt = p.record(pos);
    std::size_t k = 0;
    while (k < divisors.size() && !(lead[k] && record_divides(lead[k], lt, n))) ++k;
    if (k == divisors.size()) {
      remainder.push(lt, p.coeff(pos));
      ++pos;
      continue;
    }
    const Elem c = field.mul(p.coeff(pos), lead_inv[k]);
    for (std::size_t v = 0; v < stride; ++v) shift[v] = lt[v] - lead[k][v];
    quotients[k].push(shift.data(), c);
    p = sub_shifted_tail(p, pos + 1, c, shift.data(), divisors[k]);
    pos = 0;
  }
  MembershipCertificate cert{{}, std::move(remainder).finish()};
  cert.cofactors.reserve(divisors.size());
  for (auto& q : quotients) cert.cofactors.push_back(std::move(q).finish());
#ifdef INVAR_CHECK_CERTIFICATES
  if (!cert.verify(f, divisors)) throw Error("internal error: division certificate does not recombine");
#endif
  return cert;
}

MembershipCertificate normal_form(const Polynomial& f, const GroebnerBasis& basis) {
  require_same_context(*f.ring(), *basis.ring());
  return divide(f, basis.elements());
}

Polynomial s_polynomial(const Polynomial& f, const Polynomial& g) {
  require_same_context(*f.ring(), *g.ring());
  if (f.is_zero() || g.is_zero()) throw UsageError("S-polynomial of a zero polynomial");
  const auto& field = f.field();
  const Monomial lf = f.leading_monomial(), lg = g.leading_monomial();
  const Monomial l = lf.lcm(lg);
  return f.mul_term(l / lf, field.inv(f.leading_coeff())) - g.mul_term(l / lg, field.inv(g.leading_coeff()));
}

// ---------------------------------------------------------------------------
// Buchberger

namespace {

struct PairKey {
  std::vector<Exp> lcm;  // record with degree slot
  std::size_t i, j;
};

struct PairLess {
  const Ring* ring;
  bool operator()(const PairKey& a, const PairKey& b) const {
    const int c = ring->compare(a.lcm.data(), b.lcm.data());
    if (c != 0) return c < 0;
    if (a.j != b.j) return a.j < b.j;
    return a.i < b.i;
  }
};

std::vector<Exp> lcm_record(const Exp* a, const Exp* b, std::size_t n) {
  std::vector<Exp> r(n + 1);
  Exp deg = 0;
  for (std::size_t v = 1; v <= n; ++v) {
    r[v] = std::max(a[v], b[v]);
    deg += r[v];
  }
  r[0] = deg;
  return r;
}

bool coprime(const Exp* a, const Exp* b, std::size_t n) {
  for (std::size_t v = 1; v <= n; ++v) {
    if (a[v] && b[v]) return false;
  }
  return true;
}

Monomial record_monomial(const Exp* r, std::size_t n) { return Monomial(std::vector<Exp>(r + 1, r + 1 + n)); }

// rows[k] -> rows[k] * (c m) summed across a list of (quotient, row) pairs.
std::vector<Polynomial> zero_row(const RingPtr& ring, std::size_t m) { return std::vector<Polynomial>(m, Polynomial(ring)); }

}  // namespace

GroebnerBasis buchberger(const IdealBasis& basis, const GroebnerOptions& options) {
  const RingPtr& ring = basis.ring();
  const auto& field = ring->field();
  const std::size_t n = ring->nvars();
  const std::size_t m = basis.size();
  const bool track = options.track_representation;

  std::vector<Polynomial> G;
  std::vector<std::vector<Polynomial>> rep;
  for (std::size_t k = 0; k < m; ++k) {
    const Elem inv = field.inv(basis.gens()[k].leading_coeff());
    G.push_back(basis.gens()[k].scale(inv));
    if (track) {
      auto row = zero_row(ring, m);
      row[k] = Polynomial::constant(ring, inv);
      rep.push_back(std::move(row));
    }
  }

  std::set<PairKey, PairLess> pairs{PairLess{ring.get()}};
  std::set<std::pair<std::size_t, std::size_t>> pending;
  std::size_t created = 0;
  auto add_pairs_for = [&](std::size_t t) {
    for (std::size_t i = 0; i < t; ++i) {
      if (++created > options.max_pairs) {
        throw ResourceError("Buchberger exceeded the pair guard of " + std::to_string(options.max_pairs));
      }
      pairs.insert(PairKey{lcm_record(G[i].record(0), G[t].record(0), n), i, t});
      pending.emplace(i, t);
    }
  };
  for (std::size_t t = 1; t < G.size(); ++t) add_pairs_for(t);

  GroebnerBasis out;
  while (!pairs.empty()) {
    const PairKey pk = *pairs.begin();
    pairs.erase(pairs.begin());
    pending.erase({pk.i, pk.j});
    ++out.pairs_considered_;
    const Exp* li = G[pk.i].record(0);
    const Exp* lj = G[pk.j].record(0);
    if (coprime(li, lj, n)) continue;
    bool chain = false;
    for (std::size_t k = 0; k < G.size() && !chain; ++k) {
      if (k == pk.i || k == pk.j) continue;
      if (!record_divides(G[k].record(0), pk.lcm.data(), n)) continue;
      const auto a = std::minmax(pk.i, k), b = std::minmax(pk.j, k);
      chain = !pending.contains({a.first, a.second}) && !pending.contains({b.first, b.second});
    }
    if (chain) continue;

    ++out.pairs_reduced_;
    const Monomial l = record_monomial(pk.lcm.data(), n);
    const Monomial mi = l / record_monomial(li, n), mj = l / record_monomial(lj, n);
    const Polynomial s = G[pk.i].mul_term(mi, 1) - G[pk.j].mul_term(mj, 1);
    MembershipCertificate cert = divide(s, G);
    if (cert.remainder.is_zero()) continue;
    const Elem inv = field.inv(cert.remainder.leading_coeff());
    G.push_back(cert.remainder.scale(inv));
    if (track) {
      std::vector<Polynomial> row = zero_row(ring, m);
      for (std::size_t k = 0; k < m; ++k) {
        Polynomial r = rep[pk.i][k].mul_term(mi, 1) - rep[pk.j][k].mul_term(mj, 1);
        for (std::size_t q = 0; q < cert.cofactors.size(); ++q) {
          if (!cert.cofactors[q].is_zero() && !rep[q][k].is_zero()) r -= cert.cofactors[q] * rep[q][k];
        }
        row[k] = r.scale(inv);
      }
      rep.push_back(std::move(row));
    }
    add_pairs_for(G.size() - 1);
  }

  // Minimalise: drop elements whose leading monomial is divisible by another
  // surviving element's (ties keep the lower index).
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < G.size(); ++i) {
    bool redundant = false;
    for (std::size_t j = 0; j < G.size() && !redundant; ++j) {
      if (i == j || !record_divides(G[j].record(0), G[i].record(0), n)) continue;
      const bool equal_leads = record_divides(G[i].record(0), G[j].record(0), n);
      redundant = !equal_leads || j < i;
    }
    if (!redundant) keep.push_back(i);
  }
  // Tail-reduce each survivor against the others.
  std::vector<std::pair<Polynomial, std::vector<Polynomial>>> reduced;
  for (std::size_t a = 0; a < keep.size(); ++a) {
    std::vector<Polynomial> others;
    std::vector<std::size_t> other_idx;
    for (std::size_t b = 0; b < keep.size(); ++b) {
      if (b == a) continue;
      others.push_back(G[keep[b]]);
      other_idx.push_back(keep[b]);
    }
    MembershipCertificate cert = divide(G[keep[a]], others);
    std::vector<Polynomial> row;
    if (track) {
      row = rep[keep[a]];
      for (std::size_t q = 0; q < others.size(); ++q) {
        if (cert.cofactors[q].is_zero()) continue;
        for (std::size_t k = 0; k < m; ++k) {
          if (!rep[other_idx[q]][k].is_zero()) row[k] -= cert.cofactors[q] * rep[other_idx[q]][k];
        }
      }
    }
    reduced.emplace_back(std::move(cert.remainder), std::move(row));
  }
  std::sort(reduced.begin(), reduced.end(), [&](const auto& x, const auto& y) {
    return ring->compare(x.first.record(0), y.first.record(0)) < 0;
  });
  out.ring_ = ring;
  out.generators_ = basis.gens();
  for (auto& [poly, row] : reduced) {
    out.elements_.push_back(std::move(poly));
    if (track) out.representation_.push_back(std::move(row));
  }
  out.tracked_ = track;
  return out;
}

GroebnerBasis buchberger(const IdealBasis& basis, const MonomialOrder& order, const GroebnerOptions& options) {
  if (basis.ring()->order() == order) return buchberger(basis, options);
  return buchberger(basis.change_ring(basis.ring()->with_order(order)), options);
}

bool is_groebner_basis(std::span<const Polynomial> elements) {
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (elements[i].is_zero()) return false;
    for (std::size_t j = i + 1; j < elements.size(); ++j) {
      if (!divide(s_polynomial(elements[i], elements[j]), elements).remainder.is_zero()) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Membership and Frobenius operations

MembershipResult ideal_member(const Polynomial& f, const GroebnerBasis& basis) {
  MembershipResult r{false, normal_form(f, basis), {}};
  r.member = r.certificate.remainder.is_zero();
  if (basis.has_representation()) {
    const std::size_t m = basis.generators().size();
    r.generator_cofactors.assign(m, Polynomial(f.ring()));
    for (std::size_t i = 0; i < basis.elements().size(); ++i) {
      const Polynomial& q = r.certificate.cofactors[i];
      if (q.is_zero()) continue;
      for (std::size_t k = 0; k < m; ++k) {
        if (!basis.representation()[i][k].is_zero()) r.generator_cofactors[k] += q * basis.representation()[i][k];
      }
    }
  }
  return r;
}

MembershipResult ideal_member(const Polynomial& f, const IdealBasis& basis, GroebnerOptions options) {
  require_same_context(*f.ring(), *basis.ring());
  options.track_representation = true;
  return ideal_member(f, buchberger(basis, options));
}

namespace {

unsigned exponent_of_power(std::uint64_t q, std::uint64_t p) {
  if (q == 0) throw UsageError("Frobenius power q must be positive");
  unsigned e = 0;
  while (q % p == 0) {
    q /= p;
    ++e;
  }
  if (q != 1) throw UsageError("Frobenius power q is not a power of the characteristic " + std::to_string(p));
  return e;
}

}  // namespace

IdealBasis frobenius_power_ideal(const IdealBasis& basis, std::uint64_t q) {
  const unsigned e = exponent_of_power(q, basis.ring()->field().characteristic());
  std::vector<Polynomial> gens;
  gens.reserve(basis.size());
  for (const auto& g : basis.gens()) gens.push_back(g.frobenius_power(e));
  return IdealBasis(std::move(gens));
}

ClosureResult frobenius_closure_search(const Polynomial& f, const IdealBasis& ideal,
                                       std::span<const Polynomial> relations, unsigned e_max,
                                       const GroebnerOptions& options) {
  require_same_context(*f.ring(), *ideal.ring());
  for (const auto& r : relations) require_same_context(*r.ring(), *ideal.ring());
  const std::uint64_t p = f.field().characteristic();
  ClosureResult result{std::nullopt, 0, Polynomial(f.ring()), {}, {}};
  std::uint64_t q = 1;
  for (unsigned e = 0; e <= e_max; ++e, q *= p) {
    result.searched_up_to = e;
    std::vector<Polynomial> divisors = frobenius_power_ideal(ideal, q).gens();
    for (const auto& r : relations) {
      if (!r.is_zero()) divisors.push_back(r);
    }
    const Polynomial power = f.frobenius_power(e);
    MembershipResult m = ideal_member(power, IdealBasis(divisors), options);
    if (m.member) {
      result.exponent = e;
      result.power = power;
      result.divisors = std::move(divisors);
      result.cofactors = std::move(m.generator_cofactors);
      return result;
    }
  }
  return result;
}

std::vector<Polynomial> eliminate(const IdealBasis& basis, std::size_t k, const GroebnerOptions& options) {
  const RingPtr& ring = basis.ring();
  if (k > ring->nvars()) throw UsageError("cannot eliminate more variables than the ring has");
  const MonomialOrder order = ring->order().kind == OrderKind::Lex ? MonomialOrder::lex() : MonomialOrder::elimination(k);
  GroebnerOptions opts = options;
  opts.track_representation = false;
  const GroebnerBasis gb = buchberger(basis, order, opts);
  std::vector<std::string> rest(ring->names().begin() + static_cast<std::ptrdiff_t>(k), ring->names().end());
  const RingPtr target = Ring::make(ring->field(), rest, MonomialOrder::grevlex(), ring->limits());
  std::vector<Polynomial> out;
  for (const auto& g : gb.elements()) {
    bool free = true;
    for (std::size_t t = 0; t < g.size() && free; ++t) {
      auto e = g.exponents(t);
      for (std::size_t v = 0; v < k; ++v) free = free && e[v] == 0;
    }
    if (!free) continue;
    std::vector<std::pair<Monomial, Elem>> terms;
    for (std::size_t t = 0; t < g.size(); ++t) {
      auto e = g.exponents(t);
      terms.emplace_back(Monomial(std::vector<Exp>(e.begin() + static_cast<std::ptrdiff_t>(k), e.end())), g.coeff(t));
    }
    out.push_back(Polynomial::from_terms(target, std::move(terms)).make_monic());
  }
  return out;
}

}  // namespace invar
