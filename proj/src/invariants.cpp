#include "invar/invariants.hpp"

#include <algorithm>

#include "invar/error.hpp"
#include "invar/kernels.hpp"

namespace invar::inv {

namespace {

// log_p(q), or UsageError when q is not a power of p.
unsigned exponent_of(std::uint64_t q, std::uint64_t p) {
  if (q < 2) throw UsageError("q must be at least 2");
  unsigned e = 0;
  while (q % p == 0) {
    q /= p;
    ++e;
  }
  if (q != 1) throw UsageError("q is not a power of the characteristic " + std::to_string(p));
  return e;
}

std::uint64_t checked_pow(std::uint64_t base, unsigned k, std::uint64_t limit, const char* what) {
  std::uint64_t r = 1;
  for (unsigned t = 0; t < k; ++t) {
    if (r > limit / base) throw ResourceError(std::string(what) + " exceeds the configured cap");
    r *= base;
  }
  return r;
}

void collect_monomials(std::size_t from, std::size_t n, std::size_t remaining, std::vector<Exp>& e,
                       std::vector<std::pair<Monomial, Elem>>& out) {
  if (from + 1 == n) {
    e[from] = static_cast<Exp>(remaining);
    out.emplace_back(Monomial(e), 1);
    e[from] = 0;
    return;
  }
  for (std::size_t k = 0; k <= remaining; ++k) {
    e[from] = static_cast<Exp>(k);
    collect_monomials(from + 1, n, remaining - k, e, out);
  }
  e[from] = 0;
}

}  // namespace

Polynomial elementary_symmetric(const RingPtr& ring, std::size_t i) {
  const std::size_t n = ring->nvars();
  if (i > n) return Polynomial(ring);
  std::vector<std::pair<Monomial, Elem>> terms;
  std::vector<bool> pick(n, false);
  std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(i), true);
  do {
    std::vector<Exp> e(n);
    for (std::size_t v = 0; v < n; ++v) e[v] = pick[v] ? 1 : 0;
    terms.emplace_back(Monomial(std::move(e)), 1);
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return Polynomial::from_terms(ring, std::move(terms));
}

Polynomial truncated_monomial_sum(const RingPtr& ring, std::size_t j, std::size_t i) {
  const std::size_t n = ring->nvars();
  if (j < 1 || j > n) throw UsageError("T_j^i needs 1 <= j <= n");
  std::vector<std::pair<Monomial, Elem>> terms;
  std::vector<Exp> e(n, 0);
  collect_monomials(j - 1, n, i, e, terms);
  return Polynomial::from_terms(ring, std::move(terms));
}

Polynomial vandermonde(const RingPtr& ring) {
  const std::size_t n = ring->nvars();
  if (n < 2) throw UsageError("the Vandermonde product needs at least two variables");
  Polynomial d = Polynomial::constant(ring, 1);
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) d *= Polynomial::variable(ring, i) - Polynomial::variable(ring, j);
  }
  return d;
}

Polynomial staircase_monomial(const RingPtr& ring) {
  std::vector<Exp> e(ring->nvars());
  for (std::size_t k = 0; k < e.size(); ++k) e[k] = static_cast<Exp>(k);
  return Polynomial::term(ring, Monomial(std::move(e)), 1);
}

// ---------------------------------------------------------------------------
// Dickson invariants

std::vector<std::uint64_t> TPolynomial::support() const {
  std::vector<std::uint64_t> s;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    if (!coeffs[k].is_zero()) s.push_back(k);
  }
  return s;
}

TPolynomial dickson_product(const RingPtr& ring, const DicksonOptions& options) {
  const gf::Field& field = ring->field();
  const std::size_t n = ring->nvars();
  const std::uint64_t q = field.order();
  if (n == 0) throw UsageError("the Dickson product needs at least one variable");
  const std::uint64_t forms = checked_pow(q, static_cast<unsigned>(n), options.enumeration_cap, "q^n");
  if (forms > ring->limits().max_exponent) throw ResourceError("q^n exceeds the exponent cap");
  const auto elems = gf::enumerate_elements(field, options.enumeration_cap);
  const bool parallel = options.parallel && kernels::max_threads() > 1;

  TPolynomial t{{Polynomial::constant(ring, 1)}};
  t.coeffs.reserve(forms + 1);
  std::vector<std::size_t> digit(n, 0);
  for (std::uint64_t count = 0; count < forms; ++count) {
    PolyBuilder v(ring, n);
    std::vector<Exp> rec(ring->stride(), 0);
    rec[0] = 1;
    // Variables in listed order are descending in every supported order.
    for (std::size_t k = 0; k < n; ++k) {
      if (digit[k] == 0) continue;
      rec[k + 1] = 1;
      v.push(rec.data(), elems[digit[k]].value());
      rec[k + 1] = 0;
    }
    const Polynomial form = std::move(v).finish();
    if (parallel) {
      kernels::linear_factor_step_parallel(t.coeffs, form);
    } else {
      kernels::linear_factor_step_serial(t.coeffs, form);
    }
    for (std::size_t k = n; k-- > 0;) {
      if (++digit[k] < q) break;
      digit[k] = 0;
    }
  }
  return t;
}

std::vector<Polynomial> dickson_invariants(const RingPtr& ring, std::uint64_t q, const DicksonOptions& options) {
  const std::uint64_t p = ring->field().characteristic();
  exponent_of(q, p);
  const std::size_t n = ring->nvars();
  const gf::Field work_field = ring->field().order() == q ? ring->field() : gf::Field::of_order(q);
  const RingPtr work = ring->field() == work_field ? ring : ring->with_field(work_field);
  const TPolynomial t = dickson_product(work, options);

  std::vector<std::uint64_t> expected;
  std::uint64_t qi = 1;
  for (std::size_t i = 0; i <= n; ++i, qi *= q) expected.push_back(qi);
  if (t.support() != expected) throw Error("internal error: Dickson product has T-support outside {q^i}");

  const std::uint64_t qn = expected.back();
  std::vector<Polynomial> c;
  for (std::size_t i = 0; i < n; ++i) {
    Polynomial ci = t.coeffs[expected[i]];
    if ((n - i) % 2 == 1) ci = -ci;
    if (ci.degree() != static_cast<std::int64_t>(qn - expected[i]) || !ci.is_homogeneous()) {
      throw Error("internal error: Dickson invariant c_" + std::to_string(i) + " has the wrong degree");
    }
    c.push_back(work == ring ? std::move(ci) : ci.change_ring(ring));
  }
  return c;
}

std::vector<gf::FieldElement> dickson_values(std::span<const gf::FieldElement> point, std::uint64_t q) {
  if (point.empty()) throw UsageError("Dickson values need a nonempty point");
  const gf::Field& field = point.front().field();
  if (!gf::is_prime(q) || q != field.characteristic()) {
    throw UsageError("Dickson values need q equal to the characteristic of the point's field");
  }
  for (const auto& x : point) {
    if (!(x.field() == field)) throw UsageError("point coordinates lie in different fields");
  }
  const std::size_t n = point.size();
  const std::uint64_t forms = checked_pow(q, static_cast<unsigned>(n), std::uint64_t{1} << 16, "q^n");
  // poly[k] is the coefficient of T^k.
  std::vector<Elem> poly{1};
  poly.reserve(forms + 1);
  std::vector<std::uint64_t> digit(n, 0);
  for (std::uint64_t count = 0; count < forms; ++count) {
    Elem v = 0;
    for (std::size_t k = 0; k < n; ++k) v = field.add(v, field.mul(digit[k], point[k].value()));
    poly.push_back(0);
    for (std::size_t k = poly.size() - 1; k > 0; --k) poly[k] = field.sub(poly[k - 1], field.mul(v, poly[k]));
    poly[0] = field.neg(field.mul(v, poly[0]));
    for (std::size_t k = n; k-- > 0;) {
      if (++digit[k] < q) break;
      digit[k] = 0;
    }
  }
  std::vector<gf::FieldElement> c;
  std::uint64_t qi = 1;
  for (std::size_t i = 0; i < n; ++i, qi *= q) {
    const Elem raw = poly[qi];
    c.emplace_back(field, (n - i) % 2 == 1 ? field.neg(raw) : raw);
  }
  return c;
}

// ---------------------------------------------------------------------------
// Symplectic invariants

Polynomial symplectic_xi(const RingPtr& ring, std::uint64_t q, unsigned i) {
  const std::size_t m = ring->nvars();
  if (m == 0 || m % 2 != 0) throw UsageError("xi_i needs an even, positive number of variables");
  if (i < 1) throw UsageError("xi_i needs i >= 1");
  exponent_of(q, ring->field().characteristic());
  const auto qi = static_cast<Exp>(checked_pow(q, i, ring->limits().max_exponent, "q^i"));
  const Elem minus = ring->field().neg(1);
  std::vector<std::pair<Monomial, Elem>> terms;
  for (std::size_t k = 0; k < m; k += 2) {
    std::vector<Exp> a(m, 0), b(m, 0);
    a[k] = 1;
    a[k + 1] = qi;
    b[k + 1] = 1;
    b[k] = qi;
    terms.emplace_back(Monomial(std::move(a)), 1);
    terms.emplace_back(Monomial(std::move(b)), minus);
  }
  return Polynomial::from_terms(ring, std::move(terms));
}

gf::FieldElement symplectic_xi_value(std::span<const gf::FieldElement> point, std::uint64_t q, unsigned i) {
  if (point.empty() || point.size() % 2 != 0) throw UsageError("xi_i needs an even, positive number of coordinates");
  std::uint64_t qi = 1;
  for (unsigned t = 0; t < i; ++t) qi *= q;
  gf::FieldElement s(point.front().field(), 0);
  for (std::size_t k = 0; k < point.size(); k += 2) {
    s = s + point[k] * point[k + 1].pow(qi) - point[k + 1] * point[k].pow(qi);
  }
  return s;
}

namespace {

void check_relation_index(std::size_t two_n, unsigned i) {
  if (two_n % 2 != 0 || two_n < 4) throw UsageError("symplectic relations need 2n >= 4 variables");
  if (i < 1 || i > two_n / 2 - 1) throw UsageError("relation index must satisfy 1 <= i <= n-1");
}

}  // namespace

std::pair<Polynomial, Polynomial> symplectic_relation_sides(const RingPtr& ring, std::uint64_t q, unsigned i,
                                                            const std::vector<Polynomial>& dickson) {
  const std::size_t two_n = ring->nvars();
  check_relation_index(two_n, i);
  if (dickson.size() != two_n) throw UsageError("expected one Dickson invariant per variable");
  const unsigned e = exponent_of(q, ring->field().characteristic());
  auto c = [&](std::size_t j) { return j == two_n ? Polynomial::constant(ring, 1) : dickson[j]; };
  auto sign = [&](std::size_t j, Polynomial f) { return j % 2 == 1 ? -f : f; };
  Polynomial lhs(ring), rhs(ring);
  for (unsigned j = 0; j < i; ++j) {
    lhs += sign(j, symplectic_xi(ring, q, i - j).frobenius_power(e * j) * c(j));
  }
  for (std::size_t j = i + 1; j <= two_n; ++j) {
    rhs += sign(j, symplectic_xi(ring, q, static_cast<unsigned>(j - i)).frobenius_power(e * i) * c(j));
  }
  return {lhs, rhs};
}

std::pair<Polynomial, Polynomial> symplectic_relation_sides(const RingPtr& ring, std::uint64_t q, unsigned i) {
  check_relation_index(ring->nvars(), i);
  return symplectic_relation_sides(ring, q, i, dickson_invariants(ring, q));
}

std::pair<gf::FieldElement, gf::FieldElement> symplectic_relation_values(std::span<const gf::FieldElement> point,
                                                                        std::uint64_t q, unsigned i) {
  const std::size_t two_n = point.size();
  check_relation_index(two_n, i);
  const auto cv = dickson_values(point, q);
  const gf::Field& field = point.front().field();
  auto c = [&](std::size_t j) { return j == two_n ? gf::FieldElement(field, 1) : cv[j]; };
  auto qpow = [&](std::size_t k) {
    std::uint64_t r = 1;
    for (std::size_t t = 0; t < k; ++t) r *= q;
    return r;
  };
  gf::FieldElement lhs(field, 0), rhs(field, 0);
  for (unsigned j = 0; j < i; ++j) {
    const auto t = symplectic_xi_value(point, q, i - j).pow(qpow(j)) * c(j);
    lhs = j % 2 == 1 ? lhs - t : lhs + t;
  }
  for (std::size_t j = i + 1; j <= two_n; ++j) {
    const auto t = symplectic_xi_value(point, q, static_cast<unsigned>(j - i)).pow(qpow(i)) * c(j);
    rhs = j % 2 == 1 ? rhs - t : rhs + t;
  }
  return {lhs, rhs};
}

std::uint64_t symplectic_relation_degree(std::size_t two_n, std::uint64_t q, unsigned i) {
  std::uint64_t a = 1, b = 1;
  for (std::size_t t = 0; t < two_n; ++t) a *= q;
  for (unsigned t = 0; t < i; ++t) b *= q;
  return a + b;
}

// ---------------------------------------------------------------------------
// Matrices

MatrixGF::MatrixGF(gf::Field field, std::size_t n) : field_(std::move(field)), n_(n), a_(n * n, 0) {}

MatrixGF MatrixGF::identity(gf::Field field, std::size_t n) {
  MatrixGF m(std::move(field), n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1);
  return m;
}

MatrixGF MatrixGF::diagonal(gf::Field field, const std::vector<Elem>& diag) {
  MatrixGF m(std::move(field), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) {
    if (!m.field_.contains(diag[i])) throw UsageError("matrix entry outside the field");
    m.set(i, i, diag[i]);
  }
  return m;
}

MatrixGF MatrixGF::permutation(gf::Field field, const std::vector<std::size_t>& perm) {
  const std::size_t n = perm.size();
  std::vector<bool> seen(n, false);
  MatrixGF m(std::move(field), n);
  for (std::size_t j = 0; j < n; ++j) {
    if (perm[j] >= n || seen[perm[j]]) throw UsageError("not a permutation");
    seen[perm[j]] = true;
    m.set(perm[j], j, 1);
  }
  return m;
}

MatrixGF MatrixGF::symplectic_form(gf::Field field, std::size_t two_n) {
  if (two_n % 2 != 0) throw UsageError("the symplectic form needs even size");
  MatrixGF j(std::move(field), two_n);
  for (std::size_t k = 0; k < two_n; k += 2) {
    j.set(k, k + 1, 1);
    j.set(k + 1, k, j.field_.neg(1));
  }
  return j;
}

MatrixGF MatrixGF::operator*(const MatrixGF& o) const {
  if (n_ != o.n_ || !(field_ == o.field_)) throw UsageError("matrix size or field mismatch");
  MatrixGF r(field_, n_);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t k = 0; k < n_; ++k) {
      const Elem a = at(i, k);
      if (a == 0) continue;
      for (std::size_t j = 0; j < n_; ++j) r.a_[i * n_ + j] = field_.add(r.a_[i * n_ + j], field_.mul(a, o.at(k, j)));
    }
  }
  return r;
}

MatrixGF MatrixGF::transpose() const {
  MatrixGF r(field_, n_);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) r.set(j, i, at(i, j));
  }
  return r;
}

Elem MatrixGF::determinant() const {
  std::vector<Elem> a = a_;
  Elem det = 1;
  for (std::size_t col = 0; col < n_; ++col) {
    std::size_t piv = col;
    while (piv < n_ && a[piv * n_ + col] == 0) ++piv;
    if (piv == n_) return 0;
    if (piv != col) {
      for (std::size_t j = 0; j < n_; ++j) std::swap(a[piv * n_ + j], a[col * n_ + j]);
      det = field_.neg(det);
    }
    const Elem pv = a[col * n_ + col];
    det = field_.mul(det, pv);
    const Elem inv = field_.inv(pv);
    for (std::size_t r = col + 1; r < n_; ++r) {
      const Elem f = field_.mul(a[r * n_ + col], inv);
      if (f == 0) continue;
      for (std::size_t j = col; j < n_; ++j) a[r * n_ + j] = field_.sub(a[r * n_ + j], field_.mul(f, a[col * n_ + j]));
    }
  }
  return det;
}

Polynomial apply_matrix(const Polynomial& f, const MatrixGF& m) {
  const RingPtr& ring = f.ring();
  const std::size_t n = ring->nvars();
  if (m.size() != n) throw UsageError("matrix size does not match the variable count");
  const bool same = m.field() == f.field();
  if (!same && m.field().characteristic() != f.field().characteristic()) {
    throw UsageError("matrix field has a different characteristic");
  }
  std::vector<Polynomial> images;
  images.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<std::pair<Monomial, Elem>> terms;
    for (std::size_t k = 0; k < n; ++k) {
      const Elem a = m.at(k, j);
      if (a == 0) continue;
      if (!same && !m.field().in_prime_field(a)) throw UsageError("matrix entry does not embed in the polynomial's field");
      std::vector<Exp> e(n, 0);
      e[k] = 1;
      terms.emplace_back(Monomial(std::move(e)), a);
    }
    images.push_back(Polynomial::from_terms(ring, std::move(terms)));
  }
  return f.substitute(images);
}

bool is_symplectic(const MatrixGF& m) {
  if (m.size() % 2 != 0) throw UsageError("symplectic test needs even size");
  const MatrixGF j = MatrixGF::symplectic_form(m.field(), m.size());
  return m.transpose() * j * m == j;
}

MatrixGF random_symplectic(gf::Field field, std::size_t two_n, std::mt19937_64& rng) {
  if (two_n == 0 || two_n % 2 != 0) throw UsageError("symplectic matrices need even, positive size");
  const MatrixGF j = MatrixGF::symplectic_form(field, two_n);
  MatrixGF m = MatrixGF::identity(field, two_n);
  for (std::size_t step = 0; step < 4 * two_n; ++step) {
    std::vector<Elem> v(two_n);
    for (auto& x : v) x = gf::random_element(field, rng).value();
    const Elem a = gf::random_element(field, rng).value();
    // u^T = v^T J; the transvection is I + a v u^T.
    std::vector<Elem> u(two_n, 0);
    for (std::size_t c = 0; c < two_n; ++c) {
      for (std::size_t r = 0; r < two_n; ++r) u[c] = field.add(u[c], field.mul(v[r], j.at(r, c)));
    }
    MatrixGF t = MatrixGF::identity(field, two_n);
    for (std::size_t r = 0; r < two_n; ++r) {
      for (std::size_t c = 0; c < two_n; ++c) t.set(r, c, field.add(t.at(r, c), field.mul(a, field.mul(v[r], u[c]))));
    }
    m = m * t;
  }
  // Fisher-Yates on the pairs, with a platform-independent draw.
  std::vector<std::size_t> pairs(two_n / 2);
  for (std::size_t k = 0; k < pairs.size(); ++k) pairs[k] = k;
  for (std::size_t k = pairs.size(); k > 1; --k) std::swap(pairs[k - 1], pairs[gf::uniform_below(rng, k)]);
  std::vector<std::size_t> perm(two_n);
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    perm[2 * k] = 2 * pairs[k];
    perm[2 * k + 1] = 2 * pairs[k] + 1;
  }
  return m * MatrixGF::permutation(field, perm);
}

MatrixGF random_invertible(gf::Field field, std::size_t n, std::mt19937_64& rng) {
  while (true) {
    MatrixGF m(field, n);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) m.set(r, c, gf::random_element(field, rng).value());
    }
    if (m.is_invertible()) return m;
  }
}

}  // namespace invar::inv
