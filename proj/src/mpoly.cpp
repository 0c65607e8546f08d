#include "invar/mpoly.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>

#include "invar/error.hpp"
#include "invar/kernels.hpp"

namespace invar {

// ---------------------------------------------------------------------------
// MonomialOrder

std::string MonomialOrder::name() const {
  if (block > 0 && kind == OrderKind::Grevlex) return "elim:" + std::to_string(block);
  return kind == OrderKind::Lex ? "lex" : "grevlex";
}

MonomialOrder MonomialOrder::parse(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text == "grevlex") return grevlex();
  if (text == "lex") return lex();
  if (text.starts_with("elim:")) {
    std::size_t k = 0;
    for (char c : text.substr(5)) {
      if (!std::isdigit(static_cast<unsigned char>(c))) throw ParseError("bad elimination block size", 5);
      k = k * 10 + static_cast<std::size_t>(c - '0');
    }
    return elimination(k);
  }
  throw ParseError("unknown monomial order '" + std::string(text) + "'", 0);
}

// ---------------------------------------------------------------------------
// Ring

namespace {

bool valid_identifier(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

}  // namespace

Ring::Ring(gf::Field field, std::vector<std::string> names, MonomialOrder order, PolyLimits limits)
    : field_(std::move(field)), names_(std::move(names)), order_(order), limits_(limits) {}

RingPtr Ring::make(gf::Field field, std::vector<std::string> names, MonomialOrder order, PolyLimits limits) {
  std::set<std::string> seen;
  for (const auto& n : names) {
    if (!valid_identifier(n)) throw UsageError("invalid variable name '" + n + "'");
    if (!seen.insert(n).second) throw UsageError("duplicate variable name '" + n + "'");
  }
  if (order.block > names.size()) throw UsageError("elimination block larger than the variable set");
  if (limits.max_exponent == 0 || limits.max_terms == 0) throw UsageError("resource limits must be positive");
  return RingPtr(new Ring(std::move(field), std::move(names), order, limits));
}

RingPtr Ring::indexed(gf::Field field, std::size_t n, std::string_view prefix, MonomialOrder order, PolyLimits limits) {
  std::vector<std::string> names;
  for (std::size_t i = 1; i <= n; ++i) names.push_back(std::string(prefix) + std::to_string(i));
  return make(std::move(field), std::move(names), order, limits);
}

std::optional<std::size_t> Ring::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return i;
  }
  return std::nullopt;
}

RingPtr Ring::with_order(MonomialOrder order) const { return make(field_, names_, order, limits_); }
RingPtr Ring::with_field(gf::Field field) const { return make(std::move(field), names_, order_, limits_); }

bool Ring::same_context(const Ring& other) const {
  if (this == &other) return true;
  return field_ == other.field_ && names_ == other.names_ && order_ == other.order_;
}

int Ring::compare_block(const Exp* a, const Exp* b) const {
  const std::size_t n = names_.size();
  const std::size_t k = order_.block;
  std::uint64_t da = 0, db = 0;
  for (std::size_t i = 1; i <= k; ++i) {
    da += a[i];
    db += b[i];
  }
  if (da != db) return da > db ? 1 : -1;
  for (std::size_t i = k; i >= 1; --i) {
    if (a[i] != b[i]) return a[i] < b[i] ? 1 : -1;
  }
  const std::uint64_t ra = a[0] - da, rb = b[0] - db;
  if (ra != rb) return ra > rb ? 1 : -1;
  for (std::size_t i = n; i > k; --i) {
    if (a[i] != b[i]) return a[i] < b[i] ? 1 : -1;
  }
  return 0;
}

void require_same_context(const Ring& a, const Ring& b) {
  if (!a.same_context(b)) throw UsageError("polynomial context mismatch (field, variables or order differ)");
}

// ---------------------------------------------------------------------------
// Monomial

std::uint64_t Monomial::degree() const { return std::accumulate(exps_.begin(), exps_.end(), std::uint64_t{0}); }

bool Monomial::divides(const Monomial& other) const {
  if (exps_.size() != other.exps_.size()) throw UsageError("monomial size mismatch");
  for (std::size_t i = 0; i < exps_.size(); ++i) {
    if (exps_[i] > other.exps_[i]) return false;
  }
  return true;
}

Monomial Monomial::lcm(const Monomial& other) const {
  if (exps_.size() != other.exps_.size()) throw UsageError("monomial size mismatch");
  std::vector<Exp> r(exps_.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = std::max(exps_[i], other.exps_[i]);
  return Monomial(std::move(r));
}

Monomial Monomial::operator*(const Monomial& other) const {
  if (exps_.size() != other.exps_.size()) throw UsageError("monomial size mismatch");
  std::vector<Exp> r(exps_.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = exps_[i] + other.exps_[i];
  return Monomial(std::move(r));
}

Monomial Monomial::operator/(const Monomial& other) const {
  if (!other.divides(*this)) throw UsageError("monomial division is not exact");
  std::vector<Exp> r(exps_.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = exps_[i] - other.exps_[i];
  return Monomial(std::move(r));
}

// ---------------------------------------------------------------------------
// PolyBuilder

PolyBuilder::PolyBuilder(RingPtr ring, std::size_t reserve) : ring_(std::move(ring)) {
  if (reserve) {
    data_.reserve(reserve * ring_->stride());
    coeffs_.reserve(reserve);
  }
}

void PolyBuilder::push(const Exp* record, Elem coeff) {
  if (coeffs_.size() >= ring_->limits().max_terms) {
    throw ResourceError("polynomial exceeds the term guard of " + std::to_string(ring_->limits().max_terms) + " terms");
  }
  data_.insert(data_.end(), record, record + ring_->stride());
  coeffs_.push_back(coeff);
}

void PolyBuilder::push_exponents(std::span<const Exp> exps, Elem coeff) {
  if (coeffs_.size() >= ring_->limits().max_terms) {
    throw ResourceError("polynomial exceeds the term guard of " + std::to_string(ring_->limits().max_terms) + " terms");
  }
  Exp deg = 0;
  for (Exp e : exps) deg += e;
  data_.push_back(deg);
  data_.insert(data_.end(), exps.begin(), exps.end());
  coeffs_.push_back(coeff);
}

Polynomial PolyBuilder::finish() && { return Polynomial(std::move(ring_), std::move(data_), std::move(coeffs_)); }

// ---------------------------------------------------------------------------
// Polynomial: construction and inspection

Polynomial::Polynomial(RingPtr ring) : ring_(std::move(ring)) {
  if (!ring_) throw UsageError("polynomial needs a ring");
}

Polynomial Polynomial::constant(RingPtr ring, Elem c) {
  if (!ring->field().contains(c)) throw UsageError("constant outside the coefficient field");
  PolyBuilder b(ring, 1);
  if (c != 0) b.push_exponents(std::vector<Exp>(ring->nvars(), 0), c);
  return std::move(b).finish();
}

Polynomial Polynomial::from_int(RingPtr ring, std::int64_t c) {
  const Elem v = ring->field().from_int(c);
  return constant(std::move(ring), v);
}

Polynomial Polynomial::variable(RingPtr ring, std::size_t index) {
  if (index >= ring->nvars()) throw UsageError("variable index out of range");
  std::vector<Exp> e(ring->nvars(), 0);
  e[index] = 1;
  PolyBuilder b(ring, 1);
  b.push_exponents(e, 1);
  return std::move(b).finish();
}

Polynomial Polynomial::variable(RingPtr ring, std::string_view name) {
  auto idx = ring->index_of(name);
  if (!idx) throw UsageError("unknown variable '" + std::string(name) + "'");
  return variable(std::move(ring), *idx);
}

Polynomial Polynomial::term(RingPtr ring, const Monomial& m, Elem c) {
  if (m.size() != ring->nvars()) throw UsageError("monomial size does not match the ring");
  if (!ring->field().contains(c)) throw UsageError("coefficient outside the field");
  for (Exp e : m.exponents()) {
    if (e > ring->limits().max_exponent) throw ResourceError("exponent exceeds the configured cap");
  }
  PolyBuilder b(ring, 1);
  if (c != 0) b.push_exponents(m.exponents(), c);
  return std::move(b).finish();
}

Polynomial Polynomial::from_terms(RingPtr ring, std::vector<std::pair<Monomial, Elem>> terms) {
  const std::size_t n = ring->nvars();
  const std::size_t stride = ring->stride();
  const auto& field = ring->field();
  std::vector<Exp> recs(terms.size() * stride);
  for (std::size_t t = 0; t < terms.size(); ++t) {
    if (terms[t].first.size() != n) throw UsageError("monomial size does not match the ring");
    if (!field.contains(terms[t].second)) throw UsageError("coefficient outside the field");
    Exp deg = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const Exp e = terms[t].first[i];
      if (e > ring->limits().max_exponent) throw ResourceError("exponent exceeds the configured cap");
      recs[t * stride + 1 + i] = e;
      deg += e;
    }
    recs[t * stride] = deg;
  }
  std::vector<std::size_t> idx(terms.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return ring->compare(&recs[a * stride], &recs[b * stride]) > 0;
  });
  PolyBuilder out(ring, terms.size());
  std::size_t i = 0;
  while (i < idx.size()) {
    Elem acc = 0;
    std::size_t j = i;
    while (j < idx.size() && ring->compare(&recs[idx[i] * stride], &recs[idx[j] * stride]) == 0) {
      acc = field.add(acc, terms[idx[j]].second);
      ++j;
    }
    if (acc != 0) out.push(&recs[idx[i] * stride], acc);
    i = j;
  }
  return std::move(out).finish();
}

bool Polynomial::is_constant() const { return is_zero() || (size() == 1 && record(0)[0] == 0); }

Monomial Polynomial::monomial(std::size_t i) const {
  auto e = exponents(i);
  return Monomial(std::vector<Exp>(e.begin(), e.end()));
}

Monomial Polynomial::leading_monomial() const {
  if (is_zero()) throw UsageError("the zero polynomial has no leading monomial");
  return monomial(0);
}

Elem Polynomial::leading_coeff() const {
  if (is_zero()) throw UsageError("the zero polynomial has no leading coefficient");
  return coeffs_[0];
}

std::int64_t Polynomial::degree() const {
  std::int64_t d = -1;
  for (std::size_t i = 0; i < size(); ++i) d = std::max<std::int64_t>(d, record(i)[0]);
  return d;
}

bool Polynomial::is_homogeneous() const {
  for (std::size_t i = 1; i < size(); ++i) {
    if (record(i)[0] != record(0)[0]) return false;
  }
  return true;
}

std::vector<Exp> Polynomial::max_exponents() const {
  std::vector<Exp> m(ring_->nvars(), 0);
  for (std::size_t i = 0; i < size(); ++i) {
    const Exp* r = record(i);
    for (std::size_t v = 0; v < m.size(); ++v) m[v] = std::max(m[v], r[v + 1]);
  }
  return m;
}

Elem Polynomial::coefficient_of(const Monomial& m) const {
  if (m.size() != ring_->nvars()) throw UsageError("monomial size does not match the ring");
  std::vector<Exp> rec(ring_->stride());
  rec[0] = static_cast<Exp>(m.degree());
  std::copy(m.exponents().begin(), m.exponents().end(), rec.begin() + 1);
  // Terms are sorted descending; binary search.
  std::size_t lo = 0, hi = size();
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    const int c = ring_->compare(record(mid), rec.data());
    if (c == 0) return coeffs_[mid];
    if (c > 0) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  return 0;
}

bool operator==(const Polynomial& a, const Polynomial& b) {
  return a.ring_->same_context(*b.ring_) && a.coeffs_ == b.coeffs_ && a.data_ == b.data_;
}

void Polynomial::check_context(const Polynomial& o) const { require_same_context(*ring_, *o.ring_); }

// ---------------------------------------------------------------------------
// Arithmetic

Polynomial Polynomial::merge(const Polynomial& o, bool subtract) const {
  check_context(o);
  const auto& field = ring_->field();
  PolyBuilder out(ring_, size() + o.size());
  std::size_t i = 0, j = 0;
  while (i < size() && j < o.size()) {
    const int c = ring_->compare(record(i), o.record(j));
    if (c > 0) {
      out.push(record(i), coeffs_[i]);
      ++i;
    } else if (c < 0) {
      out.push(o.record(j), subtract ? field.neg(o.coeffs_[j]) : o.coeffs_[j]);
      ++j;
    } else {
      const Elem s = subtract ? field.sub(coeffs_[i], o.coeffs_[j]) : field.add(coeffs_[i], o.coeffs_[j]);
      if (s != 0) out.push(record(i), s);
      ++i;
      ++j;
    }
  }
  for (; i < size(); ++i) out.push(record(i), coeffs_[i]);
  for (; j < o.size(); ++j) out.push(o.record(j), subtract ? field.neg(o.coeffs_[j]) : o.coeffs_[j]);
  return std::move(out).finish();
}

Polynomial Polynomial::operator+(const Polynomial& o) const { return merge(o, false); }
Polynomial Polynomial::operator-(const Polynomial& o) const { return merge(o, true); }
Polynomial Polynomial::operator*(const Polynomial& o) const { return kernels::multiply(*this, o); }

Polynomial Polynomial::operator-() const {
  Polynomial r = *this;
  for (auto& c : r.coeffs_) c = ring_->field().neg(c);
  return r;
}

Polynomial Polynomial::scale(Elem c) const {
  if (!ring_->field().contains(c)) throw UsageError("scalar outside the coefficient field");
  if (c == 0) return Polynomial(ring_);
  Polynomial r = *this;
  for (auto& x : r.coeffs_) x = ring_->field().mul(x, c);
  return r;
}

Polynomial Polynomial::mul_term(const Monomial& m, Elem c) const {
  if (m.size() != ring_->nvars()) throw UsageError("monomial size does not match the ring");
  if (c == 0 || is_zero()) return Polynomial(ring_);
  const auto mx = max_exponents();
  for (std::size_t v = 0; v < mx.size(); ++v) {
    if (static_cast<std::uint64_t>(mx[v]) + m[v] > ring_->limits().max_exponent) {
      throw ResourceError("exponent exceeds the configured cap");
    }
  }
  const Exp md = static_cast<Exp>(m.degree());
  Polynomial r = *this;
  const std::size_t stride = ring_->stride();
  for (std::size_t t = 0; t < size(); ++t) {
    Exp* rec = r.data_.data() + t * stride;
    rec[0] += md;
    for (std::size_t v = 0; v < m.size(); ++v) rec[v + 1] += m[v];
    r.coeffs_[t] = ring_->field().mul(r.coeffs_[t], c);
  }
  return r;
}

Polynomial Polynomial::sub_mul_term(Elem c, const Monomial& m, const Polynomial& g) const {
  check_context(g);
  if (c == 0 || g.is_zero()) return *this;
  const auto& field = ring_->field();
  const std::size_t stride = ring_->stride();
  const std::size_t n = ring_->nvars();
  const Exp md = static_cast<Exp>(m.degree());
  const Elem negc = field.neg(c);
  std::vector<Exp> shifted(stride);
  PolyBuilder out(ring_, size() + g.size());
  std::size_t i = 0, j = 0;
  auto load = [&](std::size_t jj) {
    const Exp* r = g.record(jj);
    shifted[0] = r[0] + md;
    for (std::size_t v = 0; v < n; ++v) {
      shifted[v + 1] = r[v + 1] + m[v];
      if (shifted[v + 1] > ring_->limits().max_exponent) throw ResourceError("exponent exceeds the configured cap");
    }
  };
  if (j < g.size()) load(j);
  while (i < size() && j < g.size()) {
    const int cmp = ring_->compare(record(i), shifted.data());
    if (cmp > 0) {
      out.push(record(i), coeffs_[i]);
      ++i;
    } else if (cmp < 0) {
      out.push(shifted.data(), field.mul(negc, g.coeffs_[j]));
      if (++j < g.size()) load(j);
    } else {
      const Elem s = field.add(coeffs_[i], field.mul(negc, g.coeffs_[j]));
      if (s != 0) out.push(record(i), s);
      ++i;
      if (++j < g.size()) load(j);
    }
  }
  for (; i < size(); ++i) out.push(record(i), coeffs_[i]);
  while (j < g.size()) {
    out.push(shifted.data(), field.mul(negc, g.coeffs_[j]));
    if (++j < g.size()) load(j);
  }
  return std::move(out).finish();
}

Polynomial Polynomial::make_monic() const {
  if (is_zero()) return *this;
  return scale(ring_->field().inv(coeffs_[0]));
}

Polynomial Polynomial::pow(std::uint64_t k) const {
  Polynomial result = from_int(ring_, 1);
  Polynomial base = *this;
  while (k) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k) base = base * base;
  }
  return result;
}

Polynomial Polynomial::frobenius_power(unsigned e) const {
  const auto& field = ring_->field();
  const std::uint64_t p = field.characteristic();
  std::uint64_t q = 1;
  for (unsigned i = 0; i < e; ++i) {
    if (q > ring_->limits().max_exponent / p + 1) throw ResourceError("Frobenius power exceeds the exponent cap");
    q *= p;
  }
  const auto mx = max_exponents();
  for (Exp x : mx) {
    if (static_cast<std::uint64_t>(x) * q > ring_->limits().max_exponent) {
      throw ResourceError("Frobenius power exceeds the exponent cap");
    }
  }
  Polynomial r = *this;
  // Scaling every exponent by q preserves lex, grevlex and block orders.
  for (auto& x : r.data_) x = static_cast<Exp>(x * q);
  for (auto& c : r.coeffs_) c = field.pow(c, q);
  return r;
}

namespace {

// Coefficients of a field embed in target when the fields agree or the source
// is the prime field of the target.
bool field_embeds(const gf::Field& source, const gf::Field& target) {
  return source == target || (source.is_prime_field() && source.characteristic() == target.characteristic());
}

}  // namespace

bool Polynomial::coefficients_in_prime_field() const {
  const auto& field = ring_->field();
  return std::all_of(coeffs_.begin(), coeffs_.end(), [&](Elem c) { return field.in_prime_field(c); });
}

Polynomial Polynomial::change_ring(RingPtr target) const {
  if (ring_->same_context(*target)) return Polynomial(target, data_, coeffs_);
  const auto& src_field = ring_->field();
  const auto& dst_field = target->field();
  const bool down_to_prime = !src_field.is_prime_field() && dst_field.is_prime_field() &&
                             src_field.characteristic() == dst_field.characteristic();
  if (!field_embeds(src_field, dst_field) && !down_to_prime) {
    throw UsageError("coefficients of GF(" + src_field.spec_string() + ") do not embed in GF(" + dst_field.spec_string() + ")");
  }
  if (down_to_prime && !coefficients_in_prime_field()) {
    throw UsageError("polynomial has coefficients outside the prime field");
  }
  // Only variables that occur need a counterpart in the target.
  std::vector<std::optional<std::size_t>> map(ring_->nvars());
  for (std::size_t v = 0; v < ring_->nvars(); ++v) map[v] = target->index_of(ring_->names()[v]);
  std::vector<std::pair<Monomial, Elem>> terms;
  terms.reserve(size());
  for (std::size_t t = 0; t < size(); ++t) {
    std::vector<Exp> e(target->nvars(), 0);
    auto src = exponents(t);
    for (std::size_t v = 0; v < src.size(); ++v) {
      if (!src[v]) continue;
      if (!map[v]) throw UsageError("variable '" + ring_->names()[v] + "' missing from the target ring");
      e[*map[v]] = src[v];
    }
    terms.emplace_back(Monomial(std::move(e)), coeffs_[t]);
  }
  return from_terms(std::move(target), std::move(terms));
}

Polynomial Polynomial::substitute(std::span<const Polynomial> images) const {
  const std::size_t n = ring_->nvars();
  if (images.size() != n) throw UsageError("substitution needs one image per variable");
  if (n == 0) throw UsageError("substitution into a ring without variables");
  const RingPtr& target = images[0].ring();
  for (const auto& img : images) require_same_context(*img.ring(), *target);
  if (!field_embeds(ring_->field(), target->field())) throw UsageError("coefficients do not embed in the target field");

  // Terms sorted lexicographically on exponents so each variable splits the
  // index range into contiguous groups; Horner-style recursion over variables.
  std::vector<std::size_t> order(size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    auto ea = exponents(a), eb = exponents(b);
    return std::lexicographical_compare(ea.begin(), ea.end(), eb.begin(), eb.end());
  });
  std::vector<std::map<Exp, Polynomial>> powers(n);
  auto power = [&](std::size_t v, Exp e) -> const Polynomial& {
    auto it = powers[v].find(e);
    if (it != powers[v].end()) return it->second;
    return powers[v].emplace(e, images[v].pow(e)).first->second;
  };
  auto rec = [&](auto&& self, std::size_t lo, std::size_t hi, std::size_t v) -> Polynomial {
    if (v == n) {
      // All exponents agree, so the range holds a single term.
      return Polynomial::constant(target, coeffs_[order[lo]]);
    }
    Polynomial acc(target);
    std::size_t i = lo;
    while (i < hi) {
      const Exp e = exponents(order[i])[v];
      std::size_t j = i;
      while (j < hi && exponents(order[j])[v] == e) ++j;
      Polynomial inner = self(self, i, j, v + 1);
      acc += e == 0 ? inner : power(v, e) * inner;
      i = j;
    }
    return acc;
  };
  if (is_zero()) return Polynomial(target);
  return rec(rec, 0, size(), 0);
}

gf::FieldElement Polynomial::evaluate(std::span<const gf::FieldElement> point) const {
  if (point.size() != ring_->nvars()) throw UsageError("evaluation point has the wrong length");
  if (point.empty()) {
    return {ring_->field(), is_zero() ? 0 : coeffs_[0]};
  }
  const gf::Field& ef = point[0].field();
  for (const auto& x : point) {
    if (!(x.field() == ef)) throw UsageError("evaluation point mixes fields");
  }
  if (ef.characteristic() != ring_->field().characteristic()) throw UsageError("characteristic mismatch in evaluation");
  if (!field_embeds(ring_->field(), ef)) throw UsageError("coefficients do not embed in the evaluation field");
  Elem acc = 0;
  for (std::size_t t = 0; t < size(); ++t) {
    Elem term = coeffs_[t];
    auto e = exponents(t);
    for (std::size_t v = 0; v < e.size() && term != 0; ++v) {
      if (e[v]) term = ef.mul(term, ef.pow(point[v].value(), e[v]));
    }
    acc = ef.add(acc, term);
  }
  return {ef, acc};
}

// ---------------------------------------------------------------------------
// Text form

std::string Polynomial::to_string() const {
  if (is_zero()) return "0";
  const auto& field = ring_->field();
  std::ostringstream os;
  for (std::size_t t = 0; t < size(); ++t) {
    if (t) os << " + ";
    const Elem c = coeffs_[t];
    const std::string cs = field.in_prime_field(c) ? std::to_string(c) : "(" + field.format(c) + ")";
    auto e = exponents(t);
    const bool constant_term = record(t)[0] == 0;
    if (constant_term) {
      os << cs;
      continue;
    }
    if (c != 1) os << cs << '*';
    bool first = true;
    for (std::size_t v = 0; v < e.size(); ++v) {
      if (!e[v]) continue;
      if (!first) os << '*';
      first = false;
      os << ring_->names()[v];
      if (e[v] > 1) os << '^' << e[v];
    }
  }
  return os.str();
}

namespace {

class PolyParser {
 public:
  PolyParser(const RingPtr& ring, std::string_view text) : ring_(ring), s_(text) {}

  Polynomial run() {
    const auto& field = ring_->field();
    std::vector<std::pair<Monomial, Elem>> terms;
    bool negate = eat('-');
    while (true) {
      auto [m, c] = term();
      if (negate) c = field.neg(c);
      if (c != 0) terms.emplace_back(std::move(m), c);
      if (eat('+')) {
        negate = false;
      } else if (eat('-')) {
        negate = true;
      } else {
        break;
      }
    }
    skip();
    if (pos_ != s_.size()) throw ParseError(std::string("unexpected character '") + s_[pos_] + "'", pos_);
    return Polynomial::from_terms(ring_, std::move(terms));
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  bool peek(auto pred) {
    skip();
    return pos_ < s_.size() && pred(static_cast<unsigned char>(s_[pos_]));
  }
  std::uint64_t nat() {
    skip();
    const std::size_t start = pos_;
    std::uint64_t v = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      if (v > (UINT64_MAX - 9) / 10) throw ParseError("number too large", start);
      v = v * 10 + static_cast<std::uint64_t>(s_[pos_] - '0');
      ++pos_;
    }
    if (pos_ == start) throw ParseError("expected a number", start);
    return v;
  }

  std::pair<Monomial, Elem> term() {
    const auto& field = ring_->field();
    Elem c = 1;
    bool need_monomial = true;
    if (peek([](unsigned char ch) { return std::isdigit(ch) != 0; })) {
      const std::size_t at = pos_;
      const std::uint64_t v = nat();
      if (v >= field.characteristic()) throw ParseError("coefficient " + std::to_string(v) + " out of field", at);
      c = v;
      need_monomial = eat('*');
    } else if (eat('(')) {
      const std::size_t start = pos_;
      const std::size_t close = s_.find(')', start);
      if (close == std::string_view::npos) throw ParseError("unterminated field element", start);
      try {
        c = field.parse(s_.substr(start, close - start));
      } catch (const ParseError& e) {
        throw ParseError("bad field element: " + e.message(), start + e.position());
      }
      pos_ = close + 1;
      need_monomial = eat('*');
    }
    std::vector<Exp> exps(ring_->nvars(), 0);
    if (need_monomial) {
      do {
        skip();
        const std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
        if (start == pos_ || std::isdigit(static_cast<unsigned char>(s_[start]))) {
          throw ParseError("expected a variable", start);
        }
        const std::string_view name = s_.substr(start, pos_ - start);
        auto idx = ring_->index_of(name);
        if (!idx) throw ParseError("unknown variable '" + std::string(name) + "'", start);
        std::uint64_t e = 1;
        if (eat('^')) e = nat();
        const std::uint64_t total = exps[*idx] + e;
        if (total > ring_->limits().max_exponent) throw ParseError("exponent exceeds the configured cap", start);
        exps[*idx] = static_cast<Exp>(total);
      } while (eat('*'));
    }
    return {Monomial(std::move(exps)), c};
  }

  const RingPtr& ring_;
  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

Polynomial Polynomial::parse(RingPtr ring, std::string_view text) { return PolyParser(ring, text).run(); }

}  // namespace invar
