#pragma once

// Sparse multivariate polynomials over GF(p^e).
//
// A Polynomial is an immutable value: a shared Ring (field, variable names,
// monomial order, resource limits) plus a term list kept strictly descending
// in the ring's order with no zero coefficients.  Monomials are stored flat;
// each record is `stride = nvars + 1` exponents wide and slot 0 caches the
// total degree, so the common grevlex comparison starts with one load.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "invar/gf.hpp"

namespace invar {

using gf::Elem;
using Exp = std::uint32_t;

enum class OrderKind { Lex, Grevlex };

struct MonomialOrder {
  OrderKind kind = OrderKind::Grevlex;
  // When nonzero, the first `block` variables form an elimination block:
  // monomials compare by grevlex on that block first, then grevlex on the rest.
  std::size_t block = 0;

  static MonomialOrder grevlex() { return {OrderKind::Grevlex, 0}; }
  static MonomialOrder lex() { return {OrderKind::Lex, 0}; }
  static MonomialOrder elimination(std::size_t k) { return {OrderKind::Grevlex, k}; }

  std::string name() const;
  static MonomialOrder parse(std::string_view text);

  friend bool operator==(const MonomialOrder&, const MonomialOrder&) = default;
};

struct PolyLimits {
  Exp max_exponent = Exp{1} << 20;
  std::size_t max_terms = 10'000'000;
};

class Ring;
using RingPtr = std::shared_ptr<const Ring>;

class Ring {
 public:
  static RingPtr make(gf::Field field, std::vector<std::string> names,
                      MonomialOrder order = {}, PolyLimits limits = {});
  // Variables prefix1 .. prefixN.
  static RingPtr indexed(gf::Field field, std::size_t n, std::string_view prefix = "x",
                         MonomialOrder order = {}, PolyLimits limits = {});

  const gf::Field& field() const { return field_; }
  std::size_t nvars() const { return names_.size(); }
  std::size_t stride() const { return names_.size() + 1; }
  const std::vector<std::string>& names() const { return names_; }
  const MonomialOrder& order() const { return order_; }
  const PolyLimits& limits() const { return limits_; }
  std::optional<std::size_t> index_of(std::string_view name) const;

  RingPtr with_order(MonomialOrder order) const;
  RingPtr with_field(gf::Field field) const;

  // Same field, variable names and order.
  bool same_context(const Ring& other) const;

  // Three-way comparison of two monomial records; > 0 means a > b.
  int compare(const Exp* a, const Exp* b) const {
    const std::size_t n = names_.size();
    if (order_.kind == OrderKind::Grevlex && order_.block == 0) {
      if (a[0] != b[0]) return a[0] > b[0] ? 1 : -1;
      for (std::size_t i = n; i >= 1; --i) {
        if (a[i] != b[i]) return a[i] < b[i] ? 1 : -1;
      }
      return 0;
    }
    if (order_.kind == OrderKind::Lex) {
      for (std::size_t i = 1; i <= n; ++i) {
        if (a[i] != b[i]) return a[i] > b[i] ? 1 : -1;
      }
      return 0;
    }
    return compare_block(a, b);
  }

 private:
  Ring(gf::Field field, std::vector<std::string> names, MonomialOrder order, PolyLimits limits);
  int compare_block(const Exp* a, const Exp* b) const;

  gf::Field field_;
  std::vector<std::string> names_;
  MonomialOrder order_;
  PolyLimits limits_;
};

class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(std::vector<Exp> exponents) : exps_(std::move(exponents)) {}
  static Monomial one(std::size_t nvars) { return Monomial(std::vector<Exp>(nvars, 0)); }

  std::size_t size() const { return exps_.size(); }
  Exp operator[](std::size_t i) const { return exps_[i]; }
  std::span<const Exp> exponents() const { return exps_; }
  std::uint64_t degree() const;

  bool divides(const Monomial& other) const;
  Monomial lcm(const Monomial& other) const;
  Monomial operator*(const Monomial& other) const;
  Monomial operator/(const Monomial& other) const;  // requires other.divides(*this)

  friend bool operator==(const Monomial&, const Monomial&) = default;

 private:
  std::vector<Exp> exps_;
};

class Polynomial;

// Appends terms that the caller guarantees are strictly descending with
// nonzero coefficients.  Enforces the ring's term guard.
class PolyBuilder {
 public:
  explicit PolyBuilder(RingPtr ring, std::size_t reserve = 0);
  void push(const Exp* record, Elem coeff);
  void push_exponents(std::span<const Exp> exps, Elem coeff);
  std::size_t size() const { return coeffs_.size(); }
  Polynomial finish() &&;

 private:
  RingPtr ring_;
  std::vector<Exp> data_;
  std::vector<Elem> coeffs_;
};

class Polynomial {
 public:
  explicit Polynomial(RingPtr ring);

  static Polynomial constant(RingPtr ring, Elem c);
  static Polynomial from_int(RingPtr ring, std::int64_t c);
  static Polynomial variable(RingPtr ring, std::size_t index);
  static Polynomial variable(RingPtr ring, std::string_view name);
  static Polynomial term(RingPtr ring, const Monomial& m, Elem c);
  // Sorts and combines; zero coefficients are dropped.
  static Polynomial from_terms(RingPtr ring, std::vector<std::pair<Monomial, Elem>> terms);

  const RingPtr& ring() const { return ring_; }
  const gf::Field& field() const { return ring_->field(); }
  std::size_t size() const { return coeffs_.size(); }
  bool is_zero() const { return coeffs_.empty(); }
  bool is_constant() const;

  const Exp* record(std::size_t i) const { return data_.data() + i * ring_->stride(); }
  std::span<const Exp> exponents(std::size_t i) const { return {record(i) + 1, ring_->nvars()}; }
  Elem coeff(std::size_t i) const { return coeffs_[i]; }
  Monomial monomial(std::size_t i) const;

  Monomial leading_monomial() const;
  Elem leading_coeff() const;

  // Total degree; -1 for the zero polynomial.
  std::int64_t degree() const;
  bool is_homogeneous() const;
  // Largest exponent of each variable over all terms.
  std::vector<Exp> max_exponents() const;
  // Coefficient of a given monomial (zero when absent).
  Elem coefficient_of(const Monomial& m) const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& o) { return *this = *this + o; }
  Polynomial& operator-=(const Polynomial& o) { return *this = *this - o; }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

  Polynomial scale(Elem c) const;
  Polynomial mul_term(const Monomial& m, Elem c) const;
  // this - c * m * g, computed in one merge.
  Polynomial sub_mul_term(Elem c, const Monomial& m, const Polynomial& g) const;
  Polynomial make_monic() const;

  // Binary powering; f^0 = 1.
  Polynomial pow(std::uint64_t k) const;
  // f^(p^e) term-wise: coefficients to the p^e, exponents scaled by p^e.
  Polynomial frobenius_power(unsigned e) const;

  // f(images[0], ..., images[n-1]); the images share one target ring.
  Polynomial substitute(std::span<const Polynomial> images) const;

  // The point's field must have this polynomial's characteristic and contain
  // its coefficients (prime-field coefficients embed anywhere).
  gf::FieldElement evaluate(std::span<const gf::FieldElement> point) const;

  // Re-expresses the polynomial in `target`, matching variables by name.
  // Coefficients must embed in the target field.
  Polynomial change_ring(RingPtr target) const;
  bool coefficients_in_prime_field() const;

  std::string to_string() const;
  static Polynomial parse(RingPtr ring, std::string_view text);

  friend bool operator==(const Polynomial& a, const Polynomial& b);

  // Raw storage, for kernels.
  const std::vector<Exp>& raw_exponents() const { return data_; }
  const std::vector<Elem>& raw_coeffs() const { return coeffs_; }

 private:
  friend class PolyBuilder;
  Polynomial(RingPtr ring, std::vector<Exp> data, std::vector<Elem> coeffs)
      : ring_(std::move(ring)), data_(std::move(data)), coeffs_(std::move(coeffs)) {}

  Polynomial merge(const Polynomial& o, bool subtract) const;
  void check_context(const Polynomial& o) const;

  RingPtr ring_;
  std::vector<Exp> data_;
  std::vector<Elem> coeffs_;
};

// Throws UsageError unless the two rings share field, variables and order.
void require_same_context(const Ring& a, const Ring& b);

}  // namespace invar
