#pragma once

// Exact arithmetic in GF(p) and GF(p^e).
//
// Elements are stored packed: the coefficient vector (r_0, ..., r_{e-1}) of
// the residue class r_0 + r_1 g + ... + r_{e-1} g^{e-1} is encoded as the
// integer r_0 + r_1 p + ... + r_{e-1} p^{e-1}.  Prime-field elements are
// therefore the integers [0, p), and the prime subfield embeds into every
// extension as the identity on packed values.

#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace invar::gf {

using Elem = std::uint64_t;

// Dense univariate polynomial over GF(p), coefficients low to high.
using UPoly = std::vector<std::uint64_t>;

// Packed field orders must stay below this bound.
inline constexpr std::uint64_t kMaxFieldOrder = std::uint64_t{1} << 62;
inline constexpr std::uint64_t kDefaultEnumerationCap = std::uint64_t{1} << 20;

bool is_prime(std::uint64_t n);

// Prime factors of n, ascending, without multiplicity.
std::vector<std::uint64_t> prime_factors(std::uint64_t n);

namespace upoly {

void trim(UPoly& f);
int degree(const UPoly& f);  // -1 for the zero polynomial
UPoly sub(const UPoly& a, const UPoly& b, std::uint64_t p);
UPoly mul_mod(const UPoly& a, const UPoly& b, const UPoly& mod, std::uint64_t p);
UPoly rem(UPoly a, const UPoly& mod, std::uint64_t p);
UPoly gcd(UPoly a, UPoly b, std::uint64_t p);
// X^(p^k) mod f.
UPoly x_pow_p_power(const UPoly& f, std::uint64_t p, unsigned k);
std::string to_string(const UPoly& f, char symbol);

}  // namespace upoly

// Rabin's test: X^(p^e) = X mod f and gcd(X^(p^(e/l)) - X, f) = 1 for every
// prime l dividing e = deg f.  f must be monic.
bool is_irreducible(const UPoly& f, std::uint64_t p);

// Smallest monic irreducible of degree e, comparing coefficient vectors from
// the constant term upward.  For e = 1 the sentinel X is returned.
UPoly find_irreducible(std::uint64_t p, unsigned e);

class Field {
 public:
  // GF(p^e) with the canonical modulus from find_irreducible.
  static Field make(std::uint64_t p, unsigned e = 1);
  static Field with_modulus(std::uint64_t p, UPoly modulus);
  // Accepts a prime power q and returns the canonical GF(q).
  static Field of_order(std::uint64_t q);

  std::uint64_t characteristic() const;
  unsigned degree() const;
  std::uint64_t order() const;
  const UPoly& modulus() const;
  bool is_prime_field() const { return degree() == 1; }

  Elem zero() const { return 0; }
  Elem one() const { return 1; }
  Elem from_int(std::int64_t v) const;
  Elem generator_power(unsigned k) const;  // g^k, with g the class of X

  Elem add(Elem a, Elem b) const;
  Elem sub(Elem a, Elem b) const;
  Elem neg(Elem a) const;
  Elem mul(Elem a, Elem b) const;
  Elem inv(Elem a) const;
  Elem div(Elem a, Elem b) const;
  Elem pow(Elem a, std::uint64_t k) const;
  Elem frobenius(Elem a) const { return pow(a, characteristic()); }

  bool in_prime_field(Elem a) const { return a < characteristic(); }
  bool contains(Elem a) const { return a < order(); }

  std::vector<std::uint64_t> digits(Elem a) const;
  Elem pack(std::span<const std::uint64_t> digits) const;

  // Integers for prime fields, polynomials in `g` otherwise.
  std::string format(Elem a) const;
  Elem parse(std::string_view text) const;

  // "p^e" followed by the modulus in `g` when e > 1.
  std::string spec_string() const;
  static Field parse_spec(std::string_view text);

  friend bool operator==(const Field& a, const Field& b);

 private:
  struct Impl;
  explicit Field(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

class FieldElement {
 public:
  FieldElement(Field field, Elem value);

  const Field& field() const { return field_; }
  Elem value() const { return value_; }
  bool is_zero() const { return value_ == 0; }

  FieldElement operator+(const FieldElement& o) const;
  FieldElement operator-(const FieldElement& o) const;
  FieldElement operator*(const FieldElement& o) const;
  FieldElement operator/(const FieldElement& o) const;
  FieldElement operator-() const;
  FieldElement inv() const;
  FieldElement pow(std::uint64_t k) const;
  FieldElement frobenius() const;

  std::string to_string() const { return field_.format(value_); }

  friend bool operator==(const FieldElement& a, const FieldElement& b) {
    return a.value_ == b.value_ && a.field_ == b.field_;
  }

 private:
  void check_same(const FieldElement& o) const;
  Field field_;
  Elem value_;
};

// All elements in increasing packed order.
std::vector<FieldElement> enumerate_elements(const Field& field,
                                             std::uint64_t cap = kDefaultEnumerationCap);

// Uniform integer in [0, bound) drawn by rejection; identical on every
// platform for a given engine state.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);

FieldElement random_element(const Field& field, std::mt19937_64& rng);

}  // namespace invar::gf
