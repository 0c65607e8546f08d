#pragma once

// Named polynomials of modular invariant theory and the linear group actions
// used to test their invariance.
//
// Constructors take the target ring and work over all of its variables, in
// the ring's listed order (X_1 is the first listed variable).

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "invar/mpoly.hpp"

namespace invar::inv {

Polynomial elementary_symmetric(const RingPtr& ring, std::size_t i);

// T_j^i: every monomial of degree i in X_j, ..., X_n with coefficient 1
// (j is 1-based).
Polynomial truncated_monomial_sum(const RingPtr& ring, std::size_t j, std::size_t i);

// prod_{i > j} (X_i - X_j).
Polynomial vandermonde(const RingPtr& ring);

// X_n^(n-1) X_(n-1)^(n-2) ... X_2, the monomial Delta reduces to modulo
// the symmetric functions.
Polynomial staircase_monomial(const RingPtr& ring);

// sum_k coeffs[k] T^k with coefficients in the X-ring.
struct TPolynomial {
  std::vector<Polynomial> coeffs;

  // Exponents of T with a nonzero coefficient, ascending.
  std::vector<std::uint64_t> support() const;
};

struct DicksonOptions {
  std::uint64_t enumeration_cap = std::uint64_t{1} << 20;
  bool parallel = true;
};

// prod (T - v) over the q^n linear forms v in the F_q-span of the variables.
// The ring's field must be GF(q).
TPolynomial dickson_product(const RingPtr& ring, const DicksonOptions& options = {});

// [c_0, ..., c_(n-1)] with
//   prod (T - v) = T^(q^n) + sum_i (-1)^(n-i) c_i T^(q^i),
// returned in `ring`, whose field must have the characteristic of q.
// q may be a proper power of the characteristic; the product is then taken
// over GF(q) and the coefficients, which lie in GF(p), are brought back.
std::vector<Polynomial> dickson_invariants(const RingPtr& ring, std::uint64_t q, const DicksonOptions& options = {});

// [c_0(x), ..., c_(n-1)(x)] at one point, via the univariate product
// prod (T - v(x)).  q must be prime (the point's field then contains F_q).
std::vector<gf::FieldElement> dickson_values(std::span<const gf::FieldElement> point, std::uint64_t q);

// xi_i = sum_k X_(2k-1) X_(2k)^(q^i) - X_(2k) X_(2k-1)^(q^i); the ring needs an
// even number of variables.
Polynomial symplectic_xi(const RingPtr& ring, std::uint64_t q, unsigned i);
gf::FieldElement symplectic_xi_value(std::span<const gf::FieldElement> point, std::uint64_t q, unsigned i);

// The i-th relation of the symplectic invariants, 1 <= i <= n-1 for 2n variables:
//   lhs = sum_{j<i} (-1)^j xi_(i-j)^(q^j) c_j
//   rhs = sum_{j>i} (-1)^j xi_(j-i)^(q^i) c_j,    c_(2n) = 1
// `dickson` must be dickson_invariants(ring, q).
std::pair<Polynomial, Polynomial> symplectic_relation_sides(const RingPtr& ring, std::uint64_t q, unsigned i,
                                                            const std::vector<Polynomial>& dickson);
std::pair<Polynomial, Polynomial> symplectic_relation_sides(const RingPtr& ring, std::uint64_t q, unsigned i);
// Both sides at one point (q prime).
std::pair<gf::FieldElement, gf::FieldElement> symplectic_relation_values(std::span<const gf::FieldElement> point,
                                                                        std::uint64_t q, unsigned i);
// Total degree of each side: q^(2n) + q^i.
std::uint64_t symplectic_relation_degree(std::size_t two_n, std::uint64_t q, unsigned i);

class MatrixGF {
 public:
  MatrixGF(gf::Field field, std::size_t n);  // zero matrix
  static MatrixGF identity(gf::Field field, std::size_t n);
  static MatrixGF diagonal(gf::Field field, const std::vector<Elem>& diag);
  // Column j holds e_(perm[j]), so X_j maps to X_(perm[j]).
  static MatrixGF permutation(gf::Field field, const std::vector<std::size_t>& perm);
  // The block-diagonal [[0,1],[-1,0]] form pairing (X_1,X_2), (X_3,X_4), ...
  static MatrixGF symplectic_form(gf::Field field, std::size_t two_n);

  const gf::Field& field() const { return field_; }
  std::size_t size() const { return n_; }
  Elem at(std::size_t r, std::size_t c) const { return a_[r * n_ + c]; }
  void set(std::size_t r, std::size_t c, Elem v) { a_[r * n_ + c] = v; }

  MatrixGF operator*(const MatrixGF& o) const;
  MatrixGF transpose() const;
  Elem determinant() const;
  bool is_invertible() const { return determinant() != 0; }

  friend bool operator==(const MatrixGF& a, const MatrixGF& b) {
    return a.n_ == b.n_ && a.field_ == b.field_ && a.a_ == b.a_;
  }

 private:
  gf::Field field_;
  std::size_t n_;
  std::vector<Elem> a_;
};

// Substitutes X_j -> sum_k M(k, j) X_k.  Entries must lie in the
// polynomial's field, or in the prime field.
Polynomial apply_matrix(const Polynomial& f, const MatrixGF& m);

// M^T J M == J for the form J above.
bool is_symplectic(const MatrixGF& m);

// Product of random symplectic transvections x -> x + a B(x, v) v and a
// random permutation of the coordinate pairs.
MatrixGF random_symplectic(gf::Field field, std::size_t two_n, std::mt19937_64& rng);
// Uniform random matrix, redrawn until the determinant is nonzero.
MatrixGF random_invertible(gf::Field field, std::size_t n, std::mt19937_64& rng);

}  // namespace invar::inv
