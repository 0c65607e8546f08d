#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "invar/error.hpp"
#include "invar/invariants.hpp"
#include "oracles.hpp"

using namespace invar;
using namespace invar::inv;

namespace {

std::uint64_t ipow(std::uint64_t b, unsigned e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

RingPtr xring(std::uint64_t p, std::size_t n) { return Ring::indexed(gf::Field::make(p), n); }

std::vector<gf::FieldElement> random_point(const gf::Field& F, std::size_t n, std::mt19937_64& rng) {
  std::vector<gf::FieldElement> pt;
  for (std::size_t i = 0; i < n; ++i) pt.push_back(gf::random_element(F, rng));
  return pt;
}

}  // namespace

TEST(Dickson, MatchesRecursionOracle) {
  struct Case {
    std::size_t n;
    std::uint64_t q;
  };
  for (Case c : std::vector<Case>{{1, 2}, {1, 5}, {2, 2}, {2, 3}, {2, 4}, {2, 5}, {3, 2}, {3, 3}, {4, 2}, {2, 8}, {2, 9}, {3, 4}}) {
    SCOPED_TRACE("n=" + std::to_string(c.n) + " q=" + std::to_string(c.q));
    const gf::Field Fq = gf::Field::of_order(c.q);
    const RingPtr rq = Ring::indexed(Fq, c.n);
    const auto expect = oracle::dickson_by_recursion(rq, c.q);
    const RingPtr rp = xring(Fq.characteristic(), c.n);
    const auto got = dickson_invariants(rp, c.q);
    ASSERT_EQ(got.size(), c.n);
    for (std::size_t i = 0; i < c.n; ++i) {
      EXPECT_EQ(got[i].change_ring(rq), expect[i]) << "c_" << i;
      EXPECT_EQ(got[i].ring(), rp);
    }
  }
}

TEST(Dickson, FrozenSmallCases) {
  const RingPtr r2 = xring(2, 2);
  const auto c = dickson_invariants(r2, 2);
  EXPECT_EQ(c[0], Polynomial::parse(r2, "x1^2*x2 + x1*x2^2"));
  EXPECT_EQ(c[1], Polynomial::parse(r2, "x1^2 + x1*x2 + x2^2"));
  EXPECT_EQ(dickson_invariants(xring(3, 1), 3)[0], Polynomial::parse(xring(3, 1), "x1^2"));

  // Term counts, from the recursion oracle.
  const auto c42 = dickson_invariants(xring(2, 4), 2);
  EXPECT_EQ(c42[0].size(), 24u);
  EXPECT_EQ(c42[1].size(), 44u);
  EXPECT_EQ(c42[2].size(), 46u);
  EXPECT_EQ(c42[3].size(), 35u);
  const auto c33 = dickson_invariants(xring(3, 3), 3);
  EXPECT_EQ(c33[0].size(), 21u);
  EXPECT_EQ(c33[1].size(), 27u);
  EXPECT_EQ(c33[2].size(), 25u);
}

TEST(Dickson, DegreesHomogeneityAndTSupport) {
  for (auto [n, q] : std::vector<std::pair<std::size_t, std::uint64_t>>{{2, 3}, {3, 2}, {2, 4}, {4, 2}}) {
    const RingPtr rq = Ring::indexed(gf::Field::of_order(q), n);
    const TPolynomial t = dickson_product(rq);
    std::vector<std::uint64_t> want;
    for (unsigned i = 0; i <= n; ++i) want.push_back(ipow(q, i));
    EXPECT_EQ(t.support(), want);
    EXPECT_EQ(t.coeffs.back(), Polynomial::constant(rq, 1));
    const auto c = dickson_invariants(xring(gf::Field::of_order(q).characteristic(), n), q);
    for (unsigned i = 0; i < n; ++i) {
      EXPECT_TRUE(c[i].is_homogeneous());
      EXPECT_EQ(static_cast<std::uint64_t>(c[i].degree()), ipow(q, n) - ipow(q, i));
    }
  }
}

TEST(Dickson, SerialAndParallelSweepsAgree) {
  DicksonOptions serial;
  serial.parallel = false;
  for (auto [n, q] : std::vector<std::pair<std::size_t, std::uint64_t>>{{3, 3}, {4, 2}, {2, 5}}) {
    const RingPtr r = xring(q, n);
    EXPECT_EQ(dickson_invariants(r, q, serial), dickson_invariants(r, q));
  }
}

TEST(Dickson, ValuesAgreeWithPolynomials) {
  std::mt19937_64 rng(41);
  for (auto [n, q] : std::vector<std::pair<std::size_t, std::uint64_t>>{{2, 3}, {3, 2}, {4, 2}, {2, 5}}) {
    const auto c = dickson_invariants(xring(q, n), q);
    const gf::Field ext = gf::Field::make(q, 7);
    for (int t = 0; t < 10; ++t) {
      const auto pt = random_point(ext, n, rng);
      const auto v = dickson_values(pt, q);
      ASSERT_EQ(v.size(), n);
      for (std::size_t i = 0; i < n; ++i) ASSERT_EQ(v[i], c[i].evaluate(pt));
    }
  }
}

TEST(Dickson, InvariantUnderRandomGeneralLinearGroupElements) {
  std::mt19937_64 rng(42);
  for (auto [n, q] : std::vector<std::pair<std::size_t, std::uint64_t>>{{2, 3}, {3, 2}, {4, 2}, {2, 4}, {3, 3}}) {
    const gf::Field Fq = gf::Field::of_order(q);
    const RingPtr rq = Ring::indexed(Fq, n);
    const auto c = dickson_invariants(rq, q);
    for (int t = 0; t < 20; ++t) {
      const MatrixGF m = random_invertible(Fq, n, rng);
      ASSERT_TRUE(m.is_invertible());
      for (const auto& ci : c) ASSERT_EQ(apply_matrix(ci, m), ci);
    }
  }
}

TEST(Dickson, EnumerationCap) {
  DicksonOptions tight;
  tight.enumeration_cap = 100;
  EXPECT_THROW(dickson_invariants(xring(3, 5), 3, tight), ResourceError);
  EXPECT_THROW(dickson_invariants(xring(3, 2), 2), UsageError);
}

TEST(Symplectic, XiIsInvariantUnderRandomSymplecticElements) {
  std::mt19937_64 rng(43);
  for (auto [two_n, q] : std::vector<std::pair<std::size_t, std::uint64_t>>{{2, 3}, {4, 2}, {4, 3}, {6, 2}, {4, 4}}) {
    const gf::Field Fq = gf::Field::of_order(q);
    const RingPtr r = Ring::indexed(Fq, two_n);
    std::vector<Polynomial> xi;
    for (unsigned i = 1; i < two_n; ++i) xi.push_back(symplectic_xi(r, q, i));
    for (int t = 0; t < 20; ++t) {
      const MatrixGF m = random_symplectic(Fq, two_n, rng);
      ASSERT_TRUE(is_symplectic(m));
      for (const auto& f : xi) ASSERT_EQ(apply_matrix(f, m), f);
    }
  }
}

TEST(Symplectic, DicksonInvariantsAreSymplecticInvariantsToo) {
  std::mt19937_64 rng(44);
  const gf::Field F = gf::Field::make(3);
  const RingPtr r = Ring::indexed(F, 4);
  const auto c = dickson_invariants(r, 3);
  for (int t = 0; t < 5; ++t) {
    const MatrixGF m = random_symplectic(F, 4, rng);
    for (const auto& ci : c) ASSERT_EQ(apply_matrix(ci, m), ci);
  }
}

TEST(Symplectic, XiIsNotInvariantUnderAGenericInvertibleMatrix) {
  const gf::Field F = gf::Field::make(3);
  const RingPtr r = Ring::indexed(F, 4);
  // Scaling one coordinate breaks the form.
  const MatrixGF d = MatrixGF::diagonal(F, {2, 1, 1, 1});
  EXPECT_FALSE(is_symplectic(d));
  EXPECT_NE(apply_matrix(symplectic_xi(r, 3, 1), d), symplectic_xi(r, 3, 1));
}

TEST(Symplectic, XiFormula) {
  const RingPtr r = xring(3, 2);
  EXPECT_EQ(symplectic_xi(r, 3, 1), Polynomial::parse(r, "x1*x2^3 - x2*x1^3"));
  EXPECT_THROW(symplectic_xi(xring(3, 3), 3, 1), UsageError);
  std::mt19937_64 rng(45);
  const RingPtr r4 = xring(2, 4);
  const gf::Field ext = gf::Field::make(2, 9);
  for (unsigned i = 1; i <= 3; ++i) {
    const Polynomial xi = symplectic_xi(r4, 2, i);
    EXPECT_TRUE(xi.is_homogeneous());
    EXPECT_EQ(static_cast<std::uint64_t>(xi.degree()), 1 + ipow(2, i));
    const auto pt = random_point(ext, 4, rng);
    EXPECT_EQ(symplectic_xi_value(pt, 2, i), xi.evaluate(pt));
  }
}

TEST(Symplectic, RelationsHoldForTwoByTwoBlocks) {
  for (std::uint64_t q : {2, 3}) {
    const RingPtr r = xring(q, 4);
    const auto [lhs, rhs] = symplectic_relation_sides(r, q, 1);
    EXPECT_EQ(lhs, rhs) << "q=" << q;
    EXPECT_EQ(static_cast<std::uint64_t>(lhs.degree()), symplectic_relation_degree(4, q, 1));
  }
  std::mt19937_64 rng(46);
  const gf::Field ext = gf::Field::make(2, 11);
  for (unsigned i = 1; i <= 2; ++i) {
    const auto pt = random_point(ext, 6, rng);
    const auto [a, b] = symplectic_relation_values(pt, 2, i);
    EXPECT_EQ(a, b);
  }
}

TEST(Alternating, SymmetricFunctions) {
  const RingPtr r = xring(5, 3);
  EXPECT_EQ(elementary_symmetric(r, 2), Polynomial::parse(r, "x1*x2 + x1*x3 + x2*x3"));
  EXPECT_EQ(elementary_symmetric(r, 0), Polynomial::constant(r, 1));
  EXPECT_TRUE(elementary_symmetric(r, 4).is_zero());
  EXPECT_EQ(truncated_monomial_sum(r, 2, 2), Polynomial::parse(r, "x2^2 + x2*x3 + x3^2"));
  EXPECT_EQ(staircase_monomial(r), Polynomial::parse(r, "x3^2*x2"));
  // Every monomial of degree i in m variables: C(m + i - 1, i) terms.
  EXPECT_EQ(truncated_monomial_sum(xring(5, 6), 1, 4).size(), 126u);
}

TEST(Alternating, VandermondeChangesSignUnderOddPermutations) {
  std::mt19937_64 rng(47);
  for (std::size_t n : {3, 4, 5}) {
    const RingPtr r = xring(7, n);
    const gf::Field F = r->field();
    const Polynomial delta = vandermonde(r);
    EXPECT_EQ(static_cast<std::size_t>(delta.degree()), n * (n - 1) / 2);
    for (int t = 0; t < 10; ++t) {
      std::vector<std::size_t> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      std::size_t inversions = 0;
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b) inversions += perm[a] > perm[b];
      const MatrixGF m = MatrixGF::permutation(F, perm);
      EXPECT_EQ(apply_matrix(delta, m), inversions % 2 ? -delta : delta);
      for (std::size_t i = 1; i <= n; ++i) EXPECT_EQ(apply_matrix(elementary_symmetric(r, i), m), elementary_symmetric(r, i));
    }
  }
}

TEST(Matrix, BasicAlgebra) {
  const gf::Field F = gf::Field::make(5);
  MatrixGF a(F, 2);
  a.set(0, 0, 1);
  a.set(0, 1, 2);
  a.set(1, 0, 3);
  a.set(1, 1, 4);
  EXPECT_EQ(a.determinant(), F.from_int(-2));
  EXPECT_EQ(a * MatrixGF::identity(F, 2), a);
  EXPECT_EQ(a.transpose().transpose(), a);
  EXPECT_TRUE(is_symplectic(MatrixGF::identity(F, 4)));
  EXPECT_TRUE(is_symplectic(MatrixGF::symplectic_form(F, 4)));
  std::mt19937_64 rng(48);
  const MatrixGF s = random_symplectic(F, 6, rng);
  EXPECT_EQ(s.determinant(), 1u);
}
