#include <gtest/gtest.h>

#include <random>

#include "invar/error.hpp"
#include "invar/gf.hpp"

using namespace invar;
using namespace invar::gf;

namespace {

// Every prime power up to 81.
std::vector<std::pair<std::uint64_t, unsigned>> small_fields() {
  std::vector<std::pair<std::uint64_t, unsigned>> out;
  for (std::uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79}) {
    std::uint64_t q = p;
    for (unsigned e = 1; q <= 81; ++e, q *= p) out.emplace_back(p, e);
  }
  return out;
}

}  // namespace

TEST(Field, AxiomsExhaustive) {
  for (auto [p, e] : small_fields()) {
    SCOPED_TRACE("p=" + std::to_string(p) + " e=" + std::to_string(e));
    const Field F = Field::make(p, e);
    const std::uint64_t q = F.order();
    ASSERT_EQ(q, [&] { std::uint64_t r = 1; for (unsigned k = 0; k < e; ++k) r *= p; return r; }());
    for (Elem a = 0; a < q; ++a) {
      ASSERT_EQ(F.add(a, 0), a);
      ASSERT_EQ(F.mul(a, 1), a);
      ASSERT_EQ(F.add(a, F.neg(a)), 0u);
      if (a != 0) {
        ASSERT_EQ(F.mul(a, F.inv(a)), 1u);
      }
      for (Elem b = 0; b < q; ++b) {
        ASSERT_EQ(F.add(a, b), F.add(b, a));
        ASSERT_EQ(F.mul(a, b), F.mul(b, a));
        ASSERT_EQ(F.sub(F.add(a, b), b), a);
      }
    }
    // Associativity and distributivity on all triples is q^3; sample densely
    // once q is large.
    const std::uint64_t step = q <= 27 ? 1 : 5;
    for (Elem a = 0; a < q; a += step) {
      for (Elem b = 0; b < q; b += step) {
        for (Elem c = 0; c < q; ++c) {
          ASSERT_EQ(F.mul(F.mul(a, b), c), F.mul(a, F.mul(b, c)));
          ASSERT_EQ(F.add(F.add(a, b), c), F.add(a, F.add(b, c)));
          ASSERT_EQ(F.mul(a, F.add(b, c)), F.add(F.mul(a, b), F.mul(a, c)));
        }
      }
    }
  }
}

TEST(Field, MultiplicativeGroupIsCyclicOfOrderQMinusOne) {
  for (auto [p, e] : small_fields()) {
    const Field F = Field::make(p, e);
    const std::uint64_t q = F.order();
    for (Elem a = 1; a < q; ++a) ASSERT_EQ(F.pow(a, q - 1), 1u) << F.spec_string() << " a=" << a;
    // a^q = a is Fermat in every finite field.
    for (Elem a = 0; a < q; ++a) ASSERT_EQ(F.pow(a, q), a);
  }
}

TEST(Field, FreshmansDream) {
  std::mt19937_64 rng(20261015);
  for (auto [p, e] : std::vector<std::pair<std::uint64_t, unsigned>>{{2, 8}, {3, 5}, {5, 3}, {7, 2}, {2, 61}, {3, 32}}) {
    const Field F = Field::make(p, e);
    for (int t = 0; t < 200; ++t) {
      const Elem a = random_element(F, rng).value();
      const Elem b = random_element(F, rng).value();
      ASSERT_EQ(F.frobenius(F.add(a, b)), F.add(F.frobenius(a), F.frobenius(b)));
      ASSERT_EQ(F.frobenius(F.mul(a, b)), F.mul(F.frobenius(a), F.frobenius(b)));
    }
  }
}

TEST(Field, FrobeniusFixesExactlyThePrimeField) {
  for (auto [p, e] : std::vector<std::pair<std::uint64_t, unsigned>>{{2, 4}, {3, 3}, {5, 2}}) {
    const Field F = Field::make(p, e);
    for (Elem a = 0; a < F.order(); ++a) EXPECT_EQ(F.frobenius(a) == a, F.in_prime_field(a));
  }
}

TEST(Field, CanonicalModuli) {
  EXPECT_EQ(find_irreducible(2, 2), (UPoly{1, 1, 1}));
  EXPECT_EQ(find_irreducible(2, 3), (UPoly{1, 0, 1, 1}));
  EXPECT_EQ(find_irreducible(3, 2), (UPoly{1, 0, 1}));
  EXPECT_TRUE(is_irreducible(find_irreducible(3, 32), 3));
  EXPECT_FALSE(is_irreducible({1, 0, 1}, 2));  // (X+1)^2
  EXPECT_FALSE(is_irreducible({2, 0, 1}, 3));  // (X-1)(X+1)
}

TEST(Field, CanonicalModulusIsFirstIrreducibleByBruteForce) {
  for (auto [p, e] : std::vector<std::pair<std::uint64_t, unsigned>>{{2, 5}, {2, 8}, {3, 4}, {5, 3}}) {
    std::uint64_t count = 1;
    for (unsigned k = 0; k < e; ++k) count *= p;
    // Constant term most significant.
    for (std::uint64_t m = 0; m < count; ++m) {
      UPoly f(e + 1, 0);
      f[e] = 1;
      std::uint64_t r = m;
      for (unsigned j = e; j-- > 0;) {
        f[j] = r % p;
        r /= p;
      }
      if (is_irreducible(f, p)) {
        EXPECT_EQ(find_irreducible(p, e), f) << p << "^" << e;
        break;
      }
    }
  }
}

TEST(Field, IrreducibleCountMatchesNecklaceFormula) {
  // Monic irreducibles of degree 4 over GF(2): (16 - 4) / 4 = 3.
  int count = 0;
  for (std::uint64_t m = 0; m < 16; ++m) {
    UPoly f{m & 1, (m >> 1) & 1, (m >> 2) & 1, (m >> 3) & 1, 1};
    count += is_irreducible(f, 2);
  }
  EXPECT_EQ(count, 3);
  // Degree 3 over GF(3): (27 - 3) / 3 = 8.
  count = 0;
  for (std::uint64_t m = 0; m < 27; ++m) {
    UPoly f{m % 3, (m / 3) % 3, m / 9, 1};
    count += is_irreducible(f, 3);
  }
  EXPECT_EQ(count, 8);
}

TEST(Field, FormatParseRoundTrip) {
  for (auto [p, e] : std::vector<std::pair<std::uint64_t, unsigned>>{{7, 1}, {2, 4}, {3, 3}}) {
    const Field F = Field::make(p, e);
    for (Elem a = 0; a < F.order(); ++a) ASSERT_EQ(F.parse(F.format(a)), a);
    EXPECT_EQ(Field::parse_spec(F.spec_string()), F);
  }
  const Field F = Field::make(2, 3);
  EXPECT_EQ(F.format(F.generator_power(3)), "g^2 + 1");
  EXPECT_THROW(F.parse("g^"), ParseError);
}

TEST(Field, Errors) {
  EXPECT_THROW(Field::make(4), UsageError);
  EXPECT_THROW(Field::of_order(12), UsageError);
  EXPECT_THROW(Field::make(2, 63), ResourceError);
  const Field F = Field::make(5);
  EXPECT_THROW(F.inv(0), ArithmeticError);
  EXPECT_THROW(FieldElement(F, 1) + FieldElement(Field::make(7), 1), UsageError);
  EXPECT_EQ(Field::of_order(9), Field::make(3, 2));
}

TEST(Field, UniformBelowIsStableAcrossRuns) {
  std::mt19937_64 a(7), b(7);
  for (int i = 0; i < 100; ++i) {
    const std::uint64_t bound = 1 + static_cast<std::uint64_t>(i) * 977;
    const std::uint64_t x = uniform_below(a, bound);
    ASSERT_LT(x, bound);
    ASSERT_EQ(x, uniform_below(b, bound));
  }
}

TEST(Field, EnumerationCap) {
  EXPECT_EQ(enumerate_elements(Field::make(3, 2)).size(), 9u);
  EXPECT_THROW(enumerate_elements(Field::make(2, 30), 1000), ResourceError);
}
