#include <gtest/gtest.h>

#include <chrono>
#include <cctype>
#include <set>

#include "invar/error.hpp"
#include "invar/fsing.hpp"
#include "invar/invariants.hpp"
#include "oracles.hpp"

using namespace invar;
using namespace invar::fsing;

namespace {

std::uint64_t ipow(std::uint64_t b, unsigned e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

// Flips one sign or moves one exponent of the stored q = 3 expression.
std::string mutate_c0(const std::string& text, std::mt19937_64& rng) {
  std::vector<std::size_t> exps, signs;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '^') exps.push_back(i + 1);
    if (text[i] == '+' || text[i] == '-') signs.push_back(i);
  }
  std::string s = text;
  if (rng() % 2 == 0 && !signs.empty()) {
    const std::size_t at = signs[rng() % signs.size()];
    s[at] = s[at] == '+' ? '-' : '+';
    return s;
  }
  const std::size_t at = exps[rng() % exps.size()];
  std::size_t end = at;
  while (end < s.size() && std::isdigit(static_cast<unsigned char>(s[end]))) ++end;
  const unsigned e = static_cast<unsigned>(std::stoul(s.substr(at, end - at)));
  const unsigned next = (rng() % 2 == 0 || e == 1) ? e + 1 : e - 1;
  return s.substr(0, at) + std::to_string(next) + s.substr(end);
}

}  // namespace

TEST(Sp4, StoredExpressionQ2IsExact) {
  const Report r = verify_c0_expression(2, {}, IdentityMode::Exact);
  EXPECT_EQ(r.verdict, Verdict::Verified) << r.note;
  ASSERT_EQ(r.identities.size(), 1u);
  EXPECT_TRUE(r.identities[0].equal);
  EXPECT_EQ(sp4_c0_text(2), "u^5 + v^3 + u^2*w");
}

TEST(Sp4, StoredExpressionQ3PassesTheEvaluationPrecheckQuickly) {
  const auto t0 = std::chrono::steady_clock::now();
  const Report r = verify_c0_expression(3, {}, IdentityMode::Probabilistic);
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  EXPECT_EQ(r.verdict, Verdict::Probable);
  ASSERT_TRUE(r.log2_bound.has_value());
  EXPECT_LE(*r.log2_bound, kMaxLog2Bound);
  EXPECT_LT(s, 5.0);
  ASSERT_EQ(r.evaluations.size(), 1u);
  EXPECT_EQ(r.evaluations[0].trials, 20u);
}

TEST(Sp4, StoredExpressionQ3IsExact) {
  const Report r = verify_c0_expression(3, {}, IdentityMode::Auto);
  EXPECT_EQ(r.verdict, Verdict::Verified) << r.note;
  ASSERT_EQ(r.identities.size(), 1u);
  EXPECT_EQ(r.identities[0].terms, 282u);
}

TEST(Sp4, MutatedExpressionsAreRefuted) {
  std::mt19937_64 rng(51);
  const Presentation pres = sp4_presentation(3);
  const std::string text = sp4_c0_text(3);
  for (int k = 0; k < 10; ++k) {
    const std::string m = mutate_c0(text, rng);
    ASSERT_NE(m, text);
    const Polynomial cand = Polynomial::parse(pres.ambient, m);
    const Report r = verify_c0_expression(3, {}, IdentityMode::Probabilistic, cand);
    EXPECT_EQ(r.verdict, Verdict::Refuted) << m;
    ASSERT_EQ(r.evaluations.size(), 1u);
    EXPECT_FALSE(r.evaluations[0].equal);
    EXPECT_FALSE(r.evaluations[0].point.empty());
  }
}

TEST(Sp4, RelationHoldsExactly) {
  for (std::uint64_t q : {2, 3}) {
    const Report r = sp4_relation(q, {});
    EXPECT_EQ(r.verdict, Verdict::Verified) << q;
    ASSERT_EQ(r.identities.size(), 2u);
  }
}

TEST(Sp4, PresentationMapsRelationToZero) {
  for (std::uint64_t q : {2, 3}) {
    const Presentation p = sp4_presentation(q);
    ASSERT_EQ(p.relations.size(), 1u);
    EXPECT_TRUE(p.relations[0].substitute(p.images).is_zero());
    EXPECT_EQ(p.ambient->names(), (std::vector<std::string>{"a", "b", "u", "v", "w"}));
  }
}

TEST(Sp4, FPurityFailsWithWitnessAtFirstFrobeniusPower) {
  for (std::uint64_t q : {2, 3}) {
    const Report r = sp4_fpurity_check(q, {});
    EXPECT_EQ(r.verdict, Verdict::Verified) << q;
    EXPECT_EQ(r.param("closure-e"), "1");
    ASSERT_EQ(r.memberships.size(), 2u);
    EXPECT_FALSE(r.memberships[0].member);
    EXPECT_TRUE(r.memberships[1].member);
    for (const auto& m : r.memberships) EXPECT_TRUE(check_membership_witness(m));
    std::string why;
    EXPECT_TRUE(replay(r, {}, &why)) << why;
  }
}

TEST(Sp4, WithoutTheRelationThereIsNoClosureWitness) {
  const Report r = sp4_fpurity_check(2, {}, false);
  EXPECT_EQ(r.param("closure-e"), "none");
  EXPECT_EQ(r.verdict, Verdict::Refuted);
  EXPECT_FALSE(r.memberships.at(0).member);
}

TEST(Sp4, PositiveControlWIsInTheIdealContainingW) {
  const Presentation p = sp4_presentation(2);
  const RingPtr& A = p.ambient;
  const Polynomial w = Polynomial::variable(A, "w");
  std::vector<Polynomial> gens{Polynomial::variable(A, "u"), Polynomial::variable(A, "v"), w, p.relations[0]};
  const MembershipWitness m = membership_witness("w in (u, v, w, F)", w, gens, {});
  EXPECT_TRUE(m.member);
  EXPECT_TRUE(check_membership_witness(m));
}

TEST(Witness, TamperedCertificatesAreRejected) {
  const Report r = sp4_fpurity_check(2, {});
  MembershipWitness member = r.memberships[1];
  ASSERT_TRUE(member.member);
  member.cofactors[0] = member.cofactors[0] + Polynomial::constant(member.element.ring(), 1);
  std::string why;
  EXPECT_FALSE(check_membership_witness(member, &why));
  EXPECT_FALSE(why.empty());

  MembershipWitness outside = r.memberships[0];
  ASSERT_FALSE(outside.member);
  outside.remainder = Polynomial(outside.element.ring());
  EXPECT_FALSE(check_membership_witness(outside));

  MembershipWitness basis = r.memberships[0];
  basis.basis.pop_back();
  EXPECT_FALSE(check_membership_witness(basis));
}

TEST(TheoremSearch, MatchesBruteForce) {
  for (auto [n, q] : std::vector<std::pair<unsigned, std::uint64_t>>{{2, 2}, {2, 3}, {2, 4}, {2, 5}, {2, 7}, {2, 8}, {3, 3}, {3, 4}}) {
    std::vector<std::uint64_t> bounds, weights;
    for (unsigned i = 1; i <= 2 * n - 1; ++i) {
      bounds.push_back(i == 1 ? q - 2 : q - 1);
      weights.push_back(ipow(q, i) + 1);
    }
    const auto expect = oracle::box_tuples(bounds, weights, ipow(q, 2 * n) - 1);
    EXPECT_EQ(theorem_tuples_pruned(n, q), expect) << n << " " << q;
    EXPECT_EQ(theorem_tuples_unpruned(n, q, false), expect);
    EXPECT_EQ(theorem_tuples_unpruned(n, q, true), expect);
  }
}

TEST(TheoremSearch, FrozenSolutions) {
  EXPECT_EQ(theorem_tuples_pruned(2, 3), (std::vector<std::vector<std::uint64_t>>{{1, 2, 2}}));
  for (auto [n, q] : std::vector<std::pair<unsigned, std::uint64_t>>{{2, 4}, {2, 5}, {2, 7}, {2, 8}, {3, 8}, {3, 9}}) {
    EXPECT_TRUE(theorem_tuples_pruned(n, q).empty()) << n << " " << q;
    EXPECT_TRUE(lambda_identity_check(n, q).empty());
  }
  EXPECT_EQ(theorem_search_space(2, 3), 2u * 3 * 3);
  const Report r = theorem_exponent_search(2, 3, {});
  EXPECT_EQ(r.verdict, Verdict::Verified);
  EXPECT_NE(r.note.find("theorem hypothesis q >= 4n-4 not met"), std::string::npos);
  EXPECT_EQ(r.tuples.size(), 1u);
  EXPECT_THROW(theorem_exponent_search(1, 3, {}), UsageError);
}

TEST(Alternating, LemmasOnTheSmallGrid) {
  for (unsigned n : {3, 4}) {
    for (std::uint64_t p : {3, 5, 7}) {
      for (auto check : {alt_lemma_T, alt_lemma_staircase, alt_delta_congruence, alt_fregularity_dichotomy}) {
        const Report r = check(n, p, {});
        EXPECT_EQ(r.verdict, Verdict::Verified) << r.claim_id << " n=" << n << " p=" << p << ": " << r.note;
        std::string why;
        EXPECT_TRUE(replay(r, {}, &why)) << why;
      }
    }
  }
}

TEST(Alternating, DichotomyAgreesWithLinearAlgebraOracle) {
  for (unsigned n : {3, 4}) {
    for (std::uint64_t p : {3, 5, 7}) {
      const RingPtr r = Ring::indexed(gf::Field::make(p), n);
      std::vector<Polynomial> e;
      for (unsigned i = 1; i <= n; ++i) e.push_back(inv::elementary_symmetric(r, i));
      const bool member = oracle::homogeneous_member(inv::vandermonde(r), e);
      EXPECT_EQ(member, p <= n) << "n=" << n << " p=" << p;
      const Report rep = alt_fregularity_dichotomy(n, p, {});
      EXPECT_EQ(rep.memberships.at(0).member, member);
    }
  }
}

TEST(Alternating, StaircaseFamily) {
  const RingPtr r = Ring::indexed(gf::Field::make(5), 3);
  const auto f = staircase_family(r);
  ASSERT_EQ(f.size(), 3u);
  EXPECT_EQ(f[0], Polynomial::parse(r, "x3^3"));
  EXPECT_EQ(f[1], Polynomial::parse(r, "x3^2*x2^2"));
  EXPECT_EQ(f[2], Polynomial::parse(r, "x3^2*x2*x1"));
  EXPECT_THROW(alt_lemma_T(3, 2, {}), UsageError);
}

TEST(Relations, ProbabilisticTwoByTwoBlocks) {
  const Report r = relations_probabilistic(2, 3, 1, {});
  EXPECT_EQ(r.verdict, Verdict::Probable);
  EXPECT_LE(*r.log2_bound, kMaxLog2Bound);
  EXPECT_EQ(relations_exact(2, 3, 1, {}).verdict, Verdict::Verified);
}

TEST(Relations, SixVariablesQ2Probabilistic) {
  for (unsigned i : {1u, 2u}) {
    const Report r = relations_probabilistic(3, 2, i, {});
    EXPECT_EQ(r.verdict, Verdict::Probable) << i;
    ASSERT_TRUE(r.log2_bound.has_value());
    EXPECT_LE(*r.log2_bound, kMaxLog2Bound);
  }
}

TEST(Relations, WeakSettingsAreSkippedNotPassed) {
  CheckConfig weak;
  weak.trials = 2;
  weak.ext_degree = 8;
  const Report r = relations_probabilistic(3, 2, 1, weak);
  EXPECT_EQ(r.verdict, Verdict::Skipped);
}

TEST(Identity, EvaluationDetectsDifferences) {
  const RingPtr r = Ring::indexed(gf::Field::make(2), 3);
  const Polynomial s = Polynomial::parse(r, "x1 + x2");
  const Polynomial f = s.pow(4) * Polynomial::parse(r, "x3");
  const Polynomial g = Polynomial::parse(r, "x1^4*x3 + x2^4*x3");
  EXPECT_TRUE(verify_identity_probabilistic(f, g, 20, 32, 1).equal);
  const EvaluationWitness w = verify_identity_probabilistic(f, g + Polynomial::parse(r, "x1*x2*x3"), 20, 32, 1);
  EXPECT_FALSE(w.equal);
  EXPECT_EQ(w.point.size(), 3u);
  EXPECT_NE(w.lhs_value, w.rhs_value);
}

TEST(Registry, RunClaimAndReplay) {
  CheckConfig cfg;
  ClaimRequest rq;
  rq.id = "alt-dichotomy";
  rq.n = 3;
  rq.p = 5;
  const Report r = run_claim(rq, cfg);
  EXPECT_EQ(r.verdict, Verdict::Verified);
  EXPECT_NE(r.note.find("Delta not in I as required"), std::string::npos);
  EXPECT_EQ(r.param("seed"), "1");
  EXPECT_TRUE(replay(r, cfg));

  // A report whose verdict contradicts its witness fails replay.
  Report forged = r;
  forged.verdict = Verdict::Refuted;
  EXPECT_FALSE(replay(forged, cfg));

  rq.id = "no-such-claim";
  EXPECT_THROW(run_claim(rq, cfg), UsageError);
  ClaimRequest missing;
  missing.id = "sp4-fpurity";
  EXPECT_THROW(run_claim(missing, cfg), UsageError);
}

TEST(Registry, ResourceGuardsBecomeSkipped) {
  CheckConfig tight;
  tight.limits.max_terms = 50;
  ClaimRequest rq;
  rq.id = "sp4-c0";
  rq.q = 3;
  rq.mode = "exact";
  const Report r = run_claim(rq, tight);
  EXPECT_EQ(r.verdict, Verdict::Skipped);
  EXPECT_NE(r.note.find("resource guard"), std::string::npos);
}

TEST(Registry, QuickSuiteCoversEveryClaimKind) {
  const auto claims = suite_claims("quick");
  EXPECT_GE(claims.size(), 12u);
  std::set<std::string> ids;
  for (const auto& c : claims) ids.insert(c.id);
  for (const char* id : {"sp4-c0", "sp4-relation", "sp4-fpurity", "theorem-search", "alt-T", "alt-staircase", "alt-delta",
                         "alt-dichotomy"}) {
    EXPECT_TRUE(ids.count(id)) << id;
  }
  EXPECT_GT(suite_claims("full").size(), claims.size());
  EXPECT_THROW(suite_claims("medium"), UsageError);
}

TEST(Registry, VerdictsDoNotDependOnTheSeed) {
  for (const auto& rq : suite_claims("quick")) {
    CheckConfig a, b;
    a.seed = 7;
    b.seed = 11;
    EXPECT_EQ(run_claim(rq, a).verdict, run_claim(rq, b).verdict) << rq.id;
  }
}
