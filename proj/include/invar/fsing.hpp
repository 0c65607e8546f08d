#pragma once

// The claim registry: each check builds its objects from scratch, decides a
// verdict and keeps a witness that can be re-validated without searching.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "invar/groebner.hpp"
#include "invar/mpoly.hpp"

namespace invar::fsing {

enum class Verdict { Verified, Refuted, Skipped, Probable };
std::string verdict_name(Verdict v);

// One ideal-membership fact.  For a member, element = sum cofactors[k] *
// generators[k].  For a non-member, `basis` is a Groebner basis of the ideal
// with basis[i] = sum basis_cofactors[i][k] * generators[k], and `remainder`
// is the nonzero normal form of the element.
struct MembershipWitness {
  std::string label;
  bool member = false;
  Polynomial element;
  std::vector<Polynomial> generators;
  std::vector<Polynomial> cofactors;
  std::vector<Polynomial> basis;
  std::vector<std::vector<Polynomial>> basis_cofactors;
  Polynomial remainder;
};

// An exact polynomial identity: the canonical text of both sides hashes to
// `hash`.  On failure, `monomial` names a term where the sides differ.
struct IdentityWitness {
  std::string label;
  bool equal = false;
  std::size_t terms = 0;
  std::string hash;
  std::string monomial;
};

// Random evaluations over GF(p^k).  When the sides differ, `point` is a
// coordinate list where they do.
struct EvaluationWitness {
  std::string label;
  std::string field;
  std::uint64_t seed = 0;
  unsigned trials = 0;
  std::uint64_t degree = 0;
  double log2_bound = 0;  // log2 of (degree / p^k)^trials
  bool equal = false;
  std::vector<std::string> point;
  std::string lhs_value, rhs_value;
};

struct Report {
  std::string claim_id;
  std::vector<std::pair<std::string, std::string>> params;
  Verdict verdict = Verdict::Skipped;
  std::optional<double> log2_bound;  // PROBABLE only
  std::vector<MembershipWitness> memberships;
  std::vector<IdentityWitness> identities;
  std::vector<EvaluationWitness> evaluations;
  std::vector<std::vector<std::uint64_t>> tuples;
  RingPtr witness_ring;  // ring of the membership witnesses
  double elapsed_ms = 0;
  std::string note;

  std::string param(const std::string& key) const;
};

using DicksonProvider = std::function<std::vector<Polynomial>(const RingPtr& ring, std::uint64_t q)>;

struct CheckConfig {
  std::uint64_t seed = 1;
  unsigned trials = 20;
  unsigned ext_degree = 32;
  unsigned e_max = 4;
  PolyLimits limits;
  std::size_t max_pairs = 1'000'000;
  std::uint64_t search_cap = 1'000'000'000;
  unsigned alt_max_n = 6;
  // Defaults to inv::dickson_invariants; the CLI plugs in its disk cache.
  DicksonProvider dickson;

  GroebnerOptions groebner() const;
  std::vector<Polynomial> dickson_of(const RingPtr& ring, std::uint64_t q) const;
};

// Largest acceptable error bound for a PROBABLE verdict.
constexpr double kMaxLog2Bound = -60.0;

// ---------------------------------------------------------------------------
// The Sp_4 hypersurface presentation: ambient variables a b u v w with
// a -> c_2, b -> c_3, u -> xi_1, v -> xi_2, w -> xi_3 over F_q, q in {2, 3}.

struct Presentation {
  RingPtr ambient;
  std::vector<Polynomial> relations;
  RingPtr target;                  // x1..x4
  std::vector<Polynomial> images;  // aligned with the ambient variables
  Polynomial c0_expression;        // c_0 as a polynomial in u, v, w
};

// The stored expression of c_0 in u = xi_1, v = xi_2, w = xi_3.
std::string sp4_c0_text(std::uint64_t q);
Presentation sp4_presentation(std::uint64_t q, const CheckConfig& config = {});

enum class IdentityMode { Exact, Probabilistic, Auto };
IdentityMode parse_identity_mode(const std::string& text);

// c_0 of four variables against the stored expression, or against
// `candidate` (a polynomial in the ambient ring) when given.  Auto runs the
// evaluation pre-check and then the exact comparison, settling for PROBABLE
// only when exact expansion hits a resource guard.
Report verify_c0_expression(std::uint64_t q, const CheckConfig& config, IdentityMode mode = IdentityMode::Auto,
                            const std::optional<Polynomial>& candidate = std::nullopt);

// xi_1 c_0 = xi_1^q c_2 - xi_2^q c_3 + xi_3^q in four variables, and the
// presentation relation mapping to zero under the images.
Report sp4_relation(std::uint64_t q, const CheckConfig& config);

// w is not in (u, v, F_q), and the Frobenius-closure search for w over (u, v)
// with the relation F_q stops at e = 1.  With use_relation = false the
// relation is dropped from both sub-checks.
Report sp4_fpurity_check(std::uint64_t q, const CheckConfig& config, bool use_relation = true);

// Exponent tuples (a_1, ..., a_(2n-1)) with a_1 <= q-2, a_i <= q-1 and
// sum a_i (q^i + 1) = q^(2n) - 1, in lexicographic order.
std::vector<std::vector<std::uint64_t>> theorem_tuples_pruned(unsigned n, std::uint64_t q);
std::vector<std::vector<std::uint64_t>> theorem_tuples_unpruned(unsigned n, std::uint64_t q, bool parallel = true);
// Size of the unpruned search space, saturating at UINT64_MAX.
std::uint64_t theorem_search_space(unsigned n, std::uint64_t q);
// lambda in [1, 2n-2] with lambda (q+1) = 2nq - 2n - q + 3.
std::vector<std::int64_t> lambda_identity_check(unsigned n, std::uint64_t q);
Report theorem_exponent_search(unsigned n, std::uint64_t q, const CheckConfig& config);

// The alternating-group checks in F_p[x1..xn] against I = (e_1, ..., e_n).
Report alt_lemma_T(unsigned n, std::uint64_t p, const CheckConfig& config);
Report alt_lemma_staircase(unsigned n, std::uint64_t p, const CheckConfig& config);
Report alt_delta_congruence(unsigned n, std::uint64_t p, const CheckConfig& config);
Report alt_fregularity_dichotomy(unsigned n, std::uint64_t p, const CheckConfig& config);
// The n monomials X_n^n, X_n^(n-1) X_(n-1)^(n-1), ..., X_n^(n-1) ... X_2 X_1.
std::vector<Polynomial> staircase_family(const RingPtr& ring);

// The symplectic relation i for 2n variables by random evaluation (q prime);
// i = 0 checks every i in [1, n-1].
Report relations_probabilistic(unsigned n, std::uint64_t q, unsigned i, const CheckConfig& config);
// The same relation by exact expansion.
Report relations_exact(unsigned n, std::uint64_t q, unsigned i, const CheckConfig& config);

// Evaluates f - g at `trials` uniform points of GF(p^k).
EvaluationWitness verify_identity_probabilistic(const Polynomial& f, const Polynomial& g, unsigned trials,
                                                unsigned ext_degree, std::uint64_t seed);

// Membership of `element` in the ideal of `generators`, with the witness
// filled in either direction.
MembershipWitness membership_witness(const std::string& label, const Polynomial& element,
                                     const std::vector<Polynomial>& generators, const GroebnerOptions& options);
MembershipWitness membership_witness(const std::string& label, const Polynomial& element, const GroebnerBasis& gb);
// Checks the witness by recombination, reduction and S-pair tests only.
bool check_membership_witness(const MembershipWitness& w, std::string* why = nullptr);

// ---------------------------------------------------------------------------
// Registry

struct ClaimRequest {
  std::string id;
  std::optional<unsigned> n;
  std::optional<std::uint64_t> p, q;
  std::optional<unsigned> i;
  std::string mode;  // sp4-c0: exact | probabilistic | auto; relations-n3: probabilistic | exact
};

const std::vector<std::string>& claim_ids();
// Runs one claim; resource errors become SKIPPED, usage errors propagate.
Report run_claim(const ClaimRequest& request, const CheckConfig& config);

// Re-validates a report's witnesses without searching.
bool replay(const Report& report, const CheckConfig& config, std::string* why = nullptr);

std::vector<ClaimRequest> suite_claims(const std::string& profile);

}  // namespace invar::fsing
