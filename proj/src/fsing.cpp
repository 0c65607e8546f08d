#include "invar/fsing.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>

#include "invar/error.hpp"
#include "invar/invariants.hpp"
#include "invar/kernels.hpp"
#include "invar/poly_io.hpp"

namespace invar::fsing {

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Verified: return "VERIFIED";
    case Verdict::Refuted: return "REFUTED";
    case Verdict::Skipped: return "SKIPPED";
    case Verdict::Probable: return "PROBABLE";
  }
  return "?";
}

std::string Report::param(const std::string& key) const {
  for (const auto& [k, v] : params) {
    if (k == key) return v;
  }
  return {};
}

GroebnerOptions CheckConfig::groebner() const {
  GroebnerOptions o;
  o.max_pairs = max_pairs;
  return o;
}

std::vector<Polynomial> CheckConfig::dickson_of(const RingPtr& ring, std::uint64_t q) const {
  if (dickson) return dickson(ring, q);
  return inv::dickson_invariants(ring, q);
}

namespace {

std::uint64_t ipow(std::uint64_t b, unsigned k) {
  std::uint64_t r = 1;
  for (unsigned t = 0; t < k; ++t) {
    if (r > std::numeric_limits<std::uint64_t>::max() / b) throw UsageError("parameter too large");
    r *= b;
  }
  return r;
}

void require_prime_power(std::uint64_t q) {
  if (q < 2) throw UsageError("q must be a prime power");
  std::uint64_t p = 2;
  while (q % p != 0) ++p;
  std::uint64_t r = q;
  while (r % p == 0) r /= p;
  if (r != 1) throw UsageError("q = " + std::to_string(q) + " is not a prime power");
}

void require_sp4_q(std::uint64_t q) {
  if (q != 2 && q != 3) throw UsageError("the Sp_4 presentation is stored for q = 2 and q = 3 only");
}

void require_alt(unsigned n, std::uint64_t p, const CheckConfig& config) {
  if (p == 2 || !gf::is_prime(p)) throw UsageError("alternating-group checks need an odd prime p");
  if (n < 2 || n > config.alt_max_n) {
    throw UsageError("n must lie in [2, " + std::to_string(config.alt_max_n) + "]");
  }
}

IdentityWitness identity_witness(const std::string& label, const Polynomial& lhs, const Polynomial& rhs) {
  IdentityWitness w;
  w.label = label;
  w.equal = lhs == rhs;
  w.terms = lhs.size();
  w.hash = content_hash(lhs.to_string());
  if (!w.equal) {
    const Polynomial d = lhs - rhs;
    w.monomial = Polynomial::term(d.ring(), d.leading_monomial(), 1).to_string();
  }
  return w;
}

// Draws `trials` uniform points of GF(p^k)^nvars and compares both sides.
EvaluationWitness evaluate_sides(
    const std::string& label, std::uint64_t p, std::size_t nvars, std::uint64_t degree, unsigned trials,
    unsigned ext_degree, std::uint64_t seed,
    const std::function<std::pair<gf::FieldElement, gf::FieldElement>(std::span<const gf::FieldElement>)>& sides) {
  if (ext_degree == 0) throw UsageError("extension degree must be positive");
  const gf::Field field = gf::Field::make(p, ext_degree);
  if (static_cast<double>(degree) >= static_cast<double>(field.order())) {
    throw UsageError("degree " + std::to_string(degree) + " is not below the evaluation field size");
  }
  EvaluationWitness w;
  w.label = label;
  w.field = field.spec_string();
  w.seed = seed;
  w.trials = trials;
  w.degree = degree;
  w.equal = true;
  std::mt19937_64 rng(seed);
  for (unsigned t = 0; t < trials; ++t) {
    std::vector<gf::FieldElement> point;
    point.reserve(nvars);
    for (std::size_t k = 0; k < nvars; ++k) point.push_back(gf::random_element(field, rng));
    const auto [l, r] = sides(point);
    if (!(l == r)) {
      w.equal = false;
      for (const auto& x : point) w.point.push_back(x.to_string());
      w.lhs_value = l.to_string();
      w.rhs_value = r.to_string();
      break;
    }
  }
  const double per_trial = degree == 0 ? -std::numeric_limits<double>::infinity()
                                       : std::log2(static_cast<double>(degree)) -
                                             ext_degree * std::log2(static_cast<double>(p));
  w.log2_bound = trials == 0 ? 0.0 : per_trial * trials;
  return w;
}

std::string format_tuple(const std::vector<std::uint64_t>& t) {
  std::string s = "(";
  for (std::size_t k = 0; k < t.size(); ++k) s += (k ? "," : "") + std::to_string(t[k]);
  return s + ")";
}

template <class F>
Report timed(F&& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Report r = body();
  r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// Membership witnesses

MembershipWitness membership_witness(const std::string& label, const Polynomial& element, const GroebnerBasis& gb) {
  if (!gb.has_representation()) throw UsageError("membership witnesses need a basis that tracked its representation");
  MembershipResult r = ideal_member(element, gb);
  MembershipWitness w{label, r.member, element, gb.generators(), {}, {}, {}, Polynomial(element.ring())};
  if (r.member) {
    w.cofactors = std::move(r.generator_cofactors);
  } else {
    w.basis = gb.elements();
    w.basis_cofactors = gb.representation();
    w.remainder = r.certificate.remainder;
  }
  return w;
}

MembershipWitness membership_witness(const std::string& label, const Polynomial& element,
                                     const std::vector<Polynomial>& generators, const GroebnerOptions& options) {
  GroebnerOptions opts = options;
  opts.track_representation = true;
  return membership_witness(label, element, buchberger(IdealBasis(generators), opts));
}

bool check_membership_witness(const MembershipWitness& w, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = w.label + ": " + msg;
    return false;
  };
  const RingPtr& ring = w.element.ring();
  auto combine = [&](const std::vector<Polynomial>& cof) {
    Polynomial acc(ring);
    for (std::size_t k = 0; k < cof.size(); ++k) acc += cof[k] * w.generators[k];
    return acc;
  };
  if (w.member) {
    if (w.cofactors.size() != w.generators.size()) return fail("cofactor count does not match the generators");
    if (!(combine(w.cofactors) == w.element)) return fail("cofactors do not recombine to the element");
    return true;
  }
  if (w.remainder.is_zero()) return fail("non-membership needs a nonzero remainder");
  if (w.basis_cofactors.size() != w.basis.size()) return fail("basis cofactor count mismatch");
  for (std::size_t i = 0; i < w.basis.size(); ++i) {
    if (w.basis_cofactors[i].size() != w.generators.size()) return fail("basis cofactor row has the wrong length");
    if (!(combine(w.basis_cofactors[i]) == w.basis[i])) return fail("basis element is not in the ideal");
  }
  for (const auto& g : w.generators) {
    if (!divide(g, w.basis).remainder.is_zero()) return fail("a generator does not reduce to zero");
  }
  if (!is_groebner_basis(w.basis)) return fail("basis is not a Groebner basis");
  if (!(divide(w.element, w.basis).remainder == w.remainder)) return fail("remainder is not the normal form");
  return true;
}

EvaluationWitness verify_identity_probabilistic(const Polynomial& f, const Polynomial& g, unsigned trials,
                                                unsigned ext_degree, std::uint64_t seed) {
  require_same_context(*f.ring(), *g.ring());
  if (f == g) {
    EvaluationWitness w;
    w.label = "syntactic";
    w.equal = true;
    w.log2_bound = -std::numeric_limits<double>::infinity();
    return w;
  }
  const auto degree = static_cast<std::uint64_t>(std::max<std::int64_t>({f.degree(), g.degree(), 0}));
  return evaluate_sides("f = g", f.field().characteristic(), f.ring()->nvars(), degree, trials, ext_degree, seed,
                        [&](std::span<const gf::FieldElement> pt) { return std::pair{f.evaluate(pt), g.evaluate(pt)}; });
}

// ---------------------------------------------------------------------------
// Sp_4

std::string sp4_c0_text(std::uint64_t q) {
  require_sp4_q(q);
  if (q == 2) return "u^5 + v^3 + u^2*w";
  return "v^8 + u^3*v^4*w + u^6*w^2 + u^10*v^4 - u^13*w + u^20";
}

Presentation sp4_presentation(std::uint64_t q, const CheckConfig& config) {
  require_sp4_q(q);
  const gf::Field field = gf::Field::make(q);
  const RingPtr ambient = Ring::make(field, {"a", "b", "u", "v", "w"}, MonomialOrder::grevlex(), config.limits);
  const RingPtr target = Ring::indexed(field, 4, "x", MonomialOrder::grevlex(), config.limits);
  const auto c = config.dickson_of(target, q);
  std::vector<Polynomial> images{c[2], c[3], inv::symplectic_xi(target, q, 1), inv::symplectic_xi(target, q, 2),
                                 inv::symplectic_xi(target, q, 3)};
  Polynomial c0 = Polynomial::parse(ambient, sp4_c0_text(q));
  auto var = [&](const char* name) { return Polynomial::variable(ambient, name); };
  const unsigned e = 1;  // q is prime here
  Polynomial rel = var("u") * c0 - (var("u").frobenius_power(e) * var("a") - var("v").frobenius_power(e) * var("b") +
                                    var("w").frobenius_power(e));
  return Presentation{ambient, {rel}, target, std::move(images), std::move(c0)};
}

IdentityMode parse_identity_mode(const std::string& text) {
  if (text.empty() || text == "auto") return IdentityMode::Auto;
  if (text == "exact") return IdentityMode::Exact;
  if (text == "probabilistic") return IdentityMode::Probabilistic;
  throw UsageError("unknown mode '" + text + "' (expected exact, probabilistic or auto)");
}

namespace {

// Degree in X of a polynomial in a, b, u, v, w under the images.
std::uint64_t image_degree(const Polynomial& f, std::uint64_t q) {
  const std::uint64_t w[5] = {ipow(q, 4) - ipow(q, 2), ipow(q, 4) - ipow(q, 3), q + 1, q * q + 1, q * q * q + 1};
  std::uint64_t best = 0;
  for (std::size_t t = 0; t < f.size(); ++t) {
    auto e = f.exponents(t);
    std::uint64_t d = 0;
    for (std::size_t k = 0; k < 5; ++k) d += e[k] * w[k];
    best = std::max(best, d);
  }
  return best;
}

}  // namespace

Report verify_c0_expression(std::uint64_t q, const CheckConfig& config, IdentityMode mode,
                            const std::optional<Polynomial>& candidate) {
  return timed([&] {
    const Presentation pres = sp4_presentation(q, config);
    const Polynomial cand = candidate ? *candidate : pres.c0_expression;
    require_same_context(*cand.ring(), *pres.ambient);
    Report r;
    r.claim_id = "sp4-c0";
    r.params = {{"q", std::to_string(q)},
                {"mode", mode == IdentityMode::Exact ? "exact" : mode == IdentityMode::Probabilistic ? "probabilistic" : "auto"},
                {"candidate", candidate ? cand.to_string() : "stored"}};
    const std::string label = "c0 = " + cand.to_string();

    if (mode != IdentityMode::Exact) {
      const std::uint64_t degree = std::max(ipow(q, 4) - 1, image_degree(cand, q));
      EvaluationWitness ev = evaluate_sides(
          label, q, 4, degree, config.trials, config.ext_degree, config.seed,
          [&](std::span<const gf::FieldElement> pt) {
            const auto c = inv::dickson_values(pt, q);
            std::vector<gf::FieldElement> amb{c[2], c[3], inv::symplectic_xi_value(pt, q, 1),
                                              inv::symplectic_xi_value(pt, q, 2), inv::symplectic_xi_value(pt, q, 3)};
            return std::pair{c[0], cand.evaluate(amb)};
          });
      const bool equal = ev.equal;
      const double bound = ev.log2_bound;
      r.evaluations.push_back(std::move(ev));
      if (!equal) {
        r.verdict = Verdict::Refuted;
        r.note = "sides differ at a random point";
        return r;
      }
      if (mode == IdentityMode::Probabilistic) {
        if (bound > kMaxLog2Bound) {
          r.verdict = Verdict::Skipped;
          r.note = "error bound above 2^-60; raise --trials or --ext-degree";
        } else {
          r.verdict = Verdict::Probable;
          r.log2_bound = bound;
        }
        return r;
      }
    }
    try {
      const auto c = config.dickson_of(pres.target, q);
      r.identities.push_back(identity_witness(label, c[0], cand.substitute(pres.images)));
    } catch (const ResourceError& e) {
      if (mode == IdentityMode::Auto && !r.evaluations.empty() && r.evaluations.back().log2_bound <= kMaxLog2Bound) {
        r.verdict = Verdict::Probable;
        r.log2_bound = r.evaluations.back().log2_bound;
        r.note = std::string("exact expansion stopped: ") + e.what();
        return r;
      }
      throw;
    }
    const IdentityWitness& id = r.identities.back();
    r.verdict = id.equal ? Verdict::Verified : Verdict::Refuted;
    r.note = id.equal ? "c0 equals the expression exactly (" + std::to_string(id.terms) + " terms)"
                      : "sides differ at monomial " + id.monomial;
    return r;
  });
}

Report sp4_relation(std::uint64_t q, const CheckConfig& config) {
  return timed([&] {
    const Presentation pres = sp4_presentation(q, config);
    const auto c = config.dickson_of(pres.target, q);
    Report r;
    r.claim_id = "sp4-relation";
    r.params = {{"q", std::to_string(q)}};
    const auto [lhs, rhs] = inv::symplectic_relation_sides(pres.target, q, 1, c);
    r.identities.push_back(identity_witness("xi1*c0 = xi1^q*c2 - xi2^q*c3 + xi3^q", lhs, rhs));
    r.identities.push_back(
        identity_witness("F(c2, c3, xi1, xi2, xi3) = 0", pres.relations[0].substitute(pres.images), Polynomial(pres.target)));
    const bool ok = r.identities[0].equal && r.identities[1].equal;
    r.verdict = ok ? Verdict::Verified : Verdict::Refuted;
    r.note = ok ? "relation holds exactly in the polynomial ring" : "relation fails";
    return r;
  });
}

Report sp4_fpurity_check(std::uint64_t q, const CheckConfig& config, bool use_relation) {
  return timed([&] {
    const Presentation pres = sp4_presentation(q, config);
    const RingPtr& A = pres.ambient;
    const Polynomial u = Polynomial::variable(A, "u"), v = Polynomial::variable(A, "v"), w = Polynomial::variable(A, "w");
    const std::vector<Polynomial> relations = use_relation ? pres.relations : std::vector<Polynomial>{};
    Report r;
    r.claim_id = "sp4-fpurity";
    r.params = {{"q", std::to_string(q)}, {"e_max", std::to_string(config.e_max)},
                {"relation", use_relation ? "yes" : "no"}};
    r.witness_ring = A;

    std::vector<Polynomial> gens{u, v};
    gens.insert(gens.end(), relations.begin(), relations.end());
    r.memberships.push_back(membership_witness(use_relation ? "w in (u, v, F)" : "w in (u, v)", w, gens, config.groebner()));
    const bool w_outside = !r.memberships.back().member;

    const ClosureResult closure = frobenius_closure_search(w, IdealBasis({u, v}), relations, config.e_max, config.groebner());
    if (closure.exponent) {
      const std::string qs = std::to_string(ipow(q, *closure.exponent));
      MembershipWitness cw{"w^" + qs + " in (u^" + qs + ", v^" + qs + (use_relation ? ", F)" : ")"), true, closure.power,
                           closure.divisors, closure.cofactors, {}, {}, Polynomial(A)};
      r.memberships.push_back(std::move(cw));
    }
    r.params.emplace_back("closure-e", closure.exponent ? std::to_string(*closure.exponent) : "none");
    const bool ok = w_outside && closure.exponent == 1u;
    r.verdict = ok ? Verdict::Verified : Verdict::Refuted;
    std::string note = w_outside ? "w not in (u, v)R" : "w lies in (u, v)R";
    note += closure.exponent ? "; Frobenius-closure witness at e = " + std::to_string(*closure.exponent)
                             : "; no Frobenius-closure witness up to e_max = " + std::to_string(config.e_max);
    r.note = note;
    return r;
  });
}

// ---------------------------------------------------------------------------
// Exponent counting

namespace {

struct TupleProblem {
  std::vector<std::uint64_t> bounds, weights;
  std::uint64_t target;
};

TupleProblem theorem_problem(unsigned n, std::uint64_t q) {
  if (n < 2) throw UsageError("the exponent search needs n >= 2");
  require_prime_power(q);
  const unsigned m = 2 * n - 1;
  if (static_cast<double>(2 * n) * std::log2(static_cast<double>(q)) > 62) throw UsageError("q^(2n) too large");
  TupleProblem t;
  for (unsigned i = 1; i <= m; ++i) {
    t.bounds.push_back(i == 1 ? q - 2 : q - 1);
    t.weights.push_back(ipow(q, i) + 1);
  }
  t.target = ipow(q, 2 * n) - 1;
  return t;
}

void pruned_search(const TupleProblem& t, const std::vector<std::uint64_t>& reach, std::size_t i, std::uint64_t rem,
                   std::vector<std::uint64_t>& tuple, std::vector<std::vector<std::uint64_t>>& out) {
  if (i == 0) {
    // a_1 is forced by the remaining weight.
    if (rem % t.weights[0] == 0 && rem / t.weights[0] <= t.bounds[0]) {
      tuple[0] = rem / t.weights[0];
      out.push_back(tuple);
    }
    return;
  }
  for (std::uint64_t a = 0; a <= t.bounds[i] && a * t.weights[i] <= rem; ++a) {
    const std::uint64_t next = rem - a * t.weights[i];
    if (next > reach[i - 1]) continue;  // lower coordinates cannot make up the rest
    tuple[i] = a;
    pruned_search(t, reach, i - 1, next, tuple, out);
  }
  tuple[i] = 0;
}

}  // namespace

std::vector<std::vector<std::uint64_t>> theorem_tuples_pruned(unsigned n, std::uint64_t q) {
  const TupleProblem t = theorem_problem(n, q);
  // reach[i]: the most that coordinates 0..i can contribute.
  std::vector<std::uint64_t> reach(t.bounds.size());
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < reach.size(); ++i) reach[i] = acc += t.bounds[i] * t.weights[i];
  std::vector<std::vector<std::uint64_t>> out;
  std::vector<std::uint64_t> tuple(t.bounds.size(), 0);
  // Since q^i + 1 = 1 mod q, every solution has digit sum = -1 mod q; a
  // target above the total reach has no solution at all.
  if (t.target <= reach.back()) pruned_search(t, reach, t.bounds.size() - 1, t.target, tuple, out);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::vector<std::uint64_t>> theorem_tuples_unpruned(unsigned n, std::uint64_t q, bool parallel) {
  const TupleProblem t = theorem_problem(n, q);
  return parallel ? kernels::weighted_tuples_parallel(t.bounds, t.weights, t.target)
                  : kernels::weighted_tuples_serial(t.bounds, t.weights, t.target);
}

std::uint64_t theorem_search_space(unsigned n, std::uint64_t q) {
  const TupleProblem t = theorem_problem(n, q);
  std::uint64_t s = 1;
  for (auto b : t.bounds) {
    if (s > std::numeric_limits<std::uint64_t>::max() / (b + 1)) return std::numeric_limits<std::uint64_t>::max();
    s *= b + 1;
  }
  return s;
}

std::vector<std::int64_t> lambda_identity_check(unsigned n, std::uint64_t q) {
  std::vector<std::int64_t> out;
  const auto N = static_cast<std::int64_t>(n), Q = static_cast<std::int64_t>(q);
  const std::int64_t rhs = 2 * N * Q - 2 * N - Q + 3;
  for (std::int64_t lambda = 1; lambda <= 2 * N - 2; ++lambda) {
    if (lambda * (Q + 1) == rhs) out.push_back(lambda);
  }
  return out;
}

namespace {

// The unpruned reference runs alongside the pruned search up to this size.
constexpr std::uint64_t kUnprunedLimit = 10'000'000;

}  // namespace

Report theorem_exponent_search(unsigned n, std::uint64_t q, const CheckConfig& config) {
  return timed([&] {
    Report r;
    r.claim_id = "theorem-search";
    r.params = {{"n", std::to_string(n)}, {"q", std::to_string(q)}};
    const std::uint64_t space = theorem_search_space(n, q);
    if (space > config.search_cap) {
      r.verdict = Verdict::Skipped;
      r.note = "search space " + std::to_string(space) + " exceeds the cap";
      return r;
    }
    r.tuples = theorem_tuples_pruned(n, q);
    std::string note;
    if (space <= kUnprunedLimit) {
      if (theorem_tuples_unpruned(n, q) != r.tuples) {
        r.verdict = Verdict::Refuted;
        r.note = "pruned and unpruned searches disagree";
        return r;
      }
      note = "pruned and unpruned searches agree; ";
    }
    note += std::to_string(r.tuples.size()) + " solution(s)";
    for (const auto& t : r.tuples) note += " " + format_tuple(t);
    const bool hypothesis = q >= 4 * static_cast<std::uint64_t>(n) - 4;
    const auto lambdas = lambda_identity_check(n, q);
    if (hypothesis) {
      const bool ok = r.tuples.empty() && lambdas.empty();
      r.verdict = ok ? Verdict::Verified : Verdict::Refuted;
      note += lambdas.empty() ? "; no admissible lambda" : "; admissible lambda exists";
    } else {
      r.verdict = Verdict::Verified;
      note += "; theorem hypothesis q >= 4n-4 not met";
    }
    r.note = note;
    return r;
  });
}

// ---------------------------------------------------------------------------
// Alternating groups

namespace {

struct AltSetup {
  RingPtr ring;
  GroebnerBasis gb;
};

AltSetup alt_setup(unsigned n, std::uint64_t p, const CheckConfig& config) {
  require_alt(n, p, config);
  RingPtr ring = Ring::indexed(gf::Field::make(p), n, "x", MonomialOrder::grevlex(), config.limits);
  std::vector<Polynomial> e;
  for (unsigned i = 1; i <= n; ++i) e.push_back(inv::elementary_symmetric(ring, i));
  GroebnerOptions opts = config.groebner();
  opts.track_representation = true;
  GroebnerBasis gb = buchberger(IdealBasis(e), opts);
  return {ring, std::move(gb)};
}

Report alt_report(const char* id, unsigned n, std::uint64_t p, const RingPtr& ring) {
  Report r;
  r.claim_id = id;
  r.params = {{"n", std::to_string(n)}, {"p", std::to_string(p)}};
  r.witness_ring = ring;
  return r;
}

void all_members_verdict(Report& r) {
  std::size_t bad = 0;
  for (const auto& m : r.memberships) bad += m.member ? 0 : 1;
  r.verdict = bad == 0 ? Verdict::Verified : Verdict::Refuted;
  r.note = bad == 0 ? "all " + std::to_string(r.memberships.size()) + " memberships hold"
                    : std::to_string(bad) + " of " + std::to_string(r.memberships.size()) + " memberships fail";
}

std::uint64_t factorial_mod(unsigned n, std::uint64_t p) {
  std::uint64_t f = 1 % p;
  for (unsigned k = 2; k <= n; ++k) f = f * (k % p) % p;
  return f;
}

}  // namespace

std::vector<Polynomial> staircase_family(const RingPtr& ring) {
  const std::size_t n = ring->nvars();
  std::vector<Polynomial> out;
  for (std::size_t k = 1; k <= n; ++k) {
    // X_j^(j-1) for the top k-1 variables, then X_(n-k+1)^(n-k+1).
    std::vector<Exp> e(n, 0);
    for (std::size_t j = n - k + 2; j <= n; ++j) e[j - 1] = static_cast<Exp>(j - 1);
    e[n - k] = static_cast<Exp>(n - k + 1);
    out.push_back(Polynomial::term(ring, Monomial(std::move(e)), 1));
  }
  return out;
}

Report alt_lemma_T(unsigned n, std::uint64_t p, const CheckConfig& config) {
  return timed([&] {
    const AltSetup s = alt_setup(n, p, config);
    Report r = alt_report("alt-T", n, p, s.ring);
    for (unsigned i = 1; i <= n; ++i) {
      for (unsigned j = 1; j <= i; ++j) {
        r.memberships.push_back(membership_witness("T_" + std::to_string(j) + "^" + std::to_string(i) + " in I",
                                                   inv::truncated_monomial_sum(s.ring, j, i), s.gb));
      }
    }
    all_members_verdict(r);
    return r;
  });
}

Report alt_lemma_staircase(unsigned n, std::uint64_t p, const CheckConfig& config) {
  return timed([&] {
    const AltSetup s = alt_setup(n, p, config);
    Report r = alt_report("alt-staircase", n, p, s.ring);
    for (const auto& m : staircase_family(s.ring)) r.memberships.push_back(membership_witness(m.to_string() + " in I", m, s.gb));
    all_members_verdict(r);
    return r;
  });
}

Report alt_delta_congruence(unsigned n, std::uint64_t p, const CheckConfig& config) {
  return timed([&] {
    const AltSetup s = alt_setup(n, p, config);
    Report r = alt_report("alt-delta", n, p, s.ring);
    const std::uint64_t f = factorial_mod(n, p);
    const Polynomial element = inv::vandermonde(s.ring) - inv::staircase_monomial(s.ring).scale(f);
    r.memberships.push_back(membership_witness(
        "Delta - " + std::to_string(f) + "*" + inv::staircase_monomial(s.ring).to_string() + " in I", element, s.gb));
    all_members_verdict(r);
    r.note += "; n! = " + std::to_string(f) + " mod " + std::to_string(p);
    return r;
  });
}

Report alt_fregularity_dichotomy(unsigned n, std::uint64_t p, const CheckConfig& config) {
  return timed([&] {
    if (n < 3) throw UsageError("the dichotomy check needs n >= 3");
    const AltSetup s = alt_setup(n, p, config);
    Report r = alt_report("alt-dichotomy", n, p, s.ring);
    r.memberships.push_back(membership_witness("Delta in I", inv::vandermonde(s.ring), s.gb));
    const bool member = r.memberships.back().member;
    const bool expected = p <= n;
    r.verdict = member == expected ? Verdict::Verified : Verdict::Refuted;
    r.note = std::string(member ? "Delta in I" : "Delta not in I") + (member == expected ? " as required" : " contrary to p <= n test");
    return r;
  });
}

// ---------------------------------------------------------------------------
// Larger symplectic relations

namespace {

std::vector<unsigned> relation_indices(unsigned n, unsigned i) {
  if (n < 2) throw UsageError("symplectic relations need n >= 2");
  if (i > n - 1) throw UsageError("relation index must satisfy 1 <= i <= n-1");
  std::vector<unsigned> out;
  if (i == 0) {
    for (unsigned k = 1; k <= n - 1; ++k) out.push_back(k);
  } else {
    out.push_back(i);
  }
  return out;
}

std::string relation_label(unsigned i) { return "relation i=" + std::to_string(i); }

}  // namespace

Report relations_probabilistic(unsigned n, std::uint64_t q, unsigned i, const CheckConfig& config) {
  return timed([&] {
    if (!gf::is_prime(q)) throw UsageError("the evaluation check needs prime q");
    Report r;
    r.claim_id = "relations-n3";
    r.params = {{"n", std::to_string(n)}, {"q", std::to_string(q)}, {"i", i == 0 ? "all" : std::to_string(i)},
                {"mode", "probabilistic"}};
    double worst = -std::numeric_limits<double>::infinity();
    bool equal = true;
    for (unsigned k : relation_indices(n, i)) {
      EvaluationWitness ev = evaluate_sides(
          relation_label(k), q, 2 * n, inv::symplectic_relation_degree(2 * n, q, k), config.trials, config.ext_degree,
          config.seed + k, [&](std::span<const gf::FieldElement> pt) { return inv::symplectic_relation_values(pt, q, k); });
      worst = std::max(worst, ev.log2_bound);
      equal = equal && ev.equal;
      r.evaluations.push_back(std::move(ev));
      if (!equal) break;
    }
    if (!equal) {
      r.verdict = Verdict::Refuted;
      r.note = "sides differ at a random point";
    } else if (worst > kMaxLog2Bound) {
      r.verdict = Verdict::Skipped;
      r.note = "error bound above 2^-60; raise --trials or --ext-degree";
    } else {
      r.verdict = Verdict::Probable;
      r.log2_bound = worst;
      r.note = "sides agree at every sampled point";
    }
    return r;
  });
}

Report relations_exact(unsigned n, std::uint64_t q, unsigned i, const CheckConfig& config) {
  return timed([&] {
    Report r;
    r.claim_id = "relations-n3";
    r.params = {{"n", std::to_string(n)}, {"q", std::to_string(q)}, {"i", i == 0 ? "all" : std::to_string(i)},
                {"mode", "exact"}};
    const auto indices = relation_indices(n, i);
    const RingPtr ring = Ring::indexed(gf::Field::make(gf::Field::of_order(q).characteristic()), 2 * n, "x",
                                       MonomialOrder::grevlex(), config.limits);
    const auto c = config.dickson_of(ring, q);
    bool ok = true;
    for (unsigned k : indices) {
      const auto [lhs, rhs] = inv::symplectic_relation_sides(ring, q, k, c);
      r.identities.push_back(identity_witness(relation_label(k), lhs, rhs));
      ok = ok && r.identities.back().equal;
    }
    r.verdict = ok ? Verdict::Verified : Verdict::Refuted;
    r.note = ok ? "relations hold exactly" : "a relation fails";
    return r;
  });
}

// ---------------------------------------------------------------------------
// Registry

const std::vector<std::string>& claim_ids() {
  static const std::vector<std::string> ids{"sp4-c0", "sp4-fpurity", "sp4-relation", "theorem-search", "alt-T",
                                            "alt-staircase", "alt-delta", "alt-dichotomy", "relations-n3"};
  return ids;
}

namespace {

template <class T>
T need(const std::optional<T>& v, const char* flag, const std::string& id) {
  if (!v) throw UsageError("claim " + id + " needs --" + std::string(flag));
  return *v;
}

Report dispatch(const ClaimRequest& rq, const CheckConfig& config) {
  const std::string& id = rq.id;
  if (id == "sp4-c0") return verify_c0_expression(need(rq.q, "q", id), config, parse_identity_mode(rq.mode));
  if (id == "sp4-fpurity") return sp4_fpurity_check(need(rq.q, "q", id), config);
  if (id == "sp4-relation") return sp4_relation(need(rq.q, "q", id), config);
  if (id == "theorem-search") return theorem_exponent_search(need(rq.n, "n", id), need(rq.q, "q", id), config);
  if (id == "alt-T") return alt_lemma_T(need(rq.n, "n", id), need(rq.p, "p", id), config);
  if (id == "alt-staircase") return alt_lemma_staircase(need(rq.n, "n", id), need(rq.p, "p", id), config);
  if (id == "alt-delta") return alt_delta_congruence(need(rq.n, "n", id), need(rq.p, "p", id), config);
  if (id == "alt-dichotomy") return alt_fregularity_dichotomy(need(rq.n, "n", id), need(rq.p, "p", id), config);
  if (id == "relations-n3") {
    const unsigned n = rq.n.value_or(3);
    const std::uint64_t q = rq.q.value_or(2);
    const unsigned i = rq.i.value_or(0);
    if (rq.mode.empty() || rq.mode == "probabilistic") return relations_probabilistic(n, q, i, config);
    if (rq.mode == "exact") return relations_exact(n, q, i, config);
    throw UsageError("relations-n3 mode must be probabilistic or exact");
  }
  throw UsageError("unknown claim '" + id + "'");
}

}  // namespace

Report run_claim(const ClaimRequest& request, const CheckConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  Report r;
  try {
    r = dispatch(request, config);
  } catch (const ResourceError& e) {
    r = Report{};
    r.claim_id = request.id;
    if (request.n) r.params.emplace_back("n", std::to_string(*request.n));
    if (request.p) r.params.emplace_back("p", std::to_string(*request.p));
    if (request.q) r.params.emplace_back("q", std::to_string(*request.q));
    if (request.i) r.params.emplace_back("i", std::to_string(*request.i));
    r.verdict = Verdict::Skipped;
    r.note = std::string("resource guard: ") + e.what();
    r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  }
  r.params.emplace_back("seed", std::to_string(config.seed));
  return r;
}

namespace {

std::optional<std::uint64_t> param_u64(const Report& r, const std::string& key) {
  const std::string v = r.param(key);
  if (v.empty() || v == "all" || v == "none") return std::nullopt;
  return std::stoull(v);
}

ClaimRequest request_from(const Report& r) {
  ClaimRequest rq;
  rq.id = r.claim_id;
  if (auto v = param_u64(r, "n")) rq.n = static_cast<unsigned>(*v);
  rq.p = param_u64(r, "p");
  rq.q = param_u64(r, "q");
  if (auto v = param_u64(r, "i")) rq.i = static_cast<unsigned>(*v);
  rq.mode = r.param("mode");
  return rq;
}

}  // namespace

bool replay(const Report& report, const CheckConfig& config, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (report.verdict == Verdict::Skipped) return fail("SKIPPED reports carry no witness");
  for (const auto& m : report.memberships) {
    if (!check_membership_witness(m, why)) return false;
  }
  const std::string& id = report.claim_id;
  if (id == "theorem-search") {
    const unsigned n = static_cast<unsigned>(std::stoul(report.param("n")));
    const std::uint64_t q = std::stoull(report.param("q"));
    const TupleProblem t = theorem_problem(n, q);
    for (const auto& tuple : report.tuples) {
      if (tuple.size() != t.bounds.size()) return fail("tuple has the wrong length");
      std::uint64_t sum = 0;
      for (std::size_t k = 0; k < tuple.size(); ++k) {
        if (tuple[k] > t.bounds[k]) return fail("tuple exceeds a bound");
        sum += tuple[k] * t.weights[k];
      }
      if (sum != t.target) return fail("tuple " + format_tuple(tuple) + " misses the target");
    }
    const bool hypothesis = q >= 4 * static_cast<std::uint64_t>(n) - 4;
    const bool verified = !hypothesis || (report.tuples.empty() && lambda_identity_check(n, q).empty());
    if (verified != (report.verdict == Verdict::Verified)) return fail("verdict does not follow from the tuples");
    return true;
  }
  if (id == "alt-T" || id == "alt-staircase" || id == "alt-delta") {
    const bool all = std::all_of(report.memberships.begin(), report.memberships.end(), [](const auto& m) { return m.member; });
    if (report.memberships.empty() || all != (report.verdict == Verdict::Verified)) return fail("verdict does not follow");
    return true;
  }
  if (id == "alt-dichotomy") {
    if (report.memberships.size() != 1) return fail("expected one membership witness");
    const bool expected = std::stoull(report.param("p")) <= std::stoull(report.param("n"));
    if ((report.memberships[0].member == expected) != (report.verdict == Verdict::Verified)) return fail("verdict does not follow");
    return true;
  }
  if (id == "sp4-fpurity") {
    const bool ok = report.memberships.size() == 2 && !report.memberships[0].member && report.memberships[1].member &&
                    report.param("closure-e") == "1";
    if (ok != (report.verdict == Verdict::Verified)) return fail("verdict does not follow");
    // The second witness must be the q-th power of the first element.
    if (ok && !(report.memberships[1].element == report.memberships[0].element.frobenius_power(1))) {
      return fail("closure witness is not for w^q");
    }
    return true;
  }
  // Identity and evaluation claims: recompute from the parameters and seed.
  CheckConfig again = config;
  again.seed = std::stoull(report.param("seed"));
  ClaimRequest rq = request_from(report);
  Report fresh;
  if (id == "sp4-c0" && report.param("candidate") != "stored") {
    const Presentation pres = sp4_presentation(*rq.q, again);
    fresh = verify_c0_expression(*rq.q, again, parse_identity_mode(rq.mode), Polynomial::parse(pres.ambient, report.param("candidate")));
  } else {
    fresh = dispatch(rq, again);
  }
  if (fresh.verdict != report.verdict) return fail("recomputed verdict differs");
  if (fresh.identities.size() != report.identities.size()) return fail("identity count differs");
  for (std::size_t k = 0; k < fresh.identities.size(); ++k) {
    if (fresh.identities[k].hash != report.identities[k].hash || fresh.identities[k].equal != report.identities[k].equal) {
      return fail("identity " + report.identities[k].label + " does not reproduce");
    }
  }
  if (fresh.evaluations.size() != report.evaluations.size()) return fail("evaluation count differs");
  for (std::size_t k = 0; k < fresh.evaluations.size(); ++k) {
    if (fresh.evaluations[k].equal != report.evaluations[k].equal || fresh.evaluations[k].point != report.evaluations[k].point) {
      return fail("evaluation " + report.evaluations[k].label + " does not reproduce");
    }
  }
  return true;
}

std::vector<ClaimRequest> suite_claims(const std::string& profile) {
  if (profile != "quick" && profile != "full") throw UsageError("suite profile must be quick or full");
  const bool full = profile == "full";
  std::vector<ClaimRequest> out;
  auto add = [&](std::string id, std::optional<unsigned> n, std::optional<std::uint64_t> p,
                 std::optional<std::uint64_t> q, std::optional<unsigned> i = std::nullopt, std::string mode = {}) {
    out.push_back(ClaimRequest{std::move(id), n, p, q, i, std::move(mode)});
  };
  add("sp4-c0", std::nullopt, std::nullopt, 2, std::nullopt, "exact");
  add("sp4-relation", std::nullopt, std::nullopt, 2);
  add("sp4-fpurity", std::nullopt, std::nullopt, 2);
  add("sp4-fpurity", std::nullopt, std::nullopt, 3);
  if (full) {
    add("sp4-c0", std::nullopt, std::nullopt, 3, std::nullopt, "auto");
    add("sp4-relation", std::nullopt, std::nullopt, 3);
  }
  for (auto [n, q] : std::vector<std::pair<unsigned, std::uint64_t>>{{2, 2}, {2, 3}, {2, 4}, {2, 5}, {2, 7}, {2, 8}, {3, 8}, {3, 9}}) {
    add("theorem-search", n, std::nullopt, q);
  }
  const std::vector<unsigned> ns = full ? std::vector<unsigned>{3, 4, 5, 6} : std::vector<unsigned>{3, 4};
  for (const char* id : {"alt-T", "alt-staircase", "alt-delta", "alt-dichotomy"}) {
    for (unsigned n : ns) {
      for (std::uint64_t p : {3, 5, 7}) add(id, n, p, std::nullopt);
    }
  }
  if (full) {
    add("relations-n3", 3, std::nullopt, 2, 1, "probabilistic");
    add("relations-n3", 3, std::nullopt, 2, 2, "probabilistic");
    add("relations-n3", 3, std::nullopt, 2, std::nullopt, "exact");
  }
  return out;
}

}  // namespace invar::fsing
