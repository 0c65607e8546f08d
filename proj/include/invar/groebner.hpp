#pragma once

// Buchberger's algorithm with the product and chain criteria, normal forms
// with division certificates, ideal membership, Frobenius powers of ideals,
// Frobenius-closure search and elimination.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "invar/mpoly.hpp"

namespace invar {

class IdealBasis {
 public:
  // Generators must be nonzero and share one ring.
  explicit IdealBasis(std::vector<Polynomial> gens);

  const RingPtr& ring() const { return gens_.front().ring(); }
  const std::vector<Polynomial>& gens() const { return gens_; }
  std::size_t size() const { return gens_.size(); }

  IdealBasis change_ring(RingPtr target) const;

 private:
  std::vector<Polynomial> gens_;
};

struct GroebnerOptions {
  std::size_t max_pairs = 1'000'000;
  // Keep every basis element written in terms of the input generators, so
  // membership certificates can be stated against those generators.
  bool track_representation = false;
};

class GroebnerBasis {
 public:
  const RingPtr& ring() const { return ring_; }
  const MonomialOrder& order() const { return ring_->order(); }
  // Reduced: monic, auto-reduced, ascending by leading monomial.
  const std::vector<Polynomial>& elements() const { return elements_; }
  const std::vector<Polynomial>& generators() const { return generators_; }
  bool has_representation() const { return tracked_; }
  // representation()[i][k] is the coefficient of generators()[k] in elements()[i].
  const std::vector<std::vector<Polynomial>>& representation() const { return representation_; }

  std::size_t pairs_considered() const { return pairs_considered_; }
  std::size_t pairs_reduced() const { return pairs_reduced_; }

  friend bool operator==(const GroebnerBasis& a, const GroebnerBasis& b) { return a.elements_ == b.elements_; }

 private:
  friend GroebnerBasis buchberger(const IdealBasis&, const GroebnerOptions&);
  RingPtr ring_;
  std::vector<Polynomial> elements_;
  std::vector<Polynomial> generators_;
  std::vector<std::vector<Polynomial>> representation_;
  std::size_t pairs_considered_ = 0;
  std::size_t pairs_reduced_ = 0;
  bool tracked_ = false;
};

struct MembershipCertificate {
  // f = sum cofactors[i] * divisors[i] + remainder.
  std::vector<Polynomial> cofactors;
  Polynomial remainder;

  bool verify(const Polynomial& f, std::span<const Polynomial> divisors) const;
};

// Multivariate division by `divisors`, always using the first divisor (in
// list order) whose leading monomial divides the current leading term.
MembershipCertificate divide(const Polynomial& f, std::span<const Polynomial> divisors);

MembershipCertificate normal_form(const Polynomial& f, const GroebnerBasis& basis);

Polynomial s_polynomial(const Polynomial& f, const Polynomial& g);

// Uses the ring order of the generators.
GroebnerBasis buchberger(const IdealBasis& basis, const GroebnerOptions& options = {});
// Re-expresses the generators under `order` first.
GroebnerBasis buchberger(const IdealBasis& basis, const MonomialOrder& order, const GroebnerOptions& options = {});

// Every S-polynomial of the list reduces to zero modulo the list.
bool is_groebner_basis(std::span<const Polynomial> elements);

struct MembershipResult {
  bool member = false;
  MembershipCertificate certificate;  // against the Groebner basis elements
  // Against the input generators; filled when the basis tracked its
  // representation (always, for the overload taking an IdealBasis).
  std::vector<Polynomial> generator_cofactors;
};

MembershipResult ideal_member(const Polynomial& f, const IdealBasis& basis, GroebnerOptions options = {});
MembershipResult ideal_member(const Polynomial& f, const GroebnerBasis& basis);

// Generator-wise q-th powers; q must be a power of the characteristic.
IdealBasis frobenius_power_ideal(const IdealBasis& basis, std::uint64_t q);

struct ClosureResult {
  std::optional<unsigned> exponent;   // least e with f^(p^e) in I^[p^e] + relations
  unsigned searched_up_to = 0;
  Polynomial power;                    // f^(p^e) for the reported e
  std::vector<Polynomial> divisors;    // Frobenius-powered generators, then relations
  std::vector<Polynomial> cofactors;   // aligned with divisors
};

// Tests e = 0, 1, ..., e_max.  The relations describe the ambient quotient
// ring and are not Frobenius-powered; pass none to work in the polynomial
// ring itself.
ClosureResult frobenius_closure_search(const Polynomial& f, const IdealBasis& ideal,
                                       std::span<const Polynomial> relations, unsigned e_max,
                                       const GroebnerOptions& options = {});

// Generators of the ideal intersected with the subring on variables k..n-1,
// returned in a ring over just those variables (grevlex).  Uses a block
// elimination order unless the ring is already lex.
std::vector<Polynomial> eliminate(const IdealBasis& basis, std::size_t k, const GroebnerOptions& options = {});

}  // namespace invar
