#pragma once

// Test-only reference computations, written without the library's Groebner
// engine, kernels or invariant constructors.

#include <cstdint>
#include <optional>
#include <vector>

#include "invar/mpoly.hpp"

namespace oracle {

using invar::Polynomial;
using invar::RingPtr;

// All monomials of total degree d in n variables.
std::vector<invar::Monomial> monomials_of_degree(std::size_t n, unsigned d);

// Membership of a homogeneous f in the ideal of homogeneous generators by
// Gaussian elimination on the degree-deg(f) slice.  When f is a member and
// `cofactors` is given, fills f = sum cofactors[k] * gens[k].
bool homogeneous_member(const Polynomial& f, const std::vector<Polynomial>& gens,
                        std::vector<Polynomial>* cofactors = nullptr);

// Dickson invariants from F_0 = T, F_k(T) = F_(k-1)(T)^q - F_(k-1)(X_k)^(q-1) F_(k-1)(T),
// computed in the ring with T adjoined.  The ring's field must be GF(q).
std::vector<Polynomial> dickson_by_recursion(const RingPtr& ring, std::uint64_t q);

// Every tuple in the box 0 <= a_i <= bounds[i] with sum a_i w_i = target,
// found by plain recursion without pruning.
std::vector<std::vector<std::uint64_t>> box_tuples(const std::vector<std::uint64_t>& bounds,
                                                   const std::vector<std::uint64_t>& weights, std::uint64_t target);

}  // namespace oracle
