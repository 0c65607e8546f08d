#pragma once

#include <random>
#include <vector>

#include "invar/mpoly.hpp"

namespace testing_helpers {

// Up to `terms` random terms with exponents in [0, max_exp].
inline invar::Polynomial random_poly(const invar::RingPtr& ring, std::mt19937_64& rng, std::size_t terms,
                                     invar::Exp max_exp) {
  std::vector<std::pair<invar::Monomial, invar::Elem>> t;
  const std::uint64_t q = ring->field().order();
  for (std::size_t k = 0; k < terms; ++k) {
    std::vector<invar::Exp> e(ring->nvars());
    for (auto& x : e) x = static_cast<invar::Exp>(rng() % (max_exp + 1));
    t.emplace_back(invar::Monomial(std::move(e)), rng() % q);
  }
  return invar::Polynomial::from_terms(ring, std::move(t));
}

// Random homogeneous polynomial of degree d.
inline invar::Polynomial random_homogeneous(const invar::RingPtr& ring, std::mt19937_64& rng, std::size_t terms,
                                            unsigned d) {
  std::vector<std::pair<invar::Monomial, invar::Elem>> t;
  const std::size_t n = ring->nvars();
  for (std::size_t k = 0; k < terms; ++k) {
    std::vector<invar::Exp> e(n, 0);
    for (unsigned j = 0; j < d; ++j) ++e[rng() % n];
    t.emplace_back(invar::Monomial(std::move(e)), 1 + rng() % (ring->field().order() - 1));
  }
  return invar::Polynomial::from_terms(ring, std::move(t));
}

inline invar::Polynomial X(const invar::RingPtr& ring, std::size_t i) { return invar::Polynomial::variable(ring, i); }

}  // namespace testing_helpers
