#pragma once

// Data-parallel kernels.  Every kernel has a serial reference and an OpenMP
// variant; both must produce bit-identical canonical results, which the
// kernel tests assert and bench/ compares for speed.

#include <cstdint>
#include <span>
#include <vector>

#include "invar/mpoly.hpp"

namespace invar::kernels {

// Johnson heap multiplication: the smaller operand drives a heap of cursors
// into the larger one.
Polynomial multiply_serial(const Polynomial& f, const Polynomial& g);
// Splits the smaller operand into chunks, multiplies the chunks concurrently
// and merges the partial products.
Polynomial multiply_parallel(const Polynomial& f, const Polynomial& g);
// Picks one of the two by operand size.
Polynomial multiply(const Polynomial& f, const Polynomial& g);

// One step of a product of linear factors in an outer variable T:
// coeffs holds A(T) = sum_k coeffs[k] T^k; afterwards it holds
// (T - v) A(T), i.e. new[k] = old[k-1] - v * old[k].
void linear_factor_step_serial(std::vector<Polynomial>& coeffs, const Polynomial& v);
void linear_factor_step_parallel(std::vector<Polynomial>& coeffs, const Polynomial& v);

// All (a_1, ..., a_m) with 0 <= a_i <= bounds[i] and sum a_i * weights[i]
// equal to target, in lexicographic order.  Full enumeration; the parallel
// variant splits on a_1.
std::vector<std::vector<std::uint64_t>> weighted_tuples_serial(std::span<const std::uint64_t> bounds,
                                                               std::span<const std::uint64_t> weights,
                                                               std::uint64_t target);
std::vector<std::vector<std::uint64_t>> weighted_tuples_parallel(std::span<const std::uint64_t> bounds,
                                                                 std::span<const std::uint64_t> weights,
                                                                 std::uint64_t target);

// f evaluated at each point.
std::vector<gf::FieldElement> evaluate_serial(const Polynomial& f,
                                              std::span<const std::vector<gf::FieldElement>> points);
std::vector<gf::FieldElement> evaluate_parallel(const Polynomial& f,
                                                std::span<const std::vector<gf::FieldElement>> points);

// Number of OpenMP threads available (1 without OpenMP).
int max_threads();

}  // namespace invar::kernels
