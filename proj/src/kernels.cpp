#include "invar/kernels.hpp"

#include <algorithm>
#include <exception>
#include <optional>

#include "invar/error.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace invar::kernels {

namespace {

// Below this many term products the parallel split is not worth it.
constexpr std::uint64_t kParallelWorkThreshold = 1u << 22;

void rethrow_first(const std::vector<std::exception_ptr>& errors) {
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

void check_exponent_room(const Polynomial& f, const Polynomial& g) {
  const auto mf = f.max_exponents();
  const auto mg = g.max_exponents();
  const auto cap = f.ring()->limits().max_exponent;
  for (std::size_t v = 0; v < mf.size(); ++v) {
    if (static_cast<std::uint64_t>(mf[v]) + mg[v] > cap) {
      throw ResourceError("product exponent in '" + f.ring()->names()[v] + "' exceeds the configured cap");
    }
  }
}

Polynomial slice(const Polynomial& f, std::size_t lo, std::size_t hi) {
  PolyBuilder b(f.ring(), hi - lo);
  for (std::size_t i = lo; i < hi; ++i) b.push(f.record(i), f.coeff(i));
  return std::move(b).finish();
}

// Heap product with `a` driving the heap (a.size() small is best).
Polynomial heap_product(const Polynomial& a, const Polynomial& b) {
  const Ring& ring = *a.ring();
  const auto& field = ring.field();
  const std::size_t stride = ring.stride();
  const std::size_t m = a.size(), n = b.size();
  PolyBuilder out(a.ring(), std::max(m, n));

  std::vector<Exp> buf(m * stride);
  std::vector<std::size_t> cursor(m, 0);
  auto load = [&](std::size_t i) {
    const Exp* x = a.record(i);
    const Exp* y = b.record(cursor[i]);
    Exp* r = &buf[i * stride];
    for (std::size_t k = 0; k < stride; ++k) r[k] = x[k] + y[k];
  };
  auto less = [&](std::size_t x, std::size_t y) { return ring.compare(&buf[x * stride], &buf[y * stride]) < 0; };

  std::vector<std::size_t> heap;
  heap.reserve(m);
  std::vector<std::size_t> popped;
  std::vector<Exp> current(stride);
  load(0);
  heap.push_back(0);
  while (!heap.empty()) {
    std::copy_n(&buf[heap.front() * stride], stride, current.begin());
    Elem acc = 0;
    popped.clear();
    while (!heap.empty() && ring.compare(&buf[heap.front() * stride], current.data()) == 0) {
      std::pop_heap(heap.begin(), heap.end(), less);
      const std::size_t i = heap.back();
      heap.pop_back();
      acc = field.add(acc, field.mul(a.coeff(i), b.coeff(cursor[i])));
      popped.push_back(i);
    }
    if (acc != 0) out.push(current.data(), acc);
    for (std::size_t i : popped) {
      // Row i+1 can only lead once row i has released its first product.
      if (cursor[i] == 0 && i + 1 < m) {
        load(i + 1);
        heap.push_back(i + 1);
        std::push_heap(heap.begin(), heap.end(), less);
      }
      if (++cursor[i] < n) {
        load(i);
        heap.push_back(i);
        std::push_heap(heap.begin(), heap.end(), less);
      }
    }
  }
  return std::move(out).finish();
}

}  // namespace

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

Polynomial multiply_serial(const Polynomial& f, const Polynomial& g) {
  require_same_context(*f.ring(), *g.ring());
  if (f.is_zero() || g.is_zero()) return Polynomial(f.ring());
  check_exponent_room(f, g);
  const Polynomial& a = f.size() <= g.size() ? f : g;
  const Polynomial& b = f.size() <= g.size() ? g : f;
  if (a.size() == 1) return b.mul_term(a.monomial(0), a.coeff(0));
  return heap_product(a, b);
}

Polynomial multiply_parallel(const Polynomial& f, const Polynomial& g) {
  require_same_context(*f.ring(), *g.ring());
  if (f.is_zero() || g.is_zero()) return Polynomial(f.ring());
  check_exponent_room(f, g);
  const Polynomial& a = f.size() <= g.size() ? f : g;
  const Polynomial& b = f.size() <= g.size() ? g : f;
  if (a.size() == 1) return b.mul_term(a.monomial(0), a.coeff(0));

  const std::size_t chunks = std::min<std::size_t>(a.size(), std::max(2, 2 * max_threads()));
  std::vector<Polynomial> partial(chunks, Polynomial(a.ring()));
  std::vector<std::exception_ptr> errors(chunks);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t c = 0; c < chunks; ++c) {
    try {
      const std::size_t lo = a.size() * c / chunks, hi = a.size() * (c + 1) / chunks;
      partial[c] = heap_product(slice(a, lo, hi), b);
    } catch (...) {
      errors[c] = std::current_exception();
    }
  }
  rethrow_first(errors);
  // Pairwise merge tree; addition is exact so the result is canonical.
  while (partial.size() > 1) {
    const std::size_t half = (partial.size() + 1) / 2;
    std::vector<Polynomial> next(half, Polynomial(a.ring()));
#pragma omp parallel for schedule(dynamic)
    for (std::size_t k = 0; k < half; ++k) {
      next[k] = 2 * k + 1 < partial.size() ? partial[2 * k] + partial[2 * k + 1] : partial[2 * k];
    }
    partial = std::move(next);
  }
  return partial.front();
}

Polynomial multiply(const Polynomial& f, const Polynomial& g) {
  const std::uint64_t work = static_cast<std::uint64_t>(f.size()) * g.size();
  if (max_threads() > 1 && work >= kParallelWorkThreshold && std::min(f.size(), g.size()) >= 8) {
    return multiply_parallel(f, g);
  }
  return multiply_serial(f, g);
}

// ---------------------------------------------------------------------------

namespace {

Polynomial factor_step_entry(const std::vector<Polynomial>& old, const Polynomial& v, std::size_t k) {
  const std::size_t K = old.size();
  if (k == 0) return -multiply_serial(v, old[0]);
  if (k == K) return old[K - 1];
  return old[k - 1] - multiply_serial(v, old[k]);
}

}  // namespace

void linear_factor_step_serial(std::vector<Polynomial>& coeffs, const Polynomial& v) {
  if (coeffs.empty()) throw UsageError("linear factor step needs a nonempty coefficient list");
  std::vector<Polynomial> next;
  next.reserve(coeffs.size() + 1);
  for (std::size_t k = 0; k <= coeffs.size(); ++k) next.push_back(factor_step_entry(coeffs, v, k));
  coeffs = std::move(next);
}

void linear_factor_step_parallel(std::vector<Polynomial>& coeffs, const Polynomial& v) {
  if (coeffs.empty()) throw UsageError("linear factor step needs a nonempty coefficient list");
  const std::size_t count = coeffs.size() + 1;
  std::vector<Polynomial> next(count, Polynomial(coeffs.front().ring()));
  std::vector<std::exception_ptr> errors(count);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t k = 0; k < count; ++k) {
    try {
      next[k] = factor_step_entry(coeffs, v, k);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  rethrow_first(errors);
  coeffs = std::move(next);
}

// ---------------------------------------------------------------------------

namespace {

void check_tuple_args(std::span<const std::uint64_t> bounds, std::span<const std::uint64_t> weights) {
  if (bounds.size() != weights.size()) throw UsageError("bounds and weights differ in length");
  if (bounds.empty()) throw UsageError("tuple search needs at least one coordinate");
}

// Enumerates coordinates [from, m) with prefix sum `base`, appending matches.
void enumerate_suffix(std::span<const std::uint64_t> bounds, std::span<const std::uint64_t> weights,
                      std::uint64_t target, std::vector<std::uint64_t> tuple, std::size_t from, std::uint64_t base,
                      std::vector<std::vector<std::uint64_t>>& out) {
  const std::size_t m = bounds.size();
  for (std::size_t i = from; i < m; ++i) tuple[i] = 0;
  while (true) {
    unsigned __int128 sum = base;
    for (std::size_t i = from; i < m; ++i) sum += static_cast<unsigned __int128>(tuple[i]) * weights[i];
    if (sum == target) out.push_back(tuple);
    bool advanced = false;
    for (std::size_t i = m; i > from;) {
      --i;
      if (tuple[i] < bounds[i]) {
        ++tuple[i];
        advanced = true;
        break;
      }
      tuple[i] = 0;
    }
    if (!advanced) return;
  }
}

}  // namespace

std::vector<std::vector<std::uint64_t>> weighted_tuples_serial(std::span<const std::uint64_t> bounds,
                                                               std::span<const std::uint64_t> weights,
                                                               std::uint64_t target) {
  check_tuple_args(bounds, weights);
  std::vector<std::vector<std::uint64_t>> out;
  enumerate_suffix(bounds, weights, target, std::vector<std::uint64_t>(bounds.size(), 0), 0, 0, out);
  return out;
}

std::vector<std::vector<std::uint64_t>> weighted_tuples_parallel(std::span<const std::uint64_t> bounds,
                                                                 std::span<const std::uint64_t> weights,
                                                                 std::uint64_t target) {
  check_tuple_args(bounds, weights);
  const std::uint64_t first_count = bounds[0] + 1;
  std::vector<std::vector<std::vector<std::uint64_t>>> per_first(first_count);
#pragma omp parallel for schedule(dynamic)
  for (std::uint64_t a1 = 0; a1 < first_count; ++a1) {
    std::vector<std::uint64_t> tuple(bounds.size(), 0);
    tuple[0] = a1;
    const std::uint64_t base = a1 * weights[0];
    if (bounds.size() == 1) {
      if (base == target) per_first[a1].push_back(tuple);
    } else {
      enumerate_suffix(bounds, weights, target, tuple, 1, base, per_first[a1]);
    }
  }
  std::vector<std::vector<std::uint64_t>> out;
  for (auto& bucket : per_first) {
    for (auto& t : bucket) out.push_back(std::move(t));
  }
  return out;
}

// ---------------------------------------------------------------------------

std::vector<gf::FieldElement> evaluate_serial(const Polynomial& f,
                                              std::span<const std::vector<gf::FieldElement>> points) {
  std::vector<gf::FieldElement> out;
  out.reserve(points.size());
  for (const auto& pt : points) out.push_back(f.evaluate(pt));
  return out;
}

std::vector<gf::FieldElement> evaluate_parallel(const Polynomial& f,
                                                std::span<const std::vector<gf::FieldElement>> points) {
  std::vector<std::optional<gf::FieldElement>> values(points.size());
  std::vector<std::exception_ptr> errors(points.size());
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < points.size(); ++i) {
    try {
      values[i] = f.evaluate(points[i]);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  rethrow_first(errors);
  std::vector<gf::FieldElement> out;
  out.reserve(points.size());
  for (auto& v : values) out.push_back(*v);
  return out;
}

}  // namespace invar::kernels
