#include "invar/gf.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <sstream>

#include "invar/error.hpp"

namespace invar::gf {

namespace {

using u128 = unsigned __int128;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % p);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t k, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  a %= p;
  while (k) {
    if (k & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    k >>= 1;
  }
  return r;
}

std::uint64_t invmod(std::uint64_t a, std::uint64_t p) {
  if (a % p == 0) throw ArithmeticError("division by zero in GF(" + std::to_string(p) + ")");
  return powmod(a, p - 2, p);
}

// Returns p^e, or 0 when it reaches kMaxFieldOrder.
std::uint64_t checked_power(std::uint64_t p, unsigned e) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < e; ++i) {
    if (r > kMaxFieldOrder / p) return 0;
    r *= p;
  }
  return r >= kMaxFieldOrder ? 0 : r;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t small : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % small == 0) return n == small;
  }
  // Deterministic Miller-Rabin for 64-bit inputs.
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t f = 2; f * f <= n; ++f) {
    if (n % f == 0) {
      out.push_back(f);
      while (n % f == 0) n /= f;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

// ---------------------------------------------------------------------------
// Univariate helpers over GF(p)

namespace upoly {

void trim(UPoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

int degree(const UPoly& f) {
  for (std::size_t i = f.size(); i-- > 0;) {
    if (f[i] != 0) return static_cast<int>(i);
  }
  return -1;
}

UPoly sub(const UPoly& a, const UPoly& b, std::uint64_t p) {
  UPoly r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i) {
    std::uint64_t x = i < a.size() ? a[i] : 0;
    std::uint64_t y = i < b.size() ? b[i] : 0;
    r[i] = (x + p - y) % p;
  }
  trim(r);
  return r;
}

UPoly rem(UPoly a, const UPoly& mod, std::uint64_t p) {
  trim(a);
  const int dm = degree(mod);
  if (dm < 0) throw ArithmeticError("polynomial remainder by zero");
  const std::uint64_t lead_inv = invmod(mod[dm], p);
  for (int i = degree(a); i >= dm; --i) {
    const std::uint64_t c = mulmod(a[i], lead_inv, p);
    if (c == 0) continue;
    for (int j = 0; j <= dm; ++j) {
      a[i - dm + j] = (a[i - dm + j] + p - mulmod(c, mod[j], p)) % p;
    }
  }
  trim(a);
  return a;
}

UPoly mul_mod(const UPoly& a, const UPoly& b, const UPoly& mod, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  UPoly prod(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      prod[i + j] = (prod[i + j] + mulmod(a[i], b[j], p)) % p;
    }
  }
  return rem(std::move(prod), mod, p);
}

UPoly gcd(UPoly a, UPoly b, std::uint64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    UPoly r = rem(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    const std::uint64_t inv = invmod(a.back(), p);
    for (auto& c : a) c = mulmod(c, inv, p);
  }
  return a;
}

UPoly x_pow_p_power(const UPoly& f, std::uint64_t p, unsigned k) {
  UPoly r = rem(UPoly{0, 1}, f, p);
  for (unsigned step = 0; step < k; ++step) {
    UPoly base = r;
    UPoly acc{1};
    std::uint64_t e = p;
    while (e) {
      if (e & 1) acc = mul_mod(acc, base, f, p);
      e >>= 1;
      if (e) base = mul_mod(base, base, f, p);
    }
    r = std::move(acc);
  }
  return r;
}

std::string to_string(const UPoly& f, char symbol) {
  std::ostringstream os;
  bool first = true;
  for (int i = degree(f); i >= 0; --i) {
    if (f[i] == 0) continue;
    if (!first) os << " + ";
    first = false;
    if (i == 0) {
      os << f[i];
      continue;
    }
    if (f[i] != 1) os << f[i] << '*';
    os << symbol;
    if (i > 1) os << '^' << i;
  }
  if (first) os << '0';
  return os.str();
}

}  // namespace upoly

bool is_irreducible(const UPoly& f_in, std::uint64_t p) {
  UPoly f = f_in;
  upoly::trim(f);
  const int e = upoly::degree(f);
  if (e < 1 || f.back() != 1) throw UsageError("irreducibility test needs a monic polynomial of degree >= 1");
  if (e == 1) return true;
  const UPoly x{0, 1};
  if (upoly::sub(upoly::x_pow_p_power(f, p, e), x, p) != UPoly{}) return false;
  for (std::uint64_t l : prime_factors(static_cast<std::uint64_t>(e))) {
    const UPoly h = upoly::sub(upoly::x_pow_p_power(f, p, e / static_cast<unsigned>(l)), x, p);
    if (upoly::degree(upoly::gcd(h, f, p)) != 0) return false;
  }
  return true;
}

UPoly find_irreducible(std::uint64_t p, unsigned e) {
  if (!is_prime(p)) throw UsageError("field characteristic " + std::to_string(p) + " is not prime");
  if (e == 0) throw UsageError("extension degree must be at least 1");
  if (e == 1) return UPoly{0, 1};
  // Odometer over (c_0, ..., c_{e-1}) with c_0 most significant.
  std::vector<std::uint64_t> c(e, 0);
  c[0] = 1;  // c_0 = 0 means X divides the candidate
  while (true) {
    UPoly f(c.begin(), c.end());
    f.push_back(1);
    if (is_irreducible(f, p)) return f;
    int i = static_cast<int>(e) - 1;
    while (i >= 0 && ++c[i] == p) {
      c[i] = 0;
      --i;
    }
    if (i < 0) break;
  }
  throw Error("no irreducible polynomial found (unreachable)");
}

// ---------------------------------------------------------------------------
// Field

struct Field::Impl {
  std::uint64_t p = 2;
  unsigned e = 1;
  std::uint64_t q = 2;
  UPoly modulus;                    // monic, degree e
  std::vector<std::uint64_t> ppow;  // p^0 .. p^(e-1)
  u128 mask2 = 0;                   // modulus as a bit mask when p == 2
};

Field Field::with_modulus(std::uint64_t p, UPoly modulus) {
  if (!is_prime(p)) throw UsageError("field characteristic " + std::to_string(p) + " is not prime");
  upoly::trim(modulus);
  const int e = upoly::degree(modulus);
  if (e < 1) throw UsageError("field modulus must have degree >= 1");
  for (auto c : modulus) {
    if (c >= p) throw UsageError("modulus coefficient out of range");
  }
  if (modulus.back() != 1) throw UsageError("field modulus must be monic");
  auto impl = std::make_shared<Impl>();
  impl->p = p;
  impl->e = static_cast<unsigned>(e);
  impl->q = checked_power(p, impl->e);
  if (impl->q == 0) throw ResourceError("field order " + std::to_string(p) + "^" + std::to_string(e) + " exceeds 2^62");
  if (e == 1) {
    impl->modulus = UPoly{0, 1};
  } else {
    if (!is_irreducible(modulus, p)) throw UsageError("field modulus " + upoly::to_string(modulus, 'g') + " is reducible");
    impl->modulus = std::move(modulus);
  }
  impl->ppow.resize(impl->e);
  std::uint64_t acc = 1;
  for (unsigned i = 0; i < impl->e; ++i) {
    impl->ppow[i] = acc;
    acc *= p;
  }
  if (p == 2) {
    for (unsigned i = 0; i <= impl->e; ++i) {
      if (impl->modulus[i]) impl->mask2 |= u128{1} << i;
    }
  }
  return Field(std::move(impl));
}

Field Field::make(std::uint64_t p, unsigned e) {
  if (e == 0) throw UsageError("extension degree must be at least 1");
  if (!is_prime(p)) throw UsageError("field characteristic " + std::to_string(p) + " is not prime");
  if (checked_power(p, e) == 0) throw ResourceError("field order " + std::to_string(p) + "^" + std::to_string(e) + " exceeds 2^62");
  return with_modulus(p, find_irreducible(p, e));
}

Field Field::of_order(std::uint64_t q) {
  if (q < 2) throw UsageError("field order must be a prime power");
  auto factors = prime_factors(q);
  if (factors.size() != 1) throw UsageError(std::to_string(q) + " is not a prime power");
  unsigned e = 0;
  for (std::uint64_t r = q; r > 1; r /= factors[0]) ++e;
  return make(factors[0], e);
}

std::uint64_t Field::characteristic() const { return impl_->p; }
unsigned Field::degree() const { return impl_->e; }
std::uint64_t Field::order() const { return impl_->q; }
const UPoly& Field::modulus() const { return impl_->modulus; }

Elem Field::from_int(std::int64_t v) const {
  const auto p = static_cast<std::int64_t>(impl_->p);
  std::int64_t r = v % p;
  if (r < 0) r += p;
  return static_cast<Elem>(r);
}

Elem Field::generator_power(unsigned k) const {
  if (is_prime_field()) return k == 0 ? 1 : 0;  // g is the root of X
  Elem g = impl_->p;  // packed digits (0, 1, 0, ...)
  return pow(g, k);
}

std::vector<std::uint64_t> Field::digits(Elem a) const {
  std::vector<std::uint64_t> d(impl_->e);
  for (unsigned i = 0; i < impl_->e; ++i) {
    d[i] = a % impl_->p;
    a /= impl_->p;
  }
  return d;
}

Elem Field::pack(std::span<const std::uint64_t> d) const {
  Elem a = 0;
  for (std::size_t i = std::min<std::size_t>(d.size(), impl_->e); i-- > 0;) {
    a = a * impl_->p + d[i] % impl_->p;
  }
  return a;
}

Elem Field::add(Elem a, Elem b) const {
  const auto& m = *impl_;
  if (m.e == 1) {
    Elem s = a + b;
    return s >= m.p ? s - m.p : s;
  }
  if (m.p == 2) return a ^ b;
  Elem r = 0;
  for (unsigned i = m.e; i-- > 0;) {
    Elem da = a / m.ppow[i], db = b / m.ppow[i];
    a -= da * m.ppow[i];
    b -= db * m.ppow[i];
    Elem s = da + db;
    if (s >= m.p) s -= m.p;
    r += s * m.ppow[i];
  }
  return r;
}

Elem Field::neg(Elem a) const {
  const auto& m = *impl_;
  if (a == 0) return 0;
  if (m.e == 1) return m.p - a;
  if (m.p == 2) return a;
  Elem r = 0;
  for (unsigned i = m.e; i-- > 0;) {
    Elem da = a / m.ppow[i];
    a -= da * m.ppow[i];
    r += (da == 0 ? 0 : m.p - da) * m.ppow[i];
  }
  return r;
}

Elem Field::sub(Elem a, Elem b) const {
  if (impl_->e == 1) return a >= b ? a - b : a + impl_->p - b;
  return add(a, neg(b));
}

Elem Field::mul(Elem a, Elem b) const {
  const auto& m = *impl_;
  if (m.e == 1) return mulmod(a, b, m.p);
  if (a == 0 || b == 0) return 0;
  if (m.p == 2) {
    u128 prod = 0;
    u128 aa = a;
    for (Elem bb = b; bb; bb >>= 1) {
      if (bb & 1) prod ^= aa;
      aa <<= 1;
    }
    for (int i = 2 * static_cast<int>(m.e) - 2; i >= static_cast<int>(m.e); --i) {
      if ((prod >> i) & 1) prod ^= m.mask2 << (i - m.e);
    }
    return static_cast<Elem>(prod);
  }
  // p < 2^31 here because p^e < 2^62 with e >= 2, so digit products fit.
  std::uint64_t da[64], db[64], prod[128] = {};
  const unsigned e = m.e;
  for (unsigned i = 0; i < e; ++i) {
    da[i] = a % m.p;
    a /= m.p;
    db[i] = b % m.p;
    b /= m.p;
  }
  for (unsigned i = 0; i < e; ++i) {
    if (da[i] == 0) continue;
    for (unsigned j = 0; j < e; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % m.p;
  }
  for (int i = 2 * static_cast<int>(e) - 2; i >= static_cast<int>(e); --i) {
    const std::uint64_t c = prod[i];
    if (c == 0) continue;
    for (unsigned j = 0; j <= e; ++j) {
      const std::uint64_t t = c * m.modulus[j] % m.p;
      prod[i - e + j] = (prod[i - e + j] + m.p - t) % m.p;
    }
  }
  Elem r = 0;
  for (unsigned i = e; i-- > 0;) r = r * m.p + prod[i];
  return r;
}

Elem Field::pow(Elem a, std::uint64_t k) const {
  Elem r = 1;
  while (k) {
    if (k & 1) r = mul(r, a);
    k >>= 1;
    if (k) a = mul(a, a);
  }
  return r;
}

Elem Field::inv(Elem a) const {
  if (a == 0) throw ArithmeticError("division by zero in GF(" + std::to_string(order()) + ")");
  if (impl_->e == 1) return invmod(a, impl_->p);
  return pow(a, impl_->q - 2);
}

Elem Field::div(Elem a, Elem b) const { return mul(a, inv(b)); }

std::string Field::format(Elem a) const {
  if (is_prime_field()) return std::to_string(a);
  UPoly d = digits(a);
  return upoly::to_string(d, 'g');
}

namespace {

struct Cursor {
  std::string_view s;
  std::size_t pos = 0;
  void skip() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eat(char c) {
    skip();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  bool at_end() {
    skip();
    return pos >= s.size();
  }
  bool peek_digit() {
    skip();
    return pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]));
  }
  std::uint64_t number() {
    skip();
    if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos]))) throw ParseError("expected a number", pos);
    std::uint64_t v = 0;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      const std::uint64_t digit = static_cast<std::uint64_t>(s[pos] - '0');
      if (v > (std::numeric_limits<std::uint64_t>::max() - digit) / 10) throw ParseError("number too large", pos);
      v = v * 10 + digit;
      ++pos;
    }
    return v;
  }
};

// Parses sum of c*g^k terms into digits over GF(p).
UPoly parse_g_poly(std::string_view text, std::uint64_t p, unsigned max_degree, std::size_t base_offset) {
  Cursor c{text};
  UPoly out(max_degree + 1, 0);
  bool negate = c.eat('-');
  bool any = false;
  while (true) {
    std::uint64_t coeff = 1;
    unsigned k = 0;
    bool have_coeff = false;
    if (c.peek_digit()) {
      coeff = c.number();
      if (coeff >= p) throw ParseError("coefficient " + std::to_string(coeff) + " out of field", base_offset + c.pos);
      have_coeff = true;
      if (c.eat('*')) have_coeff = false;
    }
    if (!have_coeff) {
      if (!c.eat('g')) throw ParseError("expected generator symbol g", base_offset + c.pos);
      k = 1;
      if (c.eat('^')) {
        const auto kk = c.number();
        if (kk > max_degree) throw ParseError("generator power exceeds field degree", base_offset + c.pos);
        k = static_cast<unsigned>(kk);
      }
    }
    if (k > max_degree) throw ParseError("generator power exceeds field degree", base_offset + c.pos);
    coeff %= p;
    out[k] = (out[k] + (negate ? p - coeff : coeff)) % p;
    any = true;
    if (c.eat('+')) {
      negate = false;
    } else if (c.eat('-')) {
      negate = true;
    } else {
      break;
    }
  }
  if (!any || !c.at_end()) throw ParseError("malformed field element", base_offset + c.pos);
  return out;
}

}  // namespace

Elem Field::parse(std::string_view text) const {
  if (is_prime_field()) {
    Cursor c{text};
    bool negate = c.eat('-');
    const std::uint64_t v = c.number();
    if (!c.at_end()) throw ParseError("malformed field element", c.pos);
    if (v >= impl_->p) throw ParseError("coefficient " + std::to_string(v) + " out of field", 0);
    return negate ? neg(v) : v;
  }
  UPoly d = parse_g_poly(text, impl_->p, impl_->e, 0);
  // Reduce a possible g^e term through the modulus.
  UPoly r = upoly::rem(d, impl_->modulus, impl_->p);
  r.resize(impl_->e, 0);
  return pack(r);
}

std::string Field::spec_string() const {
  std::string s = std::to_string(impl_->p) + "^" + std::to_string(impl_->e);
  if (impl_->e > 1) s += " " + upoly::to_string(impl_->modulus, 'g');
  return s;
}

Field Field::parse_spec(std::string_view text) {
  Cursor c{text};
  const std::uint64_t p = c.number();
  unsigned e = 1;
  if (c.eat('^')) e = static_cast<unsigned>(c.number());
  if (!is_prime(p)) throw ParseError("field characteristic " + std::to_string(p) + " is not prime", 0);
  if (e == 0) throw ParseError("extension degree must be at least 1", c.pos);
  if (c.at_end()) return make(p, e);
  UPoly mod = parse_g_poly(text.substr(c.pos), p, e, c.pos);
  upoly::trim(mod);
  if (upoly::degree(mod) != static_cast<int>(e)) throw ParseError("modulus degree does not match extension degree", c.pos);
  return with_modulus(p, std::move(mod));
}

bool operator==(const Field& a, const Field& b) {
  if (a.impl_ == b.impl_) return true;
  return a.impl_->p == b.impl_->p && a.impl_->e == b.impl_->e && a.impl_->modulus == b.impl_->modulus;
}

// ---------------------------------------------------------------------------
// FieldElement

FieldElement::FieldElement(Field field, Elem value) : field_(std::move(field)), value_(value) {
  if (!field_.contains(value_)) throw UsageError("packed value outside the field");
}

void FieldElement::check_same(const FieldElement& o) const {
  if (!(field_ == o.field_)) throw UsageError("field mismatch: " + field_.spec_string() + " vs " + o.field_.spec_string());
}

FieldElement FieldElement::operator+(const FieldElement& o) const {
  check_same(o);
  return {field_, field_.add(value_, o.value_)};
}
FieldElement FieldElement::operator-(const FieldElement& o) const {
  check_same(o);
  return {field_, field_.sub(value_, o.value_)};
}
FieldElement FieldElement::operator*(const FieldElement& o) const {
  check_same(o);
  return {field_, field_.mul(value_, o.value_)};
}
FieldElement FieldElement::operator/(const FieldElement& o) const {
  check_same(o);
  return {field_, field_.div(value_, o.value_)};
}
FieldElement FieldElement::operator-() const { return {field_, field_.neg(value_)}; }
FieldElement FieldElement::inv() const { return {field_, field_.inv(value_)}; }
FieldElement FieldElement::pow(std::uint64_t k) const { return {field_, field_.pow(value_, k)}; }
FieldElement FieldElement::frobenius() const { return {field_, field_.frobenius(value_)}; }

std::vector<FieldElement> enumerate_elements(const Field& field, std::uint64_t cap) {
  if (field.order() > cap) {
    throw ResourceError("enumerating GF(" + std::to_string(field.order()) + ") exceeds the cap of " + std::to_string(cap));
  }
  std::vector<FieldElement> out;
  out.reserve(field.order());
  for (Elem a = 0; a < field.order(); ++a) out.emplace_back(field, a);
  return out;
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  if (bound == 0) throw UsageError("uniform_below needs a positive bound");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

FieldElement random_element(const Field& field, std::mt19937_64& rng) {
  return {field, uniform_below(rng, field.order())};
}

}  // namespace invar::gf
