#include "padictree/field.hpp"

#include <algorithm>

#include "padictree/errors.hpp"

namespace padictree {

namespace {

std::int64_t mod_mul(std::int64_t a, std::int64_t b, std::int64_t p) {
  return static_cast<std::int64_t>(static_cast<__int128>(a) * b % p);
}

std::int64_t mod_pow(std::int64_t b, std::int64_t e, std::int64_t p) {
  std::int64_t r = 1 % p;
  b %= p;
  while (e > 0) {
    if (e & 1) r = mod_mul(r, b, p);
    b = mod_mul(b, b, p);
    e >>= 1;
  }
  return r;
}

std::int64_t mod_inv(std::int64_t a, std::int64_t p) { return mod_pow(a, p - 2, p); }

std::vector<int> prime_divisors(int n) {
  std::vector<int> out;
  for (int d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

namespace fp_poly {

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly rem(Poly a, const Poly& f, std::int64_t p) {
  trim(a);
  const std::size_t df = f.size() - 1;
  const std::int64_t lead_inv = mod_inv(f.back(), p);
  while (a.size() >= f.size()) {
    const std::int64_t c = mod_mul(a.back(), lead_inv, p);
    const std::size_t shift = a.size() - 1 - df;
    for (std::size_t i = 0; i <= df; ++i) {
      a[shift + i] = ((a[shift + i] - mod_mul(c, f[i], p)) % p + p) % p;
    }
    trim(a);
  }
  return a;
}

Poly mul_mod(const Poly& a, const Poly& b, const Poly& f, std::int64_t p) {
  if (a.empty() || b.empty()) return {};
  Poly out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      out[i + j] = (out[i + j] + mod_mul(a[i], b[j], p)) % p;
    }
  }
  return rem(std::move(out), f, p);
}

Poly gcd(Poly a, Poly b, std::int64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = rem(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

namespace {

// x^(p^k) mod f by repeated p-th powering.
Poly frobenius_power(const Poly& f, std::int64_t p, int k) {
  Poly x = rem(Poly{0, 1}, f, p);
  for (int step = 0; step < k; ++step) {
    Poly result{1};
    Poly base = x;
    std::int64_t e = p;
    while (e > 0) {
      if (e & 1) result = mul_mod(result, base, f, p);
      base = mul_mod(base, base, f, p);
      e >>= 1;
    }
    x = std::move(result);
  }
  return x;
}

Poly sub_x(Poly a, std::int64_t p) {
  if (a.size() < 2) a.resize(2, 0);
  a[1] = (a[1] - 1 + p) % p;
  trim(a);
  return a;
}

}  // namespace

bool is_irreducible(const Poly& f, std::int64_t p) {
  const int n = static_cast<int>(f.size()) - 1;
  if (n < 1) return false;
  if (n == 1) return true;
  if (!sub_x(frobenius_power(f, p, n), p).empty()) return false;
  for (int d : prime_divisors(n)) {
    Poly g = gcd(f, sub_x(frobenius_power(f, p, n / d), p), p);
    if (g.size() != 1) return false;
  }
  return true;
}

Poly smallest_irreducible(std::int64_t p, int m) {
  // Enumerate the low coefficients as a base-p counter.
  Poly f(static_cast<std::size_t>(m) + 1, 0);
  f[static_cast<std::size_t>(m)] = 1;
  if (m == 1) return f;  // t
  while (true) {
    if (f[0] != 0 && is_irreducible(f, p)) return f;
    std::size_t i = 0;
    while (i < static_cast<std::size_t>(m)) {
      if (++f[i] < p) break;
      f[i] = 0;
      ++i;
    }
    if (i == static_cast<std::size_t>(m)) break;
  }
  throw InputError("no_irreducible", "no irreducible polynomial found");
}

}  // namespace fp_poly

FieldSpec::FieldSpec(std::int64_t p, int m, int precision, std::vector<std::int64_t> poly)
    : p_(p), m_(m), q_(1), precision_(precision), poly_(std::move(poly)) {
  for (int i = 0; i < m; ++i) {
    pow_p_.push_back(q_);
    q_ *= p;
  }
}

std::shared_ptr<const FieldSpec> FieldSpec::make(std::int64_t p, int m, int precision) {
  if (!is_prime(p)) {
    throw InputError("field_not_prime", "p = " + std::to_string(p) + " is not prime");
  }
  if (m < 1 || m > kMaxResidueDegree) {
    throw InputError("field_degree", "residue degree m must lie in [1, 16]");
  }
  if (precision < 1) {
    throw InputError("field_precision", "precision must be positive");
  }
  std::int64_t q = 1;
  for (int i = 0; i < m; ++i) {
    q *= p;
    if (q > (std::int64_t{1} << 31)) {
      throw InputError("field_too_large", "q = p^m must not exceed 2^31");
    }
  }
  return std::shared_ptr<const FieldSpec>(
      new FieldSpec(p, m, precision, fp_poly::smallest_irreducible(p, m)));
}

std::int64_t FieldSpec::coordinate(Digit d, int i) const noexcept {
  return (static_cast<std::int64_t>(d) / pow_p_[static_cast<std::size_t>(i)]) % p_;
}

Digit FieldSpec::from_coordinates(const std::vector<std::int64_t>& coords) const {
  std::int64_t d = 0;
  for (int i = m_ - 1; i >= 0; --i) {
    std::int64_t c = i < static_cast<int>(coords.size()) ? coords[static_cast<std::size_t>(i)] : 0;
    d = d * p_ + ((c % p_) + p_) % p_;
  }
  return static_cast<Digit>(d);
}

Digit FieldSpec::add(Digit a, Digit b) const {
  std::vector<std::int64_t> c(static_cast<std::size_t>(m_));
  for (int i = 0; i < m_; ++i) c[static_cast<std::size_t>(i)] = coordinate(a, i) + coordinate(b, i);
  return from_coordinates(c);
}

Digit FieldSpec::sub(Digit a, Digit b) const {
  std::vector<std::int64_t> c(static_cast<std::size_t>(m_));
  for (int i = 0; i < m_; ++i) c[static_cast<std::size_t>(i)] = coordinate(a, i) - coordinate(b, i);
  return from_coordinates(c);
}

Digit FieldSpec::mul(Digit a, Digit b) const {
  fp_poly::Poly pa(static_cast<std::size_t>(m_)), pb(static_cast<std::size_t>(m_));
  for (int i = 0; i < m_; ++i) {
    pa[static_cast<std::size_t>(i)] = coordinate(a, i);
    pb[static_cast<std::size_t>(i)] = coordinate(b, i);
  }
  fp_poly::trim(pa);
  fp_poly::trim(pb);
  return from_coordinates(fp_poly::mul_mod(pa, pb, poly_, p_));
}

Digit FieldSpec::inv(Digit a) const {
  if (a == 0) throw InputError("division_by_zero", "zero has no inverse in the residue field");
  // a^(q-2) by square and multiply.
  Digit result = 1;
  Digit base = a;
  std::int64_t e = q_ - 2;
  while (e > 0) {
    if (e & 1) result = mul(result, base);
    base = mul(base, base);
    e >>= 1;
  }
  return result;
}

bool FieldSpec::operator==(const FieldSpec& other) const noexcept {
  return p_ == other.p_ && m_ == other.m_ && precision_ == other.precision_ && poly_ == other.poly_;
}

std::string FieldSpec::tag() const { return std::to_string(p_) + "^" + std::to_string(m_); }

}  // namespace padictree
