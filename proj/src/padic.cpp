#include "padictree/padic.hpp"

#include <algorithm>
#include <string>

#include "padictree/errors.hpp"

namespace padictree {

namespace {

// value = p^scale * sum_i c[i] t^i
struct Coords {
  std::int64_t scale = 0;
  std::vector<BigInt> c;
};

BigInt pow_big(std::int64_t p, std::int64_t e) {
  BigInt r = 1;
  BigInt b = p;
  while (e > 0) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

BigInt mod_nonneg(const BigInt& a, const BigInt& m) {
  BigInt r = a % m;
  if (r < 0) r += m;
  return r;
}

// Exponent of p in a nonzero integer.
std::int64_t p_valuation(BigInt a, std::int64_t p) {
  std::int64_t v = 0;
  const BigInt bp = p;
  while (a % bp == 0) {
    a /= bp;
    ++v;
  }
  return v;
}

// Number of base-p digits of |a|.
std::int64_t digit_length(BigInt a, std::int64_t p) {
  if (a < 0) a = -a;
  std::int64_t n = 0;
  while (a != 0) {
    a /= p;
    ++n;
  }
  return n;
}

Coords to_coords(const PadicNumber& x, std::int64_t scale) {
  const FieldSpec& f = *x.field();
  const int m = f.m();
  Coords out;
  out.scale = scale;
  out.c.assign(static_cast<std::size_t>(m), 0);
  const auto& ds = x.digits();
  for (std::size_t k = ds.size(); k-- > 0;) {
    for (int i = 0; i < m; ++i) {
      auto& ci = out.c[static_cast<std::size_t>(i)];
      ci *= f.p();
      ci += f.coordinate(ds[k], i);
    }
  }
  const BigInt shift = pow_big(f.p(), x.v0() - scale);
  for (auto& ci : out.c) ci *= shift;
  if (x.tail() != 0) {
    // sum_{k >= L} (p - 1) p^k = -p^L
    const BigInt top = pow_big(f.p(), x.v0() + static_cast<std::int64_t>(ds.size()) - scale);
    for (int i = 0; i < m; ++i) {
      if (f.coordinate(x.tail(), i) != 0) out.c[static_cast<std::size_t>(i)] -= top;
    }
  }
  return out;
}

// Polynomial product modulo the monic lift of the reduction polynomial.
std::vector<BigInt> poly_mul_mod(const std::vector<BigInt>& a, const std::vector<BigInt>& b,
                                 const FieldSpec& f) {
  const std::size_t m = static_cast<std::size_t>(f.m());
  std::vector<BigInt> prod(2 * m - 1, 0);
  for (std::size_t i = 0; i < m; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < m; ++j) prod[i + j] += a[i] * b[j];
  }
  const auto& poly = f.reduction_poly();
  // t^m = -(f_0 + ... + f_{m-1} t^{m-1})
  for (std::size_t k = prod.size(); k-- > m;) {
    if (prod[k] == 0) continue;
    const BigInt c = prod[k];
    prod[k] = 0;
    for (std::size_t i = 0; i < m; ++i) prod[k - m + i] -= c * poly[i];
  }
  prod.resize(m);
  return prod;
}

// Peel `count` base-p digits off nonnegative coordinates.
std::vector<Digit> peel_digits(std::vector<BigInt>& work, std::int64_t count, const FieldSpec& f) {
  const BigInt bp = f.p();
  std::vector<std::int64_t> coord(static_cast<std::size_t>(f.m()));
  std::vector<Digit> digits;
  digits.reserve(static_cast<std::size_t>(count));
  for (std::int64_t k = 0; k < count; ++k) {
    for (std::size_t i = 0; i < work.size(); ++i) {
      coord[i] = static_cast<std::int64_t>(work[i] % bp);
      work[i] /= bp;
    }
    digits.push_back(f.from_coordinates(coord));
  }
  return digits;
}

// Canonical digits from coordinates. `abs` bounds the known digits and is
// ignored for exact values.
PadicNumber from_coords(const FieldPtr& field, const Coords& x, std::optional<std::int64_t> abs,
                        bool exact) {
  const FieldSpec& f = *field;
  const bool all_zero = std::all_of(x.c.begin(), x.c.end(), [](const BigInt& c) { return c == 0; });
  if (all_zero) {
    if (exact) return PadicNumber::zero(field);
    return PadicNumber::from_digits(field, *abs, {}, false);
  }
  std::int64_t v = std::numeric_limits<std::int64_t>::max();
  for (const auto& c : x.c) {
    if (c != 0) v = std::min(v, x.scale + p_valuation(c, f.p()));
  }
  if (!exact && v >= *abs) return PadicNumber::from_digits(field, *abs, {}, false);

  const BigInt drop = pow_big(f.p(), v - x.scale);
  std::vector<BigInt> work = x.c;

  if (exact) {
    for (auto& c : work) c /= drop;
    std::int64_t len = 0;
    for (const auto& c : work) len = std::max(len, digit_length(c, f.p()));
    // Negative coordinates become p^len + c followed by a tail of p - 1.
    const BigInt top = pow_big(f.p(), len);
    std::vector<std::int64_t> tail_coord(work.size(), 0);
    for (std::size_t i = 0; i < work.size(); ++i) {
      if (work[i] < 0) {
        work[i] += top;
        tail_coord[i] = f.p() - 1;
      }
    }
    std::vector<Digit> digits = peel_digits(work, len, f);
    return PadicNumber::from_digits(field, v, std::move(digits), true,
                                    f.from_coordinates(tail_coord));
  }

  const std::int64_t end = std::min(v + f.precision(), *abs);
  const BigInt modulus = pow_big(f.p(), end - x.scale);
  for (auto& c : work) c = mod_nonneg(c, modulus) / drop;
  return PadicNumber::from_digits(field, v, peel_digits(work, end - v, f), false);
}

std::optional<std::int64_t> min_abs(std::optional<std::int64_t> a, std::optional<std::int64_t> b) {
  if (!a) return b;
  if (!b) return a;
  return std::min(*a, *b);
}

// Lower bound on the valuation, usable for indeterminate zeros.
std::int64_t val_lower(const PadicNumber& x) {
  if (x.is_zero()) return kInfiniteValuation;
  return x.v0();
}

PadicNumber add_signed(const PadicNumber& x, const PadicNumber& y, bool negate_y) {
  require_same_field(x, y);
  if (y.is_zero()) return x;
  if (x.is_zero() && !negate_y) return y;
  const std::int64_t scale =
      x.is_zero() ? y.v0() : (y.is_zero() ? x.v0() : std::min(x.v0(), y.v0()));
  Coords cx = to_coords(x, scale);
  Coords cy = to_coords(y, scale);
  for (std::size_t i = 0; i < cx.c.size(); ++i) {
    if (negate_y) {
      cx.c[i] -= cy.c[i];
    } else {
      cx.c[i] += cy.c[i];
    }
  }
  return from_coords(x.field(), cx, min_abs(x.absolute_precision(), y.absolute_precision()),
                     x.exact() && y.exact());
}

// Inverse of a unit u (coordinates at scale 0) modulo p^r.
std::vector<BigInt> unit_inverse(const std::vector<BigInt>& u, std::int64_t r, const FieldSpec& f) {
  const int m = f.m();
  const BigInt bp = f.p();
  std::vector<std::int64_t> residue(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    residue[static_cast<std::size_t>(i)] =
        static_cast<std::int64_t>(mod_nonneg(u[static_cast<std::size_t>(i)], bp));
  }
  const Digit inv_digit = f.inv(f.from_coordinates(residue));
  std::vector<BigInt> z(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) z[static_cast<std::size_t>(i)] = f.coordinate(inv_digit, i);
  // Newton: z <- z (2 - u z), doubling the number of correct digits.
  std::int64_t known = 1;
  while (known < r) {
    known = std::min(known * 2, r);
    const BigInt mod = pow_big(f.p(), known);
    std::vector<BigInt> uz = poly_mul_mod(u, z, f);
    for (auto& c : uz) c = -c;
    uz[0] += 2;
    z = poly_mul_mod(z, uz, f);
    for (auto& c : z) c = mod_nonneg(c, mod);
  }
  return z;
}

}  // namespace

PadicNumber::PadicNumber(FieldPtr field) : field_(std::move(field)) {}

PadicNumber PadicNumber::monomial(FieldPtr field, Digit digit, std::int64_t exponent) {
  if (digit >= field->q()) throw InputError("digit_range", "digit outside [0, q)");
  if (digit == 0) return zero(std::move(field));
  return from_digits(std::move(field), exponent, {digit}, true);
}

PadicNumber PadicNumber::from_digits(FieldPtr field, std::int64_t v0, std::vector<Digit> digits,
                                     bool exact, Digit tail) {
  for (Digit d : digits) {
    if (d >= field->q()) throw InputError("digit_range", "digit outside [0, q)");
  }
  if (!exact) tail = 0;
  if (tail >= field->q()) throw InputError("digit_range", "tail digit outside [0, q)");
  for (int i = 0; i < field->m(); ++i) {
    const auto c = field->coordinate(tail, i);
    if (c != 0 && c != field->p() - 1) {
      throw InputError("tail_digit", "tail digit coordinates must be 0 or p - 1");
    }
  }
  PadicNumber x(std::move(field));
  std::size_t lead = 0;
  while (lead < digits.size() && digits[lead] == 0) ++lead;
  if (lead == digits.size() && tail == 0) {
    if (!exact) {
      x.exact_ = false;
      x.v0_ = v0 + static_cast<std::int64_t>(digits.size());
    }
    return x;
  }
  digits.erase(digits.begin(), digits.begin() + static_cast<std::ptrdiff_t>(lead));
  v0 += static_cast<std::int64_t>(lead);
  if (exact) {
    while (!digits.empty() && digits.back() == tail) digits.pop_back();
  } else if (digits.size() > static_cast<std::size_t>(x.field_->precision())) {
    digits.resize(static_cast<std::size_t>(x.field_->precision()));
  }
  x.v0_ = v0;
  x.digits_ = std::move(digits);
  x.exact_ = exact;
  x.tail_ = tail;
  return x;
}

PadicNumber PadicNumber::from_integer(FieldPtr field, const BigInt& value) {
  Coords c;
  c.scale = 0;
  c.c.assign(static_cast<std::size_t>(field->m()), 0);
  c.c[0] = value;
  return from_coords(field, c, std::nullopt, true);
}

PadicNumber PadicNumber::from_rational(FieldPtr field, const BigInt& num, const BigInt& den) {
  if (den == 0) throw InputError("division_by_zero", "rational with zero denominator");
  return div(from_integer(field, num), from_integer(field, den));
}

std::optional<std::int64_t> PadicNumber::absolute_precision() const noexcept {
  if (exact_) return std::nullopt;
  return v0_ + static_cast<std::int64_t>(digits_.size());
}

Digit PadicNumber::digit_at(std::int64_t i) const {
  if (i < v0_) return 0;
  const auto k = static_cast<std::uint64_t>(i - v0_);
  if (k < digits_.size()) return digits_[k];
  if (exact_) return tail_;
  throw PrecisionError("digit at index " + std::to_string(i) + " lies beyond the known precision");
}

bool operator==(const PadicNumber& a, const PadicNumber& b) {
  return *a.field_ == *b.field_ && a.v0_ == b.v0_ && a.exact_ == b.exact_ &&
         a.tail_ == b.tail_ && a.digits_ == b.digits_;
}

void require_same_field(const PadicNumber& x, const PadicNumber& y) {
  if (x.field() != y.field() && !(*x.field() == *y.field())) {
    throw InputError("field_mismatch", "operands live in different fields (" + x.field()->tag() +
                                           " vs " + y.field()->tag() + ")");
  }
}

std::int64_t val(const PadicNumber& x) {
  if (x.is_zero()) return kInfiniteValuation;
  if (x.is_indeterminate_zero()) {
    throw PrecisionError("valuation of a number indistinguishable from zero");
  }
  return x.v0();
}

PadicNumber add(const PadicNumber& x, const PadicNumber& y) { return add_signed(x, y, false); }
PadicNumber sub(const PadicNumber& x, const PadicNumber& y) { return add_signed(x, y, true); }

PadicNumber neg(const PadicNumber& x) { return sub(PadicNumber::zero(x.field()), x); }

PadicNumber mul(const PadicNumber& x, const PadicNumber& y) {
  require_same_field(x, y);
  if (x.is_zero() || y.is_zero()) return PadicNumber::zero(x.field());
  const FieldSpec& f = *x.field();
  Coords cx = to_coords(x, x.v0());
  Coords cy = to_coords(y, y.v0());
  Coords prod;
  prod.scale = cx.scale + cy.scale;
  prod.c = poly_mul_mod(cx.c, cy.c, f);
  std::optional<std::int64_t> abs;
  if (auto ax = x.absolute_precision()) abs = min_abs(abs, *ax + val_lower(y));
  if (auto ay = y.absolute_precision()) abs = min_abs(abs, *ay + val_lower(x));
  return from_coords(x.field(), prod, abs, x.exact() && y.exact());
}

PadicNumber div(const PadicNumber& x, const PadicNumber& y) {
  require_same_field(x, y);
  if (y.is_zero()) throw InputError("division_by_zero", "division by zero");
  if (y.is_indeterminate_zero()) {
    throw PrecisionError("divisor is indistinguishable from zero");
  }
  const FieldPtr& field = x.field();
  const FieldSpec& f = *field;
  if (x.is_zero()) return PadicNumber::zero(field);
  const std::int64_t vy = y.v0();
  if (x.is_indeterminate_zero()) {
    return PadicNumber::from_digits(field, x.v0() - vy, {}, false);
  }
  const std::int64_t vx = x.v0();

  // Relative precision of the quotient.
  std::int64_t r = f.precision();
  if (!x.exact()) r = std::min<std::int64_t>(r, static_cast<std::int64_t>(x.digits().size()));
  if (!y.exact()) r = std::min<std::int64_t>(r, static_cast<std::int64_t>(y.digits().size()));

  const BigInt modulus = pow_big(f.p(), r);
  const Coords ux = to_coords(x, vx);
  const Coords uy = to_coords(y, vy);
  std::vector<BigInt> q = poly_mul_mod(ux.c, unit_inverse(uy.c, r, f), f);
  for (auto& c : q) c = mod_nonneg(c, modulus);

  if (x.exact() && y.exact()) {
    // The quotient is exact iff its balanced residue times y gives back x.
    std::vector<BigInt> balanced = q;
    for (auto& c : balanced) {
      if (2 * c > modulus) c -= modulus;
    }
    if (poly_mul_mod(balanced, uy.c, f) == ux.c) {
      return from_coords(field, Coords{vx - vy, balanced}, std::nullopt, true);
    }
  }
  return from_coords(field, Coords{vx - vy, q}, (vx - vy) + r, false);
}

Comparison compare(const PadicNumber& x, const PadicNumber& y) {
  require_same_field(x, y);
  if (x.exact() && y.exact()) {
    return (x.v0() == y.v0() && x.digits() == y.digits() && x.tail() == y.tail())
               ? Comparison::equal
               : Comparison::different;
  }
  const std::int64_t limit = *min_abs(x.absolute_precision(), y.absolute_precision());
  std::int64_t start = limit;
  if (!x.is_zero()) start = std::min(start, x.v0());
  if (!y.is_zero()) start = std::min(start, y.v0());
  for (std::int64_t i = start; i < limit; ++i) {
    if (x.digit_at(i) != y.digit_at(i)) return Comparison::different;
  }
  return Comparison::indeterminate;
}

std::int64_t val_of_difference(const PadicNumber& x, const PadicNumber& y) {
  require_same_field(x, y);
  const auto limit = min_abs(x.absolute_precision(), y.absolute_precision());
  std::int64_t start = std::numeric_limits<std::int64_t>::max();
  if (!x.is_zero()) start = std::min(start, x.v0());
  if (!y.is_zero()) start = std::min(start, y.v0());
  if (start == std::numeric_limits<std::int64_t>::max()) return kInfiniteValuation;

  if (!limit) {
    // Past both prefixes only the tails remain.
    auto prefix_end = [start](const PadicNumber& z) {
      return z.is_zero() ? start : z.v0() + static_cast<std::int64_t>(z.digits().size());
    };
    const std::int64_t end = std::max(prefix_end(x), prefix_end(y));
    for (std::int64_t i = start; i < end; ++i) {
      if (x.digit_at(i) != y.digit_at(i)) return i;
    }
    return x.tail() == y.tail() ? kInfiniteValuation : end;
  }
  for (std::int64_t i = start; i < *limit; ++i) {
    if (x.digit_at(i) != y.digit_at(i)) return i;
  }
  throw PrecisionError("points agree on all digits below " + std::to_string(*limit) +
                       "; their distance is indeterminate");
}

std::optional<BigInt> to_integer(const PadicNumber& x) {
  if (!x.exact() || x.field()->m() != 1) return std::nullopt;
  if (x.is_zero()) return BigInt{0};
  if (x.v0() < 0) return std::nullopt;
  return to_coords(x, 0).c[0];
}

}  // namespace padictree
