#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "padictree/field.hpp"

namespace padictree {

using BigInt = boost::multiprecision::cpp_int;

/// Valuation of exact zero.
inline constexpr std::int64_t kInfiniteValuation = std::numeric_limits<std::int64_t>::max();

/// Element of an unramified extension K of Q_p written as a digit expansion
///
///   x = sum_{k >= 0} digits[k] * p^(v0 + k),   digits[k] in F_q,
///
/// where each F_q digit stands for its lift sum_i c_i t^i with c_i in [0, p).
///
/// An exact number is a finite prefix of digits followed by a repeating
/// tail digit whose coordinates are 0 or p - 1; a tail of 0 is a
/// terminating expansion, and p - 1 coordinates encode negative integer
/// coordinates (...111 = -1 in Q_2). An inexact number is only known modulo
/// p^absolute_precision(); its stored digits are exactly the known ones.
/// Zero is the exact number with no digits and tail 0. An inexact number
/// whose known digits all vanish is an indeterminate zero: no digits and v0
/// equal to its absolute precision.
class PadicNumber {
 public:
  explicit PadicNumber(FieldPtr field);

  static PadicNumber zero(FieldPtr field) { return PadicNumber(std::move(field)); }
  static PadicNumber one(FieldPtr field) { return monomial(std::move(field), 1, 0); }
  /// digit * p^exponent.
  static PadicNumber monomial(FieldPtr field, Digit digit, std::int64_t exponent);
  /// Normalizes leading zeros (and trailing repeats of the tail for exact
  /// inputs); inexact inputs keep at most field->precision() digits.
  /// Throws InputError if a tail coordinate is not 0 or p - 1.
  static PadicNumber from_digits(FieldPtr field, std::int64_t v0, std::vector<Digit> digits,
                                 bool exact, Digit tail = 0);
  static PadicNumber from_integer(FieldPtr field, const BigInt& value);
  static PadicNumber from_rational(FieldPtr field, const BigInt& num, const BigInt& den);

  const FieldPtr& field() const noexcept { return field_; }
  std::int64_t v0() const noexcept { return v0_; }
  const std::vector<Digit>& digits() const noexcept { return digits_; }
  bool exact() const noexcept { return exact_; }
  /// Repeating digit after the prefix of an exact number; 0 otherwise.
  Digit tail() const noexcept { return tail_; }

  bool is_zero() const noexcept { return exact_ && digits_.empty() && tail_ == 0; }
  bool is_indeterminate_zero() const noexcept { return !exact_ && digits_.empty(); }
  /// nullopt for exact numbers.
  std::optional<std::int64_t> absolute_precision() const noexcept;

  /// Digit at absolute index i. Throws PrecisionError when i lies beyond
  /// the known digits of an inexact number.
  Digit digit_at(std::int64_t i) const;

  /// Structural identity (field, v0, digits, exactness). Use compare() for
  /// value comparison under truncation.
  friend bool operator==(const PadicNumber& a, const PadicNumber& b);

 private:
  FieldPtr field_;
  std::int64_t v0_ = 0;
  std::vector<Digit> digits_;
  bool exact_ = true;
  Digit tail_ = 0;
};

/// v with |x| = q^(-v); kInfiniteValuation for zero. Throws PrecisionError
/// for an indeterminate zero.
std::int64_t val(const PadicNumber& x);

PadicNumber add(const PadicNumber& x, const PadicNumber& y);
PadicNumber sub(const PadicNumber& x, const PadicNumber& y);
PadicNumber mul(const PadicNumber& x, const PadicNumber& y);
PadicNumber neg(const PadicNumber& x);
/// Truncated to the field precision unless the quotient terminates there.
PadicNumber div(const PadicNumber& x, const PadicNumber& y);

inline PadicNumber operator+(const PadicNumber& x, const PadicNumber& y) { return add(x, y); }
inline PadicNumber operator-(const PadicNumber& x, const PadicNumber& y) { return sub(x, y); }
inline PadicNumber operator*(const PadicNumber& x, const PadicNumber& y) { return mul(x, y); }
inline PadicNumber operator/(const PadicNumber& x, const PadicNumber& y) { return div(x, y); }
inline PadicNumber operator-(const PadicNumber& x) { return neg(x); }

enum class Comparison { equal, different, indeterminate };

/// Value comparison. Two numbers that agree on every digit both of them
/// know are indeterminate unless both are exact.
Comparison compare(const PadicNumber& x, const PadicNumber& y);

/// val(x - y) read directly off the digit expansions: the first absolute
/// index where they differ. kInfiniteValuation if x == y exactly; throws
/// PrecisionError if the shared known digits agree.
std::int64_t val_of_difference(const PadicNumber& x, const PadicNumber& y);

/// Throws InputError("field_mismatch") unless both share one field.
void require_same_field(const PadicNumber& x, const PadicNumber& y);

/// Integer value of an exact number when m = 1 and the valuation is
/// nonnegative.
std::optional<BigInt> to_integer(const PadicNumber& x);

}  // namespace padictree
