#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "padictree/padic.hpp"

namespace padictree {

/// Point of the projective line P^1(K): a finite number or infinity.
class ProjPoint {
 public:
  ProjPoint(PadicNumber value);  // NOLINT(google-explicit-constructor)
  static ProjPoint infinity(FieldPtr field);

  bool is_infinity() const noexcept { return !value_.has_value(); }
  /// Throws InputError on infinity.
  const PadicNumber& value() const;
  const FieldPtr& field() const noexcept { return field_; }

  friend bool operator==(const ProjPoint& a, const ProjPoint& b);

 private:
  explicit ProjPoint(FieldPtr field) : field_(std::move(field)) {}

  FieldPtr field_;
  std::optional<PadicNumber> value_;
};

Comparison compare(const ProjPoint& a, const ProjPoint& b);

/// Projective linear map z -> (az + b) / (cz + d).
class Mobius {
 public:
  /// Throws InputError when ad - bc = 0 and PrecisionError when it cannot
  /// be told apart from 0.
  Mobius(PadicNumber a, PadicNumber b, PadicNumber c, PadicNumber d);
  static Mobius identity(const FieldPtr& field);

  const PadicNumber& a() const noexcept { return a_; }
  const PadicNumber& b() const noexcept { return b_; }
  const PadicNumber& c() const noexcept { return c_; }
  const PadicNumber& d() const noexcept { return d_; }

  /// Throws PrecisionError when cz + d (or c, at infinity) is an
  /// indeterminate zero.
  ProjPoint operator()(const ProjPoint& z) const;
  Mobius inverse() const;
  /// (*this) o other
  Mobius compose(const Mobius& other) const;

 private:
  PadicNumber a_, b_, c_, d_;
};

/// The map sending a, b, c to 0, 1, infinity. Throws InputError
/// ("coincident_points") when two inputs coincide and PrecisionError when
/// that cannot be decided.
Mobius normalizing_mobius(const ProjPoint& a, const ProjPoint& b, const ProjPoint& c);

/// Image of d under normalizing_mobius(a, b, c).
ProjPoint cross_ratio(const ProjPoint& a, const ProjPoint& b, const ProjPoint& c,
                      const ProjPoint& d);

// Scalar text format: "p^m:v0:d0,d1,..." and "inf" for infinity. An exact
// repeating tail is written as a final "(d)" item ("2^1:1:(1)" is -2 in
// Q_2); truncated numbers end in "...". Decimal integers and fractions
// ("-3", "1/3") are accepted on input as shorthand.

std::string format_scalar(const PadicNumber& x);
std::string format_point(const ProjPoint& x);
/// Throws InputError("scalar_format") on malformed text or a field tag
/// that does not match `field`.
PadicNumber parse_scalar(std::string_view text, const FieldPtr& field);
ProjPoint parse_point(std::string_view text, const FieldPtr& field);
/// One point per line; blank lines and '#' comments are skipped.
std::vector<ProjPoint> parse_points_file(std::string_view contents, const FieldPtr& field);
/// Field named by the first scalar-format entry ("p^m:..."), if any.
std::optional<std::pair<std::int64_t, int>> sniff_field_tag(std::string_view contents);

}  // namespace padictree
