#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace padictree {

/// Element of the residue field F_q, stored as the base-p integer whose
/// digits are the coordinates in the polynomial basis 1, t, ..., t^(m-1).
using Digit = std::uint32_t;

inline constexpr int kDefaultPrecision = 64;
inline constexpr int kMaxResidueDegree = 16;

/// Unramified extension of Q_p of degree m. The residue field is
/// F_p[t]/(f) with f the lexicographically smallest monic irreducible
/// polynomial of degree m; its integer lift defines the ring of integers
/// Z_p[t]/(f).
class FieldSpec {
 public:
  /// Throws InputError if p is not prime, m is outside [1, 16], q exceeds
  /// 2^31, or precision < 1.
  static std::shared_ptr<const FieldSpec> make(std::int64_t p, int m = 1,
                                               int precision = kDefaultPrecision);

  std::int64_t p() const noexcept { return p_; }
  int m() const noexcept { return m_; }
  std::int64_t q() const noexcept { return q_; }
  int precision() const noexcept { return precision_; }

  /// Coefficients f_0 .. f_m of the reduction polynomial, f_m = 1.
  const std::vector<std::int64_t>& reduction_poly() const noexcept { return poly_; }

  /// Coordinate i of a digit (coefficient of t^i).
  std::int64_t coordinate(Digit d, int i) const noexcept;
  Digit from_coordinates(const std::vector<std::int64_t>& coords) const;

  Digit add(Digit a, Digit b) const;
  Digit sub(Digit a, Digit b) const;
  Digit mul(Digit a, Digit b) const;
  /// Multiplicative inverse; throws InputError for 0.
  Digit inv(Digit a) const;

  /// Same residue field and precision.
  bool operator==(const FieldSpec& other) const noexcept;

  /// "p^m", the prefix used by the scalar text format.
  std::string tag() const;

 private:
  FieldSpec(std::int64_t p, int m, int precision, std::vector<std::int64_t> poly);

  std::int64_t p_;
  int m_;
  std::int64_t q_;
  int precision_;
  std::vector<std::int64_t> poly_;
  std::vector<std::int64_t> pow_p_;  // p^0 .. p^(m-1)
};

using FieldPtr = std::shared_ptr<const FieldSpec>;

bool is_prime(std::int64_t n);

/// Polynomials over F_p, coefficients low to high, used for the reduction
/// polynomial search.
namespace fp_poly {
using Poly = std::vector<std::int64_t>;
void trim(Poly& a);
Poly mul_mod(const Poly& a, const Poly& b, const Poly& f, std::int64_t p);
Poly rem(Poly a, const Poly& f, std::int64_t p);
Poly gcd(Poly a, Poly b, std::int64_t p);
/// Rabin's irreducibility test for a monic f of degree >= 1.
bool is_irreducible(const Poly& f, std::int64_t p);
/// Lexicographically smallest monic irreducible polynomial of degree m.
Poly smallest_irreducible(std::int64_t p, int m);
}  // namespace fp_poly

}  // namespace padictree
