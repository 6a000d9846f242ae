#include "padictree/projective.hpp"

#include <charconv>
#include <regex>
#include <sstream>

#include "padictree/errors.hpp"

namespace padictree {

ProjPoint::ProjPoint(PadicNumber value) : field_(value.field()), value_(std::move(value)) {}

ProjPoint ProjPoint::infinity(FieldPtr field) { return ProjPoint(std::move(field)); }

const PadicNumber& ProjPoint::value() const {
  if (!value_) throw InputError("infinite_point", "the point at infinity has no finite value");
  return *value_;
}

bool operator==(const ProjPoint& a, const ProjPoint& b) {
  if (a.is_infinity() || b.is_infinity()) return a.is_infinity() == b.is_infinity();
  return *a.value_ == *b.value_;
}

Comparison compare(const ProjPoint& a, const ProjPoint& b) {
  if (a.is_infinity() || b.is_infinity()) {
    return a.is_infinity() == b.is_infinity() ? Comparison::equal : Comparison::different;
  }
  return compare(a.value(), b.value());
}

Mobius::Mobius(PadicNumber a, PadicNumber b, PadicNumber c, PadicNumber d)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {
  const PadicNumber det = a_ * d_ - b_ * c_;
  if (det.is_zero()) throw InputError("singular_mobius", "Mobius map with ad - bc = 0");
  if (det.is_indeterminate_zero()) {
    throw PrecisionError("determinant of the Mobius map is indistinguishable from zero");
  }
}

Mobius Mobius::identity(const FieldPtr& field) {
  return Mobius(PadicNumber::one(field), PadicNumber::zero(field), PadicNumber::zero(field),
                PadicNumber::one(field));
}

ProjPoint Mobius::operator()(const ProjPoint& z) const {
  if (z.is_infinity()) {
    if (c_.is_zero()) return ProjPoint::infinity(a_.field());
    if (c_.is_indeterminate_zero()) {
      throw PrecisionError("image of infinity is indeterminate (c is an indeterminate zero)");
    }
    return a_ / c_;
  }
  const PadicNumber den = c_ * z.value() + d_;
  if (den.is_zero()) return ProjPoint::infinity(a_.field());
  if (den.is_indeterminate_zero()) {
    throw PrecisionError("cz + d is indistinguishable from zero");
  }
  return (a_ * z.value() + b_) / den;
}

Mobius Mobius::inverse() const { return Mobius(d_, -b_, -c_, a_); }

Mobius Mobius::compose(const Mobius& o) const {
  return Mobius(a_ * o.a_ + b_ * o.c_, a_ * o.b_ + b_ * o.d_, c_ * o.a_ + d_ * o.c_,
                c_ * o.b_ + d_ * o.d_);
}

namespace {

void require_distinct(const ProjPoint& x, const ProjPoint& y, const char* what) {
  switch (compare(x, y)) {
    case Comparison::equal:
      throw InputError("coincident_points", std::string("points ") + what + " coincide");
    case Comparison::indeterminate:
      throw PrecisionError(std::string("points ") + what + " cannot be told apart");
    case Comparison::different:
      break;
  }
}

}  // namespace

Mobius normalizing_mobius(const ProjPoint& a, const ProjPoint& b, const ProjPoint& c) {
  require_distinct(a, b, "1 and 2");
  require_distinct(a, c, "1 and 3");
  require_distinct(b, c, "2 and 3");
  const FieldPtr& field = a.field();
  const PadicNumber one = PadicNumber::one(field);
  const PadicNumber zero = PadicNumber::zero(field);
  // z -> ((z - a)(b - c)) / ((z - c)(b - a)) and its limits.
  if (a.is_infinity()) return Mobius(zero, b.value() - c.value(), one, -c.value());
  if (b.is_infinity()) return Mobius(one, -a.value(), one, -c.value());
  if (c.is_infinity()) return Mobius(one, -a.value(), zero, b.value() - a.value());
  const PadicNumber bc = b.value() - c.value();
  const PadicNumber ba = b.value() - a.value();
  return Mobius(bc, -(a.value() * bc), ba, -(c.value() * ba));
}

ProjPoint cross_ratio(const ProjPoint& a, const ProjPoint& b, const ProjPoint& c,
                      const ProjPoint& d) {
  return normalizing_mobius(a, b, c)(d);
}

std::string format_scalar(const PadicNumber& x) {
  std::ostringstream out;
  out << x.field()->tag() << ':' << x.v0() << ':';
  for (std::size_t i = 0; i < x.digits().size(); ++i) {
    if (i) out << ',';
    out << x.digits()[i];
  }
  if (x.tail() != 0) out << (x.digits().empty() ? "(" : ",(") << x.tail() << ')';
  if (!x.exact()) out << "...";
  return out.str();
}

std::string format_point(const ProjPoint& x) {
  return x.is_infinity() ? std::string("inf") : format_scalar(x.value());
}

namespace {

std::string_view strip(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

[[noreturn]] void bad_scalar(std::string_view text, const std::string& why) {
  throw InputError("scalar_format", "cannot parse scalar '" + std::string(text) + "': " + why);
}

template <typename Int>
Int parse_int(std::string_view s, std::string_view whole) {
  Int v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) bad_scalar(whole, "bad integer");
  return v;
}

BigInt parse_big(std::string_view s, std::string_view whole) {
  s = strip(s);
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (s.empty()) bad_scalar(whole, "empty integer");
  BigInt v = 0;
  for (char ch : s) {
    if (ch < '0' || ch > '9') bad_scalar(whole, "bad integer");
    v = v * 10 + (ch - '0');
  }
  return negative ? BigInt(-v) : v;
}

}  // namespace

PadicNumber parse_scalar(std::string_view text, const FieldPtr& field) {
  const std::string_view s = strip(text);
  const auto colon = s.find(':');
  if (colon == std::string_view::npos) {
    const auto slash = s.find('/');
    if (slash == std::string_view::npos) {
      return PadicNumber::from_integer(field, parse_big(s, text));
    }
    return PadicNumber::from_rational(field, parse_big(s.substr(0, slash), text),
                                      parse_big(s.substr(slash + 1), text));
  }
  const std::string_view tag = s.substr(0, colon);
  const auto caret = tag.find('^');
  if (caret == std::string_view::npos) bad_scalar(text, "missing p^m tag");
  const auto p = parse_int<std::int64_t>(tag.substr(0, caret), text);
  const auto m = parse_int<int>(tag.substr(caret + 1), text);
  if (p != field->p() || m != field->m()) {
    bad_scalar(text, "field tag does not match " + field->tag());
  }
  std::string_view rest = s.substr(colon + 1);
  const auto colon2 = rest.find(':');
  if (colon2 == std::string_view::npos) bad_scalar(text, "missing digit list");
  const auto v0 = parse_int<std::int64_t>(rest.substr(0, colon2), text);
  std::string_view list = rest.substr(colon2 + 1);
  bool exact = true;
  if (list.size() >= 3 && list.substr(list.size() - 3) == "...") {
    exact = false;
    list.remove_suffix(3);
  }
  Digit tail = 0;
  if (!list.empty() && list.back() == ')') {
    const auto open = list.rfind('(');
    if (open == std::string_view::npos || !exact) bad_scalar(text, "malformed repeating tail");
    const auto t = parse_int<std::int64_t>(list.substr(open + 1, list.size() - open - 2), text);
    if (t < 0 || t >= field->q()) bad_scalar(text, "digit outside [0, q)");
    tail = static_cast<Digit>(t);
    list = list.substr(0, open);
    if (!list.empty()) {
      if (list.back() != ',') bad_scalar(text, "malformed repeating tail");
      list.remove_suffix(1);
    }
  }
  std::vector<Digit> digits;
  while (!list.empty()) {
    const auto comma = list.find(',');
    const std::string_view item = list.substr(0, comma);
    const auto d = parse_int<std::int64_t>(item, text);
    if (d < 0 || d >= field->q()) bad_scalar(text, "digit outside [0, q)");
    digits.push_back(static_cast<Digit>(d));
    if (comma == std::string_view::npos) break;
    list.remove_prefix(comma + 1);
  }
  return PadicNumber::from_digits(field, v0, std::move(digits), exact, tail);
}

ProjPoint parse_point(std::string_view text, const FieldPtr& field) {
  const std::string_view s = strip(text);
  if (s == "inf" || s == "oo" || s == "infinity") return ProjPoint::infinity(field);
  return parse_scalar(s, field);
}

std::vector<ProjPoint> parse_points_file(std::string_view contents, const FieldPtr& field) {
  std::vector<ProjPoint> out;
  std::size_t line_no = 0;
  while (!contents.empty()) {
    const auto nl = contents.find('\n');
    std::string_view line = contents.substr(0, nl);
    contents.remove_prefix(nl == std::string_view::npos ? contents.size() : nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = strip(line);
    if (line.empty()) continue;
    try {
      out.push_back(parse_point(line, field));
    } catch (const InputError& e) {
      throw InputError(e.reason(), "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::optional<std::pair<std::int64_t, int>> sniff_field_tag(std::string_view contents) {
  static const std::regex tag(R"((\d+)\^(\d+):-?\d+:)");
  const std::string text(contents);
  for (std::sregex_iterator it(text.begin(), text.end(), tag), stop; it != stop; ++it) {
    // Skip matches inside comments.
    const auto line_start = text.rfind('\n', static_cast<std::size_t>(it->position()));
    const auto hash = text.find('#', line_start == std::string::npos ? 0 : line_start);
    if (hash != std::string::npos && hash < static_cast<std::size_t>(it->position())) continue;
    return std::make_pair(std::stoll((*it)[1]), std::stoi((*it)[2]));
  }
  return std::nullopt;
}

}  // namespace padictree
