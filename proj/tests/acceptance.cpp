// One PASS/FAIL line per acceptance criterion. All checks are exact; the
// only tolerances are the wall-clock limits below.
#include <omp.h>

#include <boost/multiprecision/cpp_int.hpp>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "padictree/builder.hpp"
#include "padictree/encoder.hpp"
#include "padictree/errors.hpp"
#include "padictree/hidden.hpp"
#include "padictree/moduli.hpp"
#include "support.hpp"

using namespace test_support;
using boost::multiprecision::cpp_int;

namespace {

constexpr double kLimitEightPoint = 1.0;
constexpr double kLimitBounds = 300.0;
constexpr double kLimitSharpness = 1.0;
constexpr double kLimitInvariance = 30.0;
constexpr double kLimitOracle = 60.0;
constexpr double kLimitM04 = 1.0;
constexpr double kLimitStable = 1.0;

constexpr std::uint64_t kSeedInvariance = 20240401;
constexpr std::uint64_t kSeedOracle = 20240402;
constexpr int kTrials = 1000;

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double limit, const std::function<Outcome()>& body) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::ostringstream d;
  d << o.detail << (o.detail.empty() ? "" : "; ") << secs << " s (limit " << limit << " s)";
  if (secs >= limit) {
    o.pass = false;
    d << " TIME LIMIT EXCEEDED";
  }
  if (!o.pass) ++failures;
  std::printf("%s %d %s: %s\n", o.pass ? "PASS" : "FAIL", id, title, d.str().c_str());
  std::fflush(stdout);
}

// 2-adic valuation of a nonzero integer.
int v2(cpp_int x) {
  int v = 0;
  while ((x & 1) == 0) {
    x >>= 1;
    ++v;
  }
  return v;
}

// Merge level of two leaves in a classical dendrogram.
std::int64_t merge_level(const ClassicalDendrogram& d, const std::string& a, const std::string& b) {
  std::vector<std::size_t> parent(d.nodes.size(), d.nodes.size());
  std::map<std::string, std::size_t> leaf;
  for (std::size_t v = 0; v < d.nodes.size(); ++v) {
    for (auto c : d.nodes[v].children) parent[c] = v;
    if (d.nodes[v].label) leaf[*d.nodes[v].label] = v;
  }
  std::set<std::size_t> up;
  for (std::size_t v = leaf.at(a); v < d.nodes.size(); v = parent[v]) up.insert(v);
  for (std::size_t v = leaf.at(b); v < d.nodes.size(); v = parent[v]) {
    if (up.count(v) && !d.is_leaf(v)) return d.nodes[v].level;
  }
  throw std::logic_error("no common ancestor");
}

Outcome eight_point() {
  const auto f = q2();
  const auto& ints = eight_point_codes();
  CodeAssignment codes{f, {}};
  for (std::size_t i = 0; i < ints.size(); ++i) {
    codes.codes.emplace_back("x" + std::to_string(i + 1), PadicNumber::from_integer(f, ints[i]));
  }
  const ClassicalDendrogram d = decode_codes(codes);
  int mismatches = 0;
  for (std::size_t i = 0; i < ints.size(); ++i) {
    for (std::size_t j = i + 1; j < ints.size(); ++j) {
      const int oracle = v2(cpp_int(ints[i]) - cpp_int(ints[j]));
      if (merge_level(d, "x" + std::to_string(i + 1), "x" + std::to_string(j + 1)) != oracle) ++mismatches;
    }
  }
  // The listed merge valuations.
  const std::map<std::pair<int, int>, int> listed{{{7, 8}, 1}, {{4, 5}, 4}, {{4, 6}, 3}, {{1, 2}, 6},
                                                  {{1, 3}, 5}, {{1, 7}, 0}, {{1, 4}, 2}};
  for (const auto& [pair, w] : listed) {
    if (merge_level(d, "x" + std::to_string(pair.first), "x" + std::to_string(pair.second)) != w) ++mismatches;
  }
  const ClassicalDendrogram back = decode_codes(encode_dendrogram(d, f));
  const bool round_trip = canonical_form(back) == canonical_form(d);
  std::ostringstream s;
  s << "decoded " << to_newick(d) << ", " << mismatches << " valuation mismatches, encode/decode round trip "
    << (round_trip ? "isomorphic" : "DIFFERS");
  return {mismatches == 0 && round_trip, s.str()};
}

Outcome bounds() {
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  std::ostringstream s;
  bool ok = true;
  std::size_t theorem = 0, corollary = 0, sharp = 0;
  std::string first_theorem, first_corollary;
  for (std::size_t n = 3; n <= 10; ++n) {
    for (const auto& t : enumerate_shapes(n)) {
      const HiddenReport r = hidden_report(t);
      const auto nn = static_cast<std::int64_t>(n), v = static_cast<std::int64_t>(r.v_h),
                 b = static_cast<std::int64_t>(r.b0_h);
      if (!(4 * v <= nn - 4 * b + 4)) {
        if (theorem++ == 0) first_theorem = canonical_form(t, {false, false, false});
      }
      if (!(8 * b <= nn + 4)) {
        if (corollary++ == 0) first_corollary = canonical_form(t, {false, false, false});
      }
      if (!(3 * b <= nn - 3)) ++sharp;
    }
  }
  const std::size_t unlabeled4 = enumerate_shapes(4).size();
  const std::uint64_t labeled5 = count_labeled_trees(5);
  omp_set_num_threads(saved);
  ok = theorem == 0 && corollary == 0 && sharp == 0 && unlabeled4 == 2 && labeled5 == 1 + 10 + 15;
  s << "violations v_h<=n/4-b0_h+1: " << theorem << ", b0_h<=(n+4)/8: " << corollary
    << ", b0_h<=(n-3)/3: " << sharp << "; unlabeled n=4: " << unlabeled4 << " (want 2), labeled n=5: " << labeled5
    << " (want 26)";
  if (theorem) s << "; first v_h witness " << first_theorem;
  if (corollary) s << "; first b0_h witness " << first_corollary;
  return {ok, s.str()};
}

Outcome sharpness() {
  std::ostringstream s;
  int bad = 0;
  for (std::size_t n = 6; n <= 30; ++n) {
    const ExtremalTree e = extremal_dendrogram(n);
    const HiddenReport r = hidden_report(e.tree);
    const std::size_t want = (n - 3) / 3;
    if (e.degenerate || r.n != n || r.b0_h != want) {
      if (bad++ == 0) s << "first miss n=" << n << " b0_h=" << r.b0_h << " want " << want << "; ";
    }
  }
  s << bad << " of 25 sizes miss floor((n-3)/3)";
  return {bad == 0, s.str()};
}

Outcome invariance() {
  std::mt19937_64 rng(kSeedInvariance);
  const auto f = q2();
  std::uniform_int_distribution<std::size_t> size(3, 12);
  int iso = 0, codes = 0;
  for (int trial = 0; trial < kTrials; ++trial) {
    const auto xs = random_points(rng, f, size(rng));
    const Mobius g = random_mobius(rng, f);
    std::vector<ProjPoint> ys;
    for (const auto& x : xs) ys.push_back(g(x));
    iso += labeled_isomorphic(build_projective_dendrogram(xs), build_projective_dendrogram(ys));
    codes += stratum_code({xs, false}) == stratum_code({ys, false});
  }
  std::ostringstream s;
  s << "labeled isomorphism " << iso << "/" << kTrials << ", stratum codes " << codes << "/" << kTrials;
  return {iso == kTrials && codes == kTrials, s.str()};
}

Outcome oracle() {
  std::mt19937_64 rng(kSeedOracle);
  const auto f = q2();
  std::uniform_int_distribution<std::size_t> size(2, 64);
  int agree = 0;
  for (int trial = 0; trial < kTrials; ++trial) {
    const auto xs = random_points(rng, f, size(rng));
    agree += labeled_isomorphic(build_projective_dendrogram(xs), single_linkage_oracle(valuation_matrix(xs)));
  }
  std::ostringstream s;
  s << agree << "/" << kTrials << " point sets agree";
  return {agree == kTrials, s.str()};
}

Outcome m04_geography() {
  const auto f = q2();
  auto config = [](const ProjPoint& lambda) {
    const FieldPtr& k = lambda.field();
    return Configuration{{PadicNumber::from_integer(k, 0), PadicNumber::from_integer(k, 1), ProjPoint::infinity(k), lambda},
                         false};
  };
  // lambda = a / 2^k for odd or even a; the expected stratum from integer valuations.
  int tested = 0, wrong = 0, central = 0;
  std::map<std::string, StratumCode> codes;
  for (int k = 0; k <= 3; ++k) {
    for (long long a = -40; a <= 40; ++a) {
      const cpp_int num = a, den = cpp_int(1) << k;
      if (num == 0 || num == den) continue;
      const int val = v2(num) - k;
      const int val1 = v2(num - den) - k;
      const std::string want = val > 0 ? "B" : val1 > 0 ? "C" : val < 0 ? "A" : "v";
      const PadicNumber lambda = div(PadicNumber::from_integer(f, a), PadicNumber::from_integer(f, 1LL << k));
      const StratumCode c = stratum_code(config(lambda));
      const std::string got = m04_name(c);
      ++tested;
      wrong += got != want;
      central += got == "v";
      codes.emplace(got, c);
    }
  }
  // A lift of a generator of F_4 in the unramified quadratic extension.
  const auto f4 = FieldSpec::make(2, 2, 64);
  const StratumCode cv = stratum_code(config(parse_scalar("2^2:0:2", f4)));
  const bool v_over_f4 = m04_name(cv) == "v";
  codes.emplace("v", cv);
  bool star = codes.size() == 4;
  if (star) {
    const char* names = "ABCv";
    for (int i = 0; i < 4; ++i) {
      for (int j = i + 1; j < 4; ++j) {
        const bool edge = strata_adjacent(codes.at(std::string(1, names[i])), codes.at(std::string(1, names[j])));
        star = star && edge == (names[j] == 'v');
      }
    }
  }
  std::ostringstream s;
  s << tested << " lambdas over Q_2, " << wrong << " misclassified, " << central << " central; F_4 generator -> "
    << m04_name(cv) << "; adjacency " << (star ? "is the 3-star through v" : "is NOT the 3-star");
  return {wrong == 0 && central == 0 && v_over_f4 && star, s.str()};
}

Outcome stable() {
  const auto f = q2();
  const StableTree good = collide({int_point(0), int_point(1), ProjPoint::infinity(f), int_point(1)});
  const bool good_ok = validate_stable(good).empty();
  auto names = [](const StableTree& s) {
    std::set<std::string> out;
    for (const auto& v : validate_stable(s)) out.insert(v.property);
    return out;
  };
  // (1) a node whose two branches lie on the same line.
  StableTree bad1 = good;
  bad1.components[0].double_points.push_back({int_point(5), 42});
  bad1.components[0].double_points.push_back({int_point(6), 42});
  // (3) a line with two special points.
  StableTree bad3 = good;
  bad3.components[1].marks.pop_back();
  // (4) a mark on the node.
  StableTree bad4 = good;
  bad4.components[1].marks[0].position = bad4.components[1].double_points[0].position;
  const bool r1 = names(bad1).count("ordinary_double_point") > 0;
  const bool r3 = names(bad3).count("three_special_points") > 0;
  const bool r4 = names(bad4).count("regular_marks") > 0;
  std::ostringstream s;
  s << "collide(0,1,inf,1) " << (good_ok ? "valid" : "INVALID") << " with " << good.components.size()
    << " lines; negatives named: (1) " << r1 << ", (3) " << r3 << ", (4) " << r4;
  return {good_ok && r1 && r3 && r4, s.str()};
}

}  // namespace

int main() {
  criterion(1, "eight-code example decode and round trip", kLimitEightPoint, eight_point);
  criterion(2, "hidden-vertex bounds over all shapes n=3..10", kLimitBounds, bounds);
  criterion(3, "extremal trees attain floor((n-3)/3), n=6..30", kLimitSharpness, sharpness);
  criterion(4, "PGL2 invariance of trees and stratum codes", kLimitInvariance, invariance);
  criterion(5, "builder agrees with single linkage", kLimitOracle, oracle);
  criterion(6, "M04 strata and adjacency", kLimitM04, m04_geography);
  criterion(7, "stable tree validation", kLimitStable, stable);
  std::printf("%d of 7 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
