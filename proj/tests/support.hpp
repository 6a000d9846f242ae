#pragma once

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "padictree/projective.hpp"
#include "padictree/tree.hpp"

namespace test_support {

using namespace padictree;

inline FieldPtr q2() {
  static const FieldPtr f = FieldSpec::make(2, 1, 64);
  return f;
}

inline ProjPoint int_point(long long v, const FieldPtr& f = q2()) {
  return PadicNumber::from_integer(f, v);
}

// The eight codes x1..x8 of the 2-adic example dendrogram, as integers.
inline const std::vector<long long>& eight_point_codes() {
  static const std::vector<long long> codes{0, 64, 32, 4, 4 + 16, 4 + 8, 1, 1 + 2};
  return codes;
}

inline PadicNumber random_exact(std::mt19937_64& rng, const FieldPtr& f, int max_len = 6) {
  std::uniform_int_distribution<int> len(0, max_len);
  std::uniform_int_distribution<int> v0(-2, 3);
  std::uniform_int_distribution<std::int64_t> digit(0, f->q() - 1);
  std::vector<Digit> ds(static_cast<std::size_t>(len(rng)));
  for (auto& d : ds) d = static_cast<Digit>(digit(rng));
  auto x = PadicNumber::from_digits(f, v0(rng), ds, true);
  // Some negatives, which carry a repeating tail.
  if (rng() % 4 == 0) x = neg(x);
  return x;
}

// n pairwise distinct exact points; infinity included with probability 1/2.
inline std::vector<ProjPoint> random_points(std::mt19937_64& rng, const FieldPtr& f, std::size_t n,
                                            bool allow_infinity = true) {
  std::vector<ProjPoint> out;
  std::set<std::string> seen;
  if (allow_infinity && n > 0 && rng() % 2 == 0) {
    out.push_back(ProjPoint::infinity(f));
    seen.insert("inf");
  }
  while (out.size() < n) {
    ProjPoint p = random_exact(rng, f);
    if (seen.insert(format_point(p)).second) out.push_back(p);
  }
  std::shuffle(out.begin(), out.end(), rng);
  return out;
}

inline Mobius random_mobius(std::mt19937_64& rng, const FieldPtr& f) {
  while (true) {
    const auto a = random_exact(rng, f, 3), b = random_exact(rng, f, 3), c = random_exact(rng, f, 3),
               d = random_exact(rng, f, 3);
    if (!sub(mul(a, d), mul(b, c)).is_zero()) return Mobius(a, b, c, d);
  }
}

// Isomorphism by trying every vertex bijection; only for small trees.
inline bool brute_force_isomorphic(const MarkedTree& a, const MarkedTree& b) {
  const std::size_t n = a.vertex_count();
  if (n != b.vertex_count() || a.edges().size() != b.edges().size() || a.ends().size() != b.ends().size()) {
    return false;
  }
  std::vector<std::vector<std::int64_t>> la(n, std::vector<std::int64_t>(n, 0)), lb = la;
  for (const auto& e : a.edges()) la[e.u][e.v] = la[e.v][e.u] = e.length;
  for (const auto& e : b.edges()) lb[e.u][e.v] = lb[e.v][e.u] = e.length;
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool ok = true;
    for (const auto& [label, v] : a.ends()) {
      auto it = b.ends().find(label);
      ok = ok && it != b.ends().end() && it->second == perm[v];
    }
    for (std::size_t i = 0; ok && i < n; ++i) {
      for (std::size_t j = 0; ok && j < n; ++j) ok = la[i][j] == lb[perm[i]][perm[j]];
    }
    if (ok) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

}  // namespace test_support
