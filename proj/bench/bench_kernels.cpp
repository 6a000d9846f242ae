// Parallel kernels against their serial references: wall time and agreement.
#include <omp.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>

#include "padictree/builder.hpp"
#include "padictree/hidden.hpp"
#include "padictree/moduli.hpp"

using namespace padictree;

namespace {

double seconds(const std::function<void()>& f, int reps) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

void row(const char* name, double serial, double parallel, bool agree) {
  std::printf("%-28s %10.4f %10.4f %8.2fx  %s\n", name, serial, parallel, serial / parallel,
              agree ? "agree" : "MISMATCH");
}

std::vector<ProjPoint> distinct_points(std::mt19937_64& rng, const FieldPtr& f, std::size_t n) {
  std::vector<ProjPoint> out;
  std::set<long long> seen;
  std::uniform_int_distribution<long long> value(0, 1LL << 40);
  while (out.size() < n) {
    const long long v = value(rng);
    if (seen.insert(v).second) out.push_back(PadicNumber::from_integer(f, v));
  }
  return out;
}

}  // namespace

int main() {
  const FieldPtr f = FieldSpec::make(2, 1, 64);
  std::mt19937_64 rng(2024);
  std::printf("threads: %d\n", omp_get_max_threads());
  std::printf("%-28s %10s %10s %9s\n", "kernel", "serial s", "parallel s", "speedup");
  bool all = true;

  {
    const auto xs = distinct_points(rng, f, 400);
    ValuationMatrix a, b;
    const double s = seconds([&] { a = valuation_matrix_serial(xs); }, 3);
    const double p = seconds([&] { b = valuation_matrix(xs); }, 3);
    const bool ok = a.w == b.w;
    all = all && ok;
    row("valuation_matrix n=400", s, p, ok);
  }
  {
    std::size_t a = 0, b = 0;
    const double s = seconds([&] { a = enumerate_shapes_serial(11, 11).size(); }, 3);
    const double p = seconds([&] { b = enumerate_shapes(11, 11).size(); }, 3);
    all = all && a == b;
    row("enumerate_shapes n=11", s, p, a == b);
  }
  {
    std::uint64_t a = 0, b = 0;
    const double s = seconds([&] { a = count_labeled_trees_serial(10); }, 1);
    const double p = seconds([&] { b = count_labeled_trees(10); }, 1);
    all = all && a == b;
    row("count_labeled_trees n=10", s, p, a == b);
  }
  {
    Family fam{f, {}, {}, {}};
    for (int j = 0; j < 200; ++j) {
      fam.times.push_back("t" + std::to_string(j));
      fam.rows.push_back(distinct_points(rng, f, 48));
    }
    std::vector<Slice> a, b;
    const double s = seconds([&] { a = slice_all_serial(fam); }, 3);
    const double p = seconds([&] { b = slice_all(fam); }, 3);
    bool ok = a.size() == b.size();
    for (std::size_t j = 0; ok && j < a.size(); ++j) ok = canonical_form(a[j].tree) == canonical_form(b[j].tree);
    all = all && ok;
    row("slice_all 200 rows x 48", s, p, ok);
  }
  return all ? 0 : 1;
}
