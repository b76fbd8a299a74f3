#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <vector>

#include "core/gam.hpp"
#include "core/mother.hpp"
#include "core/rician.hpp"

using namespace lpscma;

namespace {

Constellation1D lp_vec(int t, int m) {
  GamParams p;
  return build_lp_vector(t, m, default_overlap_plan(t, m), p);
}

// brute force over all second-dimension permutations, used as the oracle for
// the search
double brute_force_best(const Constellation1D& src, double kappa, double n0,
                        std::vector<int>* argmax = nullptr) {
  const int m = src.size();
  std::vector<int> base(m), p(m);
  std::iota(base.begin(), base.end(), 0);
  p = base;
  double best = -1.0;
  do {
    double v = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i)
      for (int l = i + 1; l < m; ++l) {
        double acc = rician_d2_sum_term(std::norm(src.points[base[i]] - src.points[base[l]]), kappa, n0) +
                     rician_d2_sum_term(std::norm(src.points[p[i]] - src.points[p[l]]), kappa, n0);
        v = std::min(v, acc);
      }
    if (v > best) {
      best = v;
      if (argmax) *argmax = p;
    }
  } while (std::next_permutation(p.begin(), p.end()));
  return best;
}

}  // namespace

TEST_CASE("cartesian construction enumerates all tuples") {
  GamParams gp;
  auto a2 = build_basic_constellation(2, gp);
  cd a = a2[0];

  auto mc = cartesian_mother(a2, 2);
  REQUIRE(mc.size == 4);
  REQUIRE(mc.dims == 2);
  std::set<std::pair<std::pair<double, double>, std::pair<double, double>>> cols;
  for (int m = 0; m < 4; ++m)
    cols.insert({{mc.at(0, m).real(), mc.at(0, m).imag()}, {mc.at(1, m).real(), mc.at(1, m).imag()}});
  CHECK(cols.size() == 4);
  // the expected tuple set over {a, -a}
  for (cd x : {a, -a})
    for (cd y : {a, -a})
      CHECK(cols.count({{x.real(), x.imag()}, {y.real(), y.imag()}}) == 1);

  // N = 1 keeps the row as-is
  auto mc1 = cartesian_mother(a2, 1);
  CHECK(mc1.size == 2);
  CHECK(mc1.at(0, 0) == a2[0]);

  // T=4, N=2: every value appears 4 times per row
  auto a4 = build_basic_constellation(4, gp);
  auto mc4 = cartesian_mother(a4, 2);
  REQUIRE(mc4.size == 16);
  for (int n = 0; n < 2; ++n)
    for (cd v : a4) {
      int cnt = 0;
      for (int m = 0; m < 16; ++m) cnt += (mc4.at(n, m) == v);
      CHECK(cnt == 4);
    }
  // all 16 columns distinct
  std::set<std::vector<double>> c4;
  for (int m = 0; m < 16; ++m)
    c4.insert({mc4.at(0, m).real(), mc4.at(0, m).imag(), mc4.at(1, m).real(), mc4.at(1, m).imag()});
  CHECK(c4.size() == 16);
}

TEST_CASE("rician column distance") {
  // two columns differing in one dimension by tau=1 at kappa=0, N0=1/4:
  // contribution is ln 2
  MotherConstellation mc;
  mc.dims = 2;
  mc.size = 2;
  mc.c = {cd(0, 0), cd(1, 0), cd(0.5, 0), cd(0.5, 0)};
  CHECK(mc_distance(mc, 0.0, 0.25) == doctest::Approx(std::log(2.0)).epsilon(1e-12));

  // AWGN limit: mc_distance / (kappa/(1+kappa)) -> squared MED
  auto src = lp_vec(3, 4);
  auto m2 = permutation_search(src, 2, {});
  double kappa = 1e9;
  double med = med_mc(m2);
  double lim = mc_distance(m2, kappa, 0.1) / (kappa / (1.0 + kappa));
  CHECK(lim == doctest::Approx(med * med).epsilon(1e-3));

  CHECK_THROWS_AS(mc_distance(m2, 1.0, 0.0), std::domain_error);
}

TEST_CASE("euclidean and product column distances") {
  MotherConstellation mc;
  mc.dims = 2;
  mc.size = 2;
  mc.c = {cd(0, 0), cd(1, 0), cd(0, 0), cd(0, 0)};
  CHECK(med_mc(mc) == doctest::Approx(1.0));
  CHECK(mpd_mc(mc) == doctest::Approx(1.0));

  // product distance skips equal coordinates
  MotherConstellation mc2;
  mc2.dims = 2;
  mc2.size = 2;
  mc2.c = {cd(1, 0), cd(1, 0), cd(1, 0), cd(-1, 0)};
  CHECK(mpd_mc(mc2) == doctest::Approx(4.0));

  // cartesian T=2 with |a|=1: nearest tuples differ in one coordinate by 2a
  GamParams gp;
  auto a2 = build_basic_constellation(2, gp);
  auto cm = cartesian_mother(a2, 2);
  CHECK(med_mc(cm) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(mpd_mc(cm) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("permutation search is exact for small sizes") {
  PermSearchOptions opt;

  // overlapped points get separated in the second dimension
  auto src = lp_vec(3, 4);
  auto mc = permutation_search(src, 2, opt);
  CHECK(mc.exhaustive);
  for (int i = 0; i < 4; ++i)
    for (int l = i + 1; l < 4; ++l) {
      if (mc.at(0, i) == mc.at(0, l)) CHECK(mc.at(1, i) != mc.at(1, l));
    }

  // matches the independent brute-force maximizer
  double oracle = brute_force_best(src, opt.kappa, opt.n0);
  CHECK(mc_distance(mc, opt.kappa, opt.n0) == doctest::Approx(oracle).epsilon(1e-12));

  auto src6 = lp_vec(4, 6);
  auto mc6 = permutation_search(src6, 2, opt);
  CHECK(mc_distance(mc6, opt.kappa, opt.n0) ==
        doctest::Approx(brute_force_best(src6, opt.kappa, opt.n0)).epsilon(1e-12));

  // Lemma-2 case short-circuits to the Cartesian arrangement
  auto src22 = lp_vec(2, 4);
  auto mc22 = permutation_search(src22, 2, opt);
  CHECK(mc22.exhaustive);
  std::set<std::pair<double, double>> uniq;
  for (int m = 0; m < 4; ++m) uniq.insert({mc22.at(0, m).real(), mc22.at(0, m).imag()});
  CHECK(uniq.size() == 2);

  // columns of every result are pairwise distinct
  for (const auto* m2 : {&mc, &mc6, &mc22}) {
    for (int i = 0; i < m2->size; ++i)
      for (int l = i + 1; l < m2->size; ++l) {
        bool same = true;
        for (int n = 0; n < m2->dims; ++n) same = same && (m2->at(n, i) == m2->at(n, l));
        CHECK_FALSE(same);
      }
  }
}

TEST_CASE("swap-descent search on larger alphabets") {
  PermSearchOptions opt;
  opt.restarts = 4;
  auto src = lp_vec(9, 16);
  auto mc = permutation_search(src, 2, opt);
  CHECK_FALSE(mc.exhaustive);
  CHECK(mc.size == 16);
  // unique decodability
  for (int i = 0; i < 16; ++i)
    for (int l = i + 1; l < 16; ++l) {
      bool same = mc.at(0, i) == mc.at(0, l) && mc.at(1, i) == mc.at(1, l);
      CHECK_FALSE(same);
    }
  // the identity stack repeats columns (overlaps land on themselves), the
  // search must strictly beat its zero metric
  std::vector<int> ident(16);
  std::iota(ident.begin(), ident.end(), 0);
  auto stacked = apply_permutations(src, {ident, ident});
  CHECK(mc_distance(mc, opt.kappa, opt.n0) > mc_distance(stacked, opt.kappa, opt.n0));
}
