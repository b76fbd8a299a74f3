#include <doctest.h>

#include <stdexcept>

#include "core/complexity.hpp"

using namespace lpscma;

TEST_CASE("closed-form operation counts") {
  // hand-substituted values
  CHECK(mpa_op_counts({2, 3, 2, 6, 1}).n_mult == 588);
  CHECK(mpa_op_counts({4, 3, 2, 6, 4}).n_mult == 18456);

  // zero iterations leaves only the projection setup term
  OpCounts z = mpa_op_counts({3, 3, 2, 6, 0});
  CHECK(z.n_mult == 3 * 1 * 6);
  CHECK(z.n_add == 0);

  // strictly increasing in T, I_t and J
  auto nm = [](int t, int it, int j) { return mpa_op_counts({t, 3, 2, j, it}).n_mult; };
  CHECK(nm(3, 2, 6) > nm(2, 2, 6));
  CHECK(nm(3, 3, 6) > nm(3, 2, 6));
  CHECK(nm(3, 2, 7) > nm(3, 2, 6));
  auto na = [](int t, int it, int j) { return mpa_op_counts({t, 3, 2, j, it}).n_add; };
  CHECK(na(3, 2, 6) > na(2, 2, 6));
  CHECK(na(3, 3, 6) > na(3, 2, 6));
  CHECK(na(3, 2, 7) > na(3, 2, 6));

  CHECK_THROWS_AS(mpa_op_counts({0, 3, 2, 6, 1}), std::invalid_argument);
}

TEST_CASE("complexity reduction ratio") {
  // identical parameter sets reduce nothing
  ComplexityReport same = crr({2, 3, 2, 6, 1}, {2, 3, 2, 6, 1});
  CHECK(same.crr_mult == doctest::Approx(0.0));
  CHECK(same.crr_add == doctest::Approx(0.0));

  // one-shot T=2 against a converged full-projection decoder
  ComplexityReport r = crr({2, 3, 2, 6, 1}, {4, 3, 2, 6, 4});
  CHECK(r.lp_counts.n_mult == 588);
  CHECK(r.baseline_counts.n_mult == 18456);
  CHECK(r.crr_mult == doctest::Approx(1.0 - 588.0 / 18456.0).epsilon(1e-12));
  CHECK(r.crr_mult > 0.6);  // comfortably above the headline reduction floor

  // 8-ary low-projection system vs the published full-projection baseline
  ComplexityReport r83 = crr({3, 3, 2, 6, 2}, {8, 3, 2, 6, 4});
  CHECK(r83.crr_mult == doctest::Approx(0.974).epsilon(0.005));
}
