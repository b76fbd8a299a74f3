#include "core/complexity.hpp"

#include <stdexcept>

namespace lpscma {

namespace {

long long ipow(long long base, int exp) {
  long long r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

}  // namespace

OpCounts mpa_op_counts(const MpaParams& p) {
  if (p.t < 1 || p.d_f < 1 || p.n < 1 || p.j < 1 || p.i_t < 0)
    throw std::invalid_argument("mpa_op_counts: parameters must be positive (I_t >= 0)");
  const long long t_df = ipow(p.t, p.d_f);
  const long long t_dfm1 = ipow(p.t, p.d_f - 1);
  OpCounts c;
  c.n_mult = ((p.d_f + 3) * t_df * p.n + static_cast<long long>(p.n - 2) * p.t * p.n) * p.j * p.i_t +
             static_cast<long long>(p.t) * (p.n - 1) * p.j;
  c.n_add = ((p.d_f + 1) * t_df * p.n + static_cast<long long>(p.t - 1) * p.n +
             (t_dfm1 - 1) * p.t * p.n) *
            p.j * p.i_t;
  return c;
}

ComplexityReport crr(const MpaParams& lp, const MpaParams& baseline) {
  ComplexityReport r;
  r.lp = lp;
  r.baseline = baseline;
  r.lp_counts = mpa_op_counts(lp);
  r.baseline_counts = mpa_op_counts(baseline);
  if (r.baseline_counts.n_mult == 0 || r.baseline_counts.n_add == 0)
    throw std::invalid_argument("crr: baseline operation counts must be nonzero");
  r.crr_mult = 1.0 - static_cast<double>(r.lp_counts.n_mult) / r.baseline_counts.n_mult;
  r.crr_add = 1.0 - static_cast<double>(r.lp_counts.n_add) / r.baseline_counts.n_add;
  return r;
}

}  // namespace lpscma
