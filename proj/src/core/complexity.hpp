#pragma once

#include <cstdint>

namespace lpscma {

struct OpCounts {
  long long n_mult = 0;
  long long n_add = 0;
};

struct MpaParams {
  int t = 0;     // distinct projected values per dimension
  int d_f = 0;   // colliding users per resource
  int n = 0;     // nonzero dimensions per codeword
  int j = 0;     // users
  int i_t = 0;   // decoder iterations
};

// Closed-form operation counts of message passing decoding:
//   N_m = [(d_f+3) T^d_f N + (N-2) T N] J I_t + T (N-1) J
//   N_a = [(d_f+1) T^d_f N + (T-1) N + (T^(d_f-1) - 1) T N] J I_t
OpCounts mpa_op_counts(const MpaParams& p);

struct ComplexityReport {
  MpaParams lp;
  MpaParams baseline;
  OpCounts lp_counts;
  OpCounts baseline_counts;
  double crr_mult = 0.0;  // 1 - lp/baseline
  double crr_add = 0.0;
};

ComplexityReport crr(const MpaParams& lp, const MpaParams& baseline);

}  // namespace lpscma
