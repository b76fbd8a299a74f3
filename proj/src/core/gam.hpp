#pragma once

#include <vector>

#include "core/types.hpp"

namespace lpscma {

// Spiral constellation parameters. Points live on x_n = c*sqrt(n+rho) *
// exp(i*2*pi*(phi+omega)*n) with c = sqrt(2P/(Np+1)) and omega the golden
// angle in turns.
struct GamParams {
  int num_points = 1;   // Np
  double power = 1.0;   // P, average-power target
  double rho = 0.0;     // amplitude offset, > -1
  double phi = 0.0;     // angle offset in radians, [0, pi/2]

  void validate() const;
};

// Which basic-constellation points get repeated when stretching T distinct
// values to a length-M vector, and how many extra copies each receives.
struct OverlapPlan {
  std::vector<int> points;  // indices into the basic constellation
  std::vector<int> counts;  // extra copies per point, > 0

  bool empty() const { return points.empty(); }
  int total() const;
};

// Length-M one-dimensional constellation with T distinct values. item i of
// projection_map is the index of points[i] among the distinct values.
struct Constellation1D {
  std::vector<cd> points;
  std::vector<cd> distinct;
  std::vector<int> projection_map;

  int size() const { return static_cast<int>(points.size()); }
  int distinct_count() const { return static_cast<int>(distinct.size()); }
};

// n-th spiral point, 1 <= n <= params.num_points.
cd gam_point(int n, const GamParams& params);

// T-point basic constellation: T/2 spiral points closed under negation; odd
// T additionally carries the zero point (appended last).
std::vector<cd> build_basic_constellation(int t, const GamParams& params);

// Deterministic overlap plan: every point starts with floor((M-T)/T) extra
// copies; the zero point absorbs an odd remainder, remaining copy pairs go
// to +-pairs in energy-ascending order. Counts across points differ by at
// most one. Fails when T is even and M-T is odd (no zero point can absorb
// the stray copy without breaking symmetry).
OverlapPlan default_overlap_plan(int t, int m);

// Expand the basic constellation to length M following the plan. Each point
// is emitted immediately followed by its copies; the multiset stays
// symmetric and zero-mean.
Constellation1D build_lp_vector(int t, int m, const OverlapPlan& plan, const GamParams& params);

}  // namespace lpscma
