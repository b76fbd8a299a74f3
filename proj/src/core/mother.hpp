#pragma once

#include <vector>

#include "core/gam.hpp"
#include "core/types.hpp"

namespace lpscma {

// N x M multidimensional mother constellation. Row n is a permutation of the
// shared one-dimensional source vector; columns are the M codepoints and must
// stay pairwise distinct.
struct MotherConstellation {
  int dims = 0;  // N
  int size = 0;  // M
  std::vector<cd> c;  // row-major, dims x size
  Constellation1D source;
  std::vector<std::vector<int>> perms;  // perms[n][m]: source index at column m
  bool exhaustive = false;              // search enumerated every candidate
  bool budget_exhausted = false;

  cd at(int n, int m) const { return c[static_cast<size_t>(n) * size + m]; }
};

struct PermSearchOptions {
  double kappa = 20.0;
  double n0 = 0.0125;  // from Eb/N0 = 16 dB at 2 bits/symbol
  int restarts = 8;
  long budget = 200000;  // metric evaluations for the swap search
  uint64_t seed = 1;
};

// Cartesian construction for M = T^N: columns enumerate all N-tuples over the
// basic constellation, first dimension varying fastest.
MotherConstellation cartesian_mother(const std::vector<cd>& basic, int dims);

// Minimum over column pairs of the Rician distance summed per dimension.
double mc_distance(const MotherConstellation& mc, double kappa, double n0);

// Minimum Euclidean column distance (unsquared norm).
double med_mc(const MotherConstellation& mc);

// Minimum product distance: product of squared per-dimension differences
// restricted to dimensions where the columns differ.
double mpd_mc(const MotherConstellation& mc);

// Pick per-dimension permutations maximizing mc_distance. Dimension 1 is
// fixed to identity. Exhaustive (and exact) for N == 2, M <= 8; pairwise
// swap descent with restarts otherwise. M = T^N short-circuits to the
// Cartesian arrangement.
MotherConstellation permutation_search(const Constellation1D& source, int dims,
                                       const PermSearchOptions& opt);

// Arrange an explicit permutation set (used by the search and by tests).
MotherConstellation apply_permutations(const Constellation1D& source,
                                       const std::vector<std::vector<int>>& perms);

}  // namespace lpscma
