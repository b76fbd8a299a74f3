#pragma once

#include <cstdint>
#include <vector>

#include "core/codebook.hpp"
#include "core/types.hpp"

namespace lpscma {

// A bit assignment for one user's codebook: labels[m] is the log2(M)-bit
// label of codeword m.
struct Labeling {
  std::vector<uint32_t> labels;
  double cost = 0.0;                 // total Pi (each pair counted once)
  std::vector<double> codeword_cost; // Xi per codeword (full row sums)
  long swap_evals = 0;               // cost evaluations spent in the search
  std::vector<double> trace;         // accepted-cost history
};

// Pairwise exponential weights exp(-d_{i,l}/(4 N0)) with d the Rician
// distance between codewords of a single user. The weights do not depend on
// the labeling, only the Hamming factors do.
std::vector<double> labeling_weights(const CodebookSet& cbs, int user, double kappa, double n0);

// Pi and per-codeword Xi for an explicit label assignment.
Labeling labeling_cost(const CodebookSet& cbs, int user, const std::vector<uint32_t>& labels,
                       double kappa, double n0);

struct BsaOptions {
  int i_max = 20;
  int restarts = 10;
  uint64_t seed = 1;
};

// Binary switching search: start from a random assignment, repeatedly try to
// swap the costliest codeword's label against every other, keep swaps that do
// not increase Pi. Best assignment over restarts wins.
Labeling bsa_label(const CodebookSet& cbs, int user, double kappa, double n0, const BsaOptions& opt);

// Relabel every user in place.
void label_codebook(CodebookSet& cbs, double kappa, double n0, const BsaOptions& opt);

}  // namespace lpscma
