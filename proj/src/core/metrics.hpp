#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/codebook.hpp"
#include "core/types.hpp"

namespace lpscma {

// Q(x) <= sum_i a_i * exp(-b_i x^2)
struct QBoundParams {
  std::vector<double> a{0.5};
  std::vector<double> b{0.5};
};

// Rician pairwise distance d^2 for a per-resource squared-difference profile.
double rician_pair_distance(const std::vector<double>& tau, double kappa, double n0);

// Chernoff pairwise error bound 0.5 * exp(-d^2 / (4 N0)).
double pep_chernoff(double d2, double n0);

// General PEP bound through the fading moment generating function; reduces
// to pep_chernoff for a = b = 1/2.
double pep_general(const std::vector<double>& tau, double kappa, double n0, const QBoundParams& qb);

enum class DeltaMode { kExact, kMonteCarlo };

struct SampleOptions {
  long long exact_cap = 4096;  // largest M^J enumerated exhaustively
  int q = 10000;               // points per sampling round
  int t_max = 20;              // rounds
  uint64_t seed = 1;
};

// Minimum Rician distance over superimposed codeword pairs. Exact mode
// refuses when M^J exceeds the cap; Monte-Carlo mode is an upper estimate
// (min over sampled subsets).
double delta_min(const CodebookSet& cbs, double kappa, double n0, DeltaMode mode,
                 const SampleOptions& opt);

// Minimum Euclidean distance (unsquared) of the superimposed constellation.
// Product-structured codebooks go through the per-resource sum constellation;
// small codebooks are enumerated; everything else combines the exact
// single-user-error scan with sampling rounds.
double med_superimposed(const CodebookSet& cbs, const SampleOptions& opt = {});

// Plain uniform pair-sampling estimate of the superimposed MED (unsquared).
double med_sampled_pairs(const CodebookSet& cbs, long long pairs, uint64_t seed);

// True when every user's per-resource value sets form a full product (the
// T = M^(1/N) family), i.e. the superimposed constellation factorizes per
// resource.
bool product_structured(const CodebookSet& cbs);

// Per-resource superimposed sum constellation; only valid when
// product_structured() holds.
std::vector<std::vector<cd>> sum_constellations(const CodebookSet& cbs);

struct DeltaLb {
  double value = 0.0;
  double d1_min = 0.0;  // Monte-Carlo estimate (exact when M^J fits a round)
  double d2_min = 0.0;  // exact single-user reduction
};

DeltaLb delta_lb(const CodebookSet& cbs, double kappa, double n0, const SampleOptions& opt);

// Minimum product distance over per-user codeword pairs.
double mpd_codebook(const CodebookSet& cbs);

struct AberBound {
  double value = 0.0;
  double std_error = 0.0;  // zero in exact mode
  bool exact = true;
};

// Union bound on the average bit error rate with Chernoff pairwise terms.
// Falls back to pair sampling with a reported standard error above the cap.
AberBound aber_union_bound(const CodebookSet& cbs, double kappa, double n0,
                           const SampleOptions& opt = {});

// Eb for the codebook under the unit-average-power convention.
double codebook_eb(const CodebookSet& cbs);
double n0_from_ebn0_db(const CodebookSet& cbs, double ebn0_db);

// Whether the signature magnitudes satisfy the power-imbalance guidance for
// the overload's builtin pattern; nullopt when operator data is absent.
std::optional<bool> power_imbalance_holds(const CodebookSet& cbs);

uint64_t superimposed_count(const CodebookSet& cbs);  // M^J

}  // namespace lpscma
