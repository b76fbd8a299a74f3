#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "core/codebook.hpp"
#include "core/rng.hpp"
#include "core/types.hpp"

namespace lpscma {

// Per-resource i.i.d. Rician fading plus complex Gaussian noise. kappa may
// be infinity, meaning a deterministic h = 1 channel.
struct ChannelSpec {
  double kappa = std::numeric_limits<double>::infinity();
  double n0 = 0.01;
};

struct Frame {
  std::vector<int> tx;  // chosen codeword per user
  std::vector<cd> h;    // K fading coefficients (known at the receiver)
  std::vector<cd> y;    // K received samples
};

// Draw one Rician coefficient with unit second moment.
cd draw_fading(double kappa, CounterRng& rng);

// Superimpose all users' codewords, fade and add noise. bits_per_user[j] is
// the label whose codeword user j transmits.
Frame transmit(const CodebookSet& cbs, const std::vector<uint32_t>& bits_per_user,
               const ChannelSpec& ch, CounterRng& rng);

struct DecodeStats {
  int iterations = 0;
  bool converged = false;
  double final_delta = 0.0;  // last max belief change
  long long n_mult = 0;
  long long n_add = 0;
};

struct MpaOptions {
  int max_iters = 10;
  double tol = 1e-5;
};

struct MpaResult {
  std::vector<int> decisions;                    // codeword index per user
  std::vector<std::vector<double>> posteriors;   // per user, length M, sums to 1
  DecodeStats stats;
};

// Message passing over the factor graph, resource updates in the log domain
// with max-normalization. Beliefs start uniform; convergence is declared when
// the largest belief change drops under tol.
MpaResult mpa_decode(const std::vector<cd>& y, const std::vector<cd>& h, const CodebookSet& cbs,
                     double n0, const MpaOptions& opt);

// Identical posteriors, but resource updates enumerate only the distinct
// projected values each user can place on the resource and redistribute the
// result over the codewords sharing a projection.
MpaResult lp_mpa_decode(const std::vector<cd>& y, const std::vector<cd>& h, const CodebookSet& cbs,
                        double n0, const MpaOptions& opt);

struct BerPoint {
  double ebn0_db = 0.0;
  double kappa = 0.0;
  long long frames = 0;
  long long bit_errors = 0;
  double ber = 0.0;
  double ci_low = 0.0;   // Wilson 95% interval
  double ci_high = 0.0;
  double avg_iters = 0.0;
  long long n_mult = 0;
  long long n_add = 0;
  uint64_t seed = 0;
};

struct BerOptions {
  std::vector<double> ebn0_db;
  std::vector<double> kappas;
  long long frames = 10000;
  int max_iters = 10;
  double tol = 1e-5;
  bool use_lp = false;
  uint64_t seed = 1;
};

// Frame-parallel sweep over the (Eb/N0, kappa) grid; per-frame substreams
// keep results independent of the thread schedule.
std::vector<BerPoint> ber_sweep(const CodebookSet& cbs, const BerOptions& opt);

}  // namespace lpscma
