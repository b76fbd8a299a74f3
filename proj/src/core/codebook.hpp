#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/mother.hpp"
#include "core/types.hpp"

namespace lpscma {

// Sparse binary resource/user indicator with the derived index sets.
struct FactorGraph {
  int resources = 0;  // K
  int users = 0;      // J
  std::vector<uint8_t> f;  // row-major K x J
  std::vector<std::vector<int>> users_at;      // per resource k
  std::vector<std::vector<int>> resources_of;  // per user j
  int row_weight = 0;  // d_f
  int col_weight = 0;  // N

  uint8_t at(int k, int j) const { return f[static_cast<size_t>(k) * users + j]; }
  static FactorGraph from_matrix(int resources, int users, const std::vector<uint8_t>& f);
};

// Operator index per (resource, user): 0 where F is zero, else 1..d_f
// telling which z_i scales that user's row.
struct SignaturePattern {
  int resources = 0;
  int users = 0;
  std::vector<int> op;  // row-major K x J

  int at(int k, int j) const { return op[static_cast<size_t>(k) * users + j]; }
};

// The d_f energy/phase operator pairs plus the spiral shape parameters they
// were optimized with. z_i = E_i * exp(i*theta_i).
struct OperatorParams {
  std::vector<double> energies;  // E_1..E_df, sum = M*J/K
  std::vector<double> thetas;    // theta_1..theta_df, theta_1 pinned to 0
  double rho = 0.0;
  double phi = 0.0;

  cd z(int i) const;  // 1-based operator index
};

struct DesignMeta {
  int t = 0;
  double kappa = 0.0;
  double ebn0_db = 0.0;
  double rho = 0.0;
  double phi = 0.0;
  std::vector<double> energies;
  std::vector<double> thetas;
};

struct UserCodebook {
  std::vector<cd> x;             // row-major K x M
  std::vector<uint32_t> labels;  // labels[m] = bit label of codeword m

  cd at(int k, int m, int M) const { return x[static_cast<size_t>(k) * M + m]; }
};

struct CodebookSet {
  int M = 0;
  int K = 0;
  int J = 0;
  int N = 0;
  int overload = 0;  // percent, 150 or 200
  FactorGraph fg;
  std::vector<UserCodebook> users;
  DesignMeta meta;
  std::string extra_json;  // preserved top-level "config" block, empty if none

  cd user_at(int j, int k, int m) const { return users[j].at(k, m, M); }
  int bits_per_symbol() const;
  // mean codeword energy per user, averaged over users
  double mean_user_energy() const;
  void scale(double factor);
  void validate() const;  // structural invariants (support, labels, weights)
};

// The two built-in systems: 4x6 (150%) and 5x10 (200%).
FactorGraph builtin_factor_graph(int overload_percent);
SignaturePattern builtin_signature(int overload_percent);

// x_j = V_j * Lambda_j * C_MC with the operator of each occupied resource
// taken from the signature pattern. Labels start out as natural binary.
CodebookSet assemble(const MotherConstellation& mc, const OperatorParams& params,
                     const FactorGraph& fg, const SignaturePattern& sig, int overload_percent);

// Rescale to unit mean per-user symbol energy (the convention the metrics
// and the Eb/N0 mapping assume).
void normalize_power(CodebookSet& cbs);

}  // namespace lpscma
