#pragma once

#include <cstdint>
#include <vector>

#include "core/codebook.hpp"
#include "core/gam.hpp"
#include "core/labeling.hpp"
#include "core/metrics.hpp"
#include "core/mother.hpp"

namespace lpscma {

enum class ObjectiveKind { kP21, kP22 };

// Everything that stays fixed while (E, theta, rho, phi) are searched: the
// system structure, the overlap plan and the permutations found beforehand.
struct DesignSpec {
  int m = 4;
  int t = 2;
  int overload = 150;
  double kappa = 20.0;
  double ebn0_db = 16.0;
  FactorGraph fg;
  SignaturePattern sig;
  OverlapPlan plan;
  std::vector<std::vector<int>> perms;
  ObjectiveKind kind = ObjectiveKind::kP21;
  // sampling budget for the lower-bound objective
  int q = 1000;
  int t_max = 2;
  uint64_t noise_seed = 99;  // common random numbers across evaluations
};

struct OptimizeOptions {
  int max_iters = 30;  // pattern-search sweeps per restart
  int restarts = 20;
  uint64_t seed = 1;
};

struct OptimizationResult {
  OperatorParams params;
  double objective = 0.0;
  std::vector<double> trace;  // best value after each accepted sweep
  int restart_index = 0;
  double wall_seconds = 0.0;  // informational only, never serialized
};

// Rebuild the candidate codebook for a parameter point: spiral constellation,
// fixed permutations, operators, unit-power normalization. Labels stay
// natural binary until the labeling stage.
CodebookSet build_candidate(const DesignSpec& spec, const OperatorParams& params);

// Normalized minimum distance of the per-resource sum constellation
// (T = M^(1/N) family).
double objective_p21(const OperatorParams& params, const DesignSpec& spec);

// Normalized distance lower bound d1_min + d2_min of the assembled codebook.
double objective_p22(const OperatorParams& params, const DesignSpec& spec);

double evaluate_objective(const OperatorParams& params, const DesignSpec& spec);

// Multi-start projected pattern search over (E, theta_2.., rho, phi) with
// theta_1 pinned to zero and E kept on the scaled simplex sum(E) = MJ/K.
OptimizationResult optimize(const DesignSpec& spec, const OptimizeOptions& opt);

struct DesignOptions {
  int m = 4;
  int t = 2;
  int overload = 150;
  double kappa = 20.0;
  double ebn0_db = 16.0;
  int opt_iters = 0;  // 0 = per-overload default (30 at 150%, 25 at 200%)
  int restarts = 20;
  int q = 1000;
  int t_max = 2;
  int perm_restarts = 8;
  long perm_budget = 200000;
  int label_i_max = 20;
  int label_restarts = 10;
  uint64_t seed = 1;
};

struct DesignOutput {
  CodebookSet codebook;
  OptimizationResult opt;
  DesignSpec spec;
};

// Full construction: basic constellation -> overlap vector -> permutations ->
// operator optimization (sum-constellation or lower-bound branch) -> bit
// labeling. Deterministic for a fixed seed.
DesignOutput design_pipeline(const DesignOptions& opt);

}  // namespace lpscma
