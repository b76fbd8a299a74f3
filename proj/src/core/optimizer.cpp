#include "core/optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "core/parallel.hpp"
#include "core/rng.hpp"

namespace lpscma {

namespace {

double energy_sum_target(const DesignSpec& spec) {
  return static_cast<double>(spec.m) * spec.fg.users / spec.fg.resources;
}

GamParams gam_for(const DesignSpec& spec, const OperatorParams& p) {
  GamParams g;
  g.power = 1.0;
  g.rho = p.rho;
  g.phi = p.phi;
  g.num_points = std::max(1, spec.t / 2);
  return g;
}

}  // namespace

CodebookSet build_candidate(const DesignSpec& spec, const OperatorParams& params) {
  Constellation1D src = build_lp_vector(spec.t, spec.m, spec.plan, gam_for(spec, params));
  MotherConstellation mc = apply_permutations(src, spec.perms);
  CodebookSet cbs = assemble(mc, params, spec.fg, spec.sig, spec.overload);
  cbs.meta.kappa = spec.kappa;
  cbs.meta.ebn0_db = spec.ebn0_db;
  normalize_power(cbs);
  return cbs;
}

double objective_p21(const OperatorParams& params, const DesignSpec& spec) {
  std::vector<cd> basic = build_basic_constellation(spec.t, gam_for(spec, params));
  const int df = spec.fg.row_weight;

  // per-resource sum constellation z_1 A_T + ... + z_df A_T
  std::vector<cd> sums{cd(0.0, 0.0)};
  for (int i = 1; i <= df; ++i) {
    cd zi = params.z(i);
    std::vector<cd> next;
    next.reserve(sums.size() * basic.size());
    for (const cd& s : sums)
      for (const cd& a : basic) next.push_back(s + zi * a);
    sums = std::move(next);
  }
  // coincident sum points mean two superimposed codewords collide, which the
  // search must treat as distance zero
  double min_sq = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < sums.size(); ++i)
    for (size_t l = i + 1; l < sums.size(); ++l) min_sq = std::min(min_sq, std::norm(sums[i] - sums[l]));
  if (!std::isfinite(min_sq)) return 0.0;

  // normalize to unit mean user energy so the distance is scale-free
  double p_a = 0.0;
  for (const cd& a : basic) p_a += std::norm(a);
  p_a /= basic.size();
  double e_sq = 0.0;
  for (int k = 0; k < spec.fg.resources; ++k)
    for (int j : spec.fg.users_at[k]) e_sq += std::norm(params.z(spec.sig.at(k, j)));
  double mean_user_energy = p_a * e_sq / spec.fg.users;
  if (mean_user_energy <= 0.0) return 0.0;
  return std::sqrt(min_sq / mean_user_energy);
}

double objective_p22(const OperatorParams& params, const DesignSpec& spec) {
  CodebookSet cbs = build_candidate(spec, params);
  SampleOptions so;
  so.q = spec.q;
  so.t_max = spec.t_max;
  so.seed = spec.noise_seed;  // common random numbers: deterministic surrogate
  double n0 = n0_from_ebn0_db(cbs, spec.ebn0_db);
  return delta_lb(cbs, spec.kappa, n0, so).value;
}

double evaluate_objective(const OperatorParams& params, const DesignSpec& spec) {
  return spec.kind == ObjectiveKind::kP21 ? objective_p21(params, spec)
                                          : objective_p22(params, spec);
}

namespace {

struct Box {
  int df = 0;
  double e_sum = 0.0;
  double t = 0.0;  // rho upper bound
  int dims() const { return 2 * df + 1; }  // E_1..E_df, theta_2..theta_df, rho, phi
};

OperatorParams decode(const std::vector<double>& x, const Box& box) {
  OperatorParams p;
  p.energies.assign(x.begin(), x.begin() + box.df);
  p.thetas.assign(box.df, 0.0);
  for (int i = 1; i < box.df; ++i) p.thetas[i] = x[box.df + i - 1];
  p.rho = x[2 * box.df - 1];
  p.phi = x[2 * box.df];
  return p;
}

// clip into the box, then renormalize E back onto the scaled simplex
void project(std::vector<double>& x, const Box& box) {
  const double eps = 1e-6;
  double s = 0.0;
  for (int i = 0; i < box.df; ++i) {
    x[i] = std::max(x[i], eps);
    s += x[i];
  }
  double scale = box.e_sum / s;
  for (int i = 0; i < box.df; ++i) x[i] *= scale;
  for (int i = 1; i < box.df; ++i) x[box.df + i - 1] = std::clamp(x[box.df + i - 1], 0.0, kPi);
  x[2 * box.df - 1] = std::clamp(x[2 * box.df - 1], -1.0 + eps, box.t);
  x[2 * box.df] = std::clamp(x[2 * box.df], 0.0, kPi / 2.0);
}

std::vector<double> box_width(const Box& box) {
  std::vector<double> w(box.dims());
  for (int i = 0; i < box.df; ++i) w[i] = box.e_sum;
  for (int i = 1; i < box.df; ++i) w[box.df + i - 1] = kPi;
  w[2 * box.df - 1] = box.t + 1.0;
  w[2 * box.df] = kPi / 2.0;
  return w;
}

struct RestartOutcome {
  double objective = -std::numeric_limits<double>::infinity();
  std::vector<double> x;
  std::vector<double> trace;
};

RestartOutcome run_restart(const DesignSpec& spec, const Box& box, const OptimizeOptions& opt,
                           int restart, const std::vector<std::vector<int>>& strata) {
  CounterRng rng = CounterRng(opt.seed).derive(restart);
  const auto width = box_width(box);

  // latin-hypercube start: per-coordinate stratum assigned by a shared
  // shuffle, jittered inside the stratum
  std::vector<double> x(box.dims());
  for (int d = 0; d < box.dims(); ++d) {
    double lo = 0.0;
    if (d == 2 * box.df - 1) lo = -1.0 + 1e-6;  // rho
    double stratum = (strata[d][restart] + rng.uniform()) / std::max(1, opt.restarts);
    x[d] = lo + stratum * width[d];
  }
  project(x, box);

  RestartOutcome out;
  out.x = x;
  out.objective = evaluate_objective(decode(x, box), spec);
  out.trace.push_back(out.objective);

  std::vector<double> step(width);
  for (double& s : step) s *= 0.25;

  for (int it = 0; it < opt.max_iters; ++it) {
    bool improved = false;
    int best_dim = -1;
    double best_sign = 0.0;
    double best_val = out.objective;
    for (int d = 0; d < box.dims(); ++d) {
      for (double sign : {+1.0, -1.0}) {
        std::vector<double> cand = out.x;
        cand[d] += sign * step[d];
        project(cand, box);
        double v = evaluate_objective(decode(cand, box), spec);
        if (v > best_val) {
          best_val = v;
          best_dim = d;
          best_sign = sign;
          improved = true;
        }
      }
    }
    if (improved) {
      out.x[best_dim] += best_sign * step[best_dim];
      project(out.x, box);
      out.objective = best_val;
    } else {
      for (double& s : step) s *= 0.5;
    }
    out.trace.push_back(out.objective);
  }
  return out;
}

}  // namespace

OptimizationResult optimize(const DesignSpec& spec, const OptimizeOptions& opt) {
  if (spec.t < 2 || spec.t > spec.m) throw std::domain_error("optimize: T must satisfy 2 <= T <= M");
  Box box;
  box.df = spec.fg.row_weight;
  box.e_sum = energy_sum_target(spec);
  box.t = static_cast<double>(spec.t);

  auto t0 = std::chrono::steady_clock::now();
  std::vector<std::vector<int>> strata(box.dims(), std::vector<int>(opt.restarts));
  CounterRng strata_rng = CounterRng(opt.seed).derive(0xfacade);
  for (int d = 0; d < box.dims(); ++d) {
    std::iota(strata[d].begin(), strata[d].end(), 0);
    for (int i = opt.restarts - 1; i > 0; --i)
      std::swap(strata[d][i], strata[d][strata_rng.next_below(i + 1)]);
  }

  std::vector<RestartOutcome> outcomes(opt.restarts);
  parallel_chunks(opt.restarts, [&](int, int64_t b, int64_t e) {
    for (int64_t r = b; r < e; ++r)
      outcomes[r] = run_restart(spec, box, opt, static_cast<int>(r), strata);
  });

  int best = 0;
  for (int r = 1; r < opt.restarts; ++r)
    if (outcomes[r].objective > outcomes[best].objective) best = r;

  OptimizationResult res;
  res.params = decode(outcomes[best].x, box);
  res.objective = outcomes[best].objective;
  res.trace = outcomes[best].trace;
  res.restart_index = best;
  res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

DesignOutput design_pipeline(const DesignOptions& opt) {
  DesignOutput out;
  DesignSpec& spec = out.spec;
  spec.m = opt.m;
  spec.t = opt.t;
  spec.overload = opt.overload;
  spec.kappa = opt.kappa;
  spec.ebn0_db = opt.ebn0_db;
  spec.fg = builtin_factor_graph(opt.overload);
  spec.sig = builtin_signature(opt.overload);
  spec.q = opt.q;
  spec.t_max = opt.t_max;
  spec.noise_seed = opt.seed ^ 0x5eedf00dULL;

  const int n = spec.fg.col_weight;
  int t_floor = static_cast<int>(std::ceil(std::pow(static_cast<double>(opt.m), 1.0 / n) - 1e-9));
  if (opt.t < t_floor || opt.t > opt.m)
    throw std::invalid_argument("design: T violates ceil(M^(1/N)) <= T <= M (need " +
                                std::to_string(t_floor) + " <= T <= " + std::to_string(opt.m) + ")");

  spec.plan = default_overlap_plan(opt.t, opt.m);

  long long tn = 1;
  for (int i = 0; i < n; ++i) tn *= opt.t;
  spec.kind = (tn == opt.m) ? ObjectiveKind::kP21 : ObjectiveKind::kP22;

  // permutations are found once, on the unshifted spiral; the parameter
  // search afterwards keeps them fixed
  GamParams g0;
  g0.num_points = std::max(1, opt.t / 2);
  Constellation1D initial = build_lp_vector(opt.t, opt.m, spec.plan, g0);
  PermSearchOptions ps;
  ps.kappa = opt.kappa;
  int bits = 0;
  while ((1 << bits) < opt.m) ++bits;
  ps.n0 = std::pow(10.0, -opt.ebn0_db / 10.0) / std::max(1, bits);
  ps.restarts = opt.perm_restarts;
  ps.budget = opt.perm_budget;
  ps.seed = opt.seed ^ 0x9e37ULL;
  MotherConstellation mc = permutation_search(initial, n, ps);
  spec.perms = mc.perms;

  OptimizeOptions oo;
  oo.max_iters = opt.opt_iters > 0 ? opt.opt_iters : (opt.overload == 200 ? 25 : 30);
  oo.restarts = opt.restarts;
  oo.seed = opt.seed;
  out.opt = optimize(spec, oo);

  out.codebook = build_candidate(spec, out.opt.params);
  out.codebook.meta.t = opt.t;
  out.codebook.meta.kappa = opt.kappa;
  out.codebook.meta.ebn0_db = opt.ebn0_db;

  BsaOptions bsa;
  bsa.i_max = opt.label_i_max;
  bsa.restarts = opt.label_restarts;
  bsa.seed = opt.seed ^ 0xb17ULL;
  double n0 = n0_from_ebn0_db(out.codebook, opt.ebn0_db);
  label_codebook(out.codebook, opt.kappa, n0, bsa);
  return out;
}

}  // namespace lpscma
