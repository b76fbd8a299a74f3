#include "core/mother.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "core/rician.hpp"
#include "core/rng.hpp"

namespace lpscma {

MotherConstellation apply_permutations(const Constellation1D& source,
                                       const std::vector<std::vector<int>>& perms) {
  MotherConstellation mc;
  mc.dims = static_cast<int>(perms.size());
  mc.size = source.size();
  mc.source = source;
  mc.perms = perms;
  mc.c.resize(static_cast<size_t>(mc.dims) * mc.size);
  for (int n = 0; n < mc.dims; ++n) {
    if (static_cast<int>(perms[n].size()) != mc.size)
      throw std::invalid_argument("apply_permutations: permutation length mismatch");
    for (int m = 0; m < mc.size; ++m) mc.c[static_cast<size_t>(n) * mc.size + m] = source.points[perms[n][m]];
  }
  return mc;
}

MotherConstellation cartesian_mother(const std::vector<cd>& basic, int dims) {
  const int t = static_cast<int>(basic.size());
  if (dims < 1) throw std::domain_error("cartesian_mother: N must be >= 1");
  long long m_ll = 1;
  for (int n = 0; n < dims; ++n) m_ll *= t;
  if (m_ll > (1 << 20)) throw std::domain_error("cartesian_mother: T^N too large");
  const int m = static_cast<int>(m_ll);

  // source layout: each distinct value followed by its M/T - 1 copies
  Constellation1D src;
  src.distinct = basic;
  const int reps = m / t;
  for (int v = 0; v < t; ++v)
    for (int r = 0; r < reps; ++r) {
      src.points.push_back(basic[v]);
      src.projection_map.push_back(v);
    }

  std::vector<std::vector<int>> perms(dims, std::vector<int>(m));
  std::vector<int> used(t, 0);
  long long stride = 1;
  for (int n = 0; n < dims; ++n) {
    std::fill(used.begin(), used.end(), 0);
    for (int col = 0; col < m; ++col) {
      int v = static_cast<int>((col / stride) % t);
      perms[n][col] = v * reps + used[v]++;
    }
    stride *= t;
  }
  return apply_permutations(src, perms);
}

namespace {

double pair_distance(const MotherConstellation& mc, int i, int l, double kappa, double n0) {
  double acc = 0.0;
  for (int n = 0; n < mc.dims; ++n) {
    double tau = std::norm(mc.at(n, i) - mc.at(n, l));
    acc += rician_d2_sum_term(tau, kappa, n0);
  }
  return acc;
}

double perm_metric(const Constellation1D& source, const std::vector<std::vector<int>>& perms,
                   double kappa, double n0) {
  const int m = source.size();
  const int dims = static_cast<int>(perms.size());
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < m; ++i) {
    for (int l = i + 1; l < m; ++l) {
      double acc = 0.0;
      for (int n = 0; n < dims; ++n) {
        double tau = std::norm(source.points[perms[n][i]] - source.points[perms[n][l]]);
        acc += rician_d2_sum_term(tau, kappa, n0);
      }
      best = std::min(best, acc);
    }
  }
  return best;
}

bool columns_distinct(const MotherConstellation& mc) {
  for (int i = 0; i < mc.size; ++i)
    for (int l = i + 1; l < mc.size; ++l) {
      bool same = true;
      for (int n = 0; n < mc.dims && same; ++n) same = mc.at(n, i) == mc.at(n, l);
      if (same) return false;
    }
  return true;
}

}  // namespace

double mc_distance(const MotherConstellation& mc, double kappa, double n0) {
  if (n0 <= 0.0) throw std::domain_error("mc_distance: N0 must be > 0");
  if (kappa < 0.0) throw std::domain_error("mc_distance: kappa must be >= 0");
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < mc.size; ++i)
    for (int l = i + 1; l < mc.size; ++l) best = std::min(best, pair_distance(mc, i, l, kappa, n0));
  return best;
}

double med_mc(const MotherConstellation& mc) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < mc.size; ++i)
    for (int l = i + 1; l < mc.size; ++l) {
      double acc = 0.0;
      for (int n = 0; n < mc.dims; ++n) acc += std::norm(mc.at(n, i) - mc.at(n, l));
      best = std::min(best, acc);
    }
  return std::sqrt(best);
}

double mpd_mc(const MotherConstellation& mc) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < mc.size; ++i)
    for (int l = i + 1; l < mc.size; ++l) {
      double prod = 1.0;
      bool any = false;
      for (int n = 0; n < mc.dims; ++n) {
        cd d = mc.at(n, i) - mc.at(n, l);
        if (d != cd(0.0, 0.0)) {
          prod *= std::norm(d);
          any = true;
        }
      }
      best = std::min(best, any ? prod : 0.0);
    }
  return best;
}

MotherConstellation permutation_search(const Constellation1D& source, int dims,
                                       const PermSearchOptions& opt) {
  const int m = source.size();
  const int t = source.distinct_count();
  if (dims < 1) throw std::domain_error("permutation_search: N must be >= 1");

  // Lemma-2 case: the Cartesian arrangement is optimal and unique up to
  // relabeling, no search needed
  long long tn = 1;
  for (int n = 0; n < dims; ++n) tn *= t;
  if (tn == m) {
    // only valid when the source repeats every value M/T times
    std::vector<int> counts(t, 0);
    for (int v : source.projection_map) counts[v]++;
    bool uniform = std::all_of(counts.begin(), counts.end(), [&](int c) { return c == m / t; });
    if (uniform) {
      MotherConstellation mc = cartesian_mother(source.distinct, dims);
      mc.exhaustive = true;
      return mc;
    }
  }

  std::vector<std::vector<int>> perms(dims, std::vector<int>(m));
  std::iota(perms[0].begin(), perms[0].end(), 0);

  if (dims == 2 && m <= 8) {
    // exhaustive over the second dimension, lexicographically smallest
    // permutation wins ties (strict improvement keeps the earlier one)
    std::vector<int> p(m);
    std::iota(p.begin(), p.end(), 0);
    std::vector<int> best_p = p;
    double best = -1.0;
    do {
      perms[1] = p;
      double v = perm_metric(source, perms, opt.kappa, opt.n0);
      if (v > best) {
        best = v;
        best_p = p;
      }
    } while (std::next_permutation(p.begin(), p.end()));
    perms[1] = best_p;
    MotherConstellation mc = apply_permutations(source, perms);
    mc.exhaustive = true;
    if (!columns_distinct(mc)) throw std::runtime_error("permutation_search: no uniquely decodable arrangement");
    return mc;
  }

  // swap descent: random restarts, per dimension try all position swaps,
  // keep strictly improving ones, stop when a full sweep stalls
  CounterRng rng_root(opt.seed);
  std::vector<std::vector<int>> best_perms = perms;
  double best = -1.0;
  long evals = 0;
  bool exhausted = false;
  for (int r = 0; r < opt.restarts && !exhausted; ++r) {
    CounterRng rng = rng_root.derive(r);
    std::vector<std::vector<int>> cur = perms;
    for (int n = 1; n < dims; ++n) {
      std::iota(cur[n].begin(), cur[n].end(), 0);
      for (int i = m - 1; i > 0; --i) std::swap(cur[n][i], cur[n][rng.next_below(i + 1)]);
    }
    double cur_v = perm_metric(source, cur, opt.kappa, opt.n0);
    ++evals;
    bool improved = true;
    while (improved && !exhausted) {
      improved = false;
      for (int n = 1; n < dims; ++n) {
        for (int i = 0; i < m; ++i) {
          for (int l = i + 1; l < m; ++l) {
            std::swap(cur[n][i], cur[n][l]);
            double v = perm_metric(source, cur, opt.kappa, opt.n0);
            if (++evals >= opt.budget) exhausted = true;
            if (v > cur_v) {
              cur_v = v;
              improved = true;
            } else {
              std::swap(cur[n][i], cur[n][l]);
            }
            if (exhausted) break;
          }
          if (exhausted) break;
        }
        if (exhausted) break;
      }
    }
    if (cur_v > best) {
      best = cur_v;
      best_perms = cur;
    }
  }
  MotherConstellation mc = apply_permutations(source, best_perms);
  mc.exhaustive = false;
  mc.budget_exhausted = exhausted;
  if (!columns_distinct(mc)) throw std::runtime_error("permutation_search: no uniquely decodable arrangement");
  return mc;
}

}  // namespace lpscma
