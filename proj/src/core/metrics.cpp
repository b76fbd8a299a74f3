#include "core/metrics.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "core/parallel.hpp"
#include "core/rician.hpp"
#include "core/rng.hpp"

namespace lpscma {

double rician_pair_distance(const std::vector<double>& tau, double kappa, double n0) {
  if (n0 <= 0.0) throw std::domain_error("rician_pair_distance: N0 must be > 0");
  if (kappa < 0.0) throw std::domain_error("rician_pair_distance: kappa must be >= 0");
  double acc = 0.0;
  for (double t : tau) {
    if (t < 0.0) throw std::domain_error("rician_pair_distance: tau must be >= 0");
    acc += rician_d2_sum_term(t, kappa, n0);
  }
  return acc;
}

double pep_chernoff(double d2, double n0) {
  if (n0 <= 0.0) throw std::domain_error("pep_chernoff: N0 must be > 0");
  return 0.5 * std::exp(-d2 / (4.0 * n0));
}

double pep_general(const std::vector<double>& tau, double kappa, double n0, const QBoundParams& qb) {
  if (n0 <= 0.0) throw std::domain_error("pep_general: N0 must be > 0");
  if (qb.a.size() != qb.b.size() || qb.a.empty())
    throw std::invalid_argument("pep_general: a/b lists must be non-empty and equally sized");
  double acc = 0.0;
  for (size_t i = 0; i < qb.a.size(); ++i) {
    if (qb.a[i] <= 0.0 || qb.b[i] <= 0.0) throw std::invalid_argument("pep_general: a_i, b_i must be > 0");
    double prod = qb.a[i];
    for (double t : tau) {
      if (t < 0.0) throw std::domain_error("pep_general: tau must be >= 0");
      double s = qb.b[i] * t / (2.0 * n0);
      prod *= (1.0 + kappa) / (1.0 + kappa + s) * std::exp(-kappa * s / (1.0 + kappa + s));
    }
    acc += prod;
  }
  return acc;
}

uint64_t superimposed_count(const CodebookSet& cbs) {
  uint64_t n = 1;
  for (int j = 0; j < cbs.J; ++j) {
    if (n > (uint64_t(1) << 58) / cbs.M) throw std::domain_error("superimposed_count: M^J overflows");
    n *= static_cast<uint64_t>(cbs.M);
  }
  return n;
}

namespace {

// superimposed codeword for tuple index (user 0 = least significant digit);
// per-resource sums run in ascending user order
void superimpose(const CodebookSet& cbs, uint64_t idx, cd* w) {
  for (int k = 0; k < cbs.K; ++k) w[k] = cd(0.0, 0.0);
  uint64_t rest = idx;
  for (int j = 0; j < cbs.J; ++j) {
    int m = static_cast<int>(rest % cbs.M);
    rest /= cbs.M;
    for (int k : cbs.fg.resources_of[j]) w[k] += cbs.user_at(j, k, m);
  }
}

struct PointTable {
  std::vector<cd> w;  // n x K
  std::vector<uint64_t> idx;
  int k = 0;
  int64_t n() const { return static_cast<int64_t>(idx.size()); }
};

PointTable build_all_points(const CodebookSet& cbs, uint64_t n_total) {
  PointTable t;
  t.k = cbs.K;
  t.idx.resize(n_total);
  t.w.resize(n_total * cbs.K);
  for (uint64_t i = 0; i < n_total; ++i) {
    t.idx[i] = i;
    superimpose(cbs, i, &t.w[i * cbs.K]);
  }
  return t;
}

PointTable build_sampled_points(const CodebookSet& cbs, uint64_t n_total, int q, CounterRng rng) {
  PointTable t;
  t.k = cbs.K;
  uint64_t want = std::min<uint64_t>(q, n_total);
  if (want == n_total) {
    return build_all_points(cbs, n_total);
  }
  // draw distinct tuple indices; duplicates would show up as fake
  // zero-distance pairs
  std::vector<uint64_t> sel;
  sel.reserve(want);
  while (sel.size() < want) {
    size_t need = want - sel.size();
    for (size_t i = 0; i < need; ++i) sel.push_back(rng.next_u64() % n_total);
    std::sort(sel.begin(), sel.end());
    sel.erase(std::unique(sel.begin(), sel.end()), sel.end());
  }
  t.idx = std::move(sel);
  t.w.resize(t.idx.size() * cbs.K);
  for (size_t i = 0; i < t.idx.size(); ++i) superimpose(cbs, t.idx[i], &t.w[i * cbs.K]);
  return t;
}

// atomic running minimum; pruning against a stale value only skips work, the
// result stays exact
struct AtomicMin {
  std::atomic<double> v{std::numeric_limits<double>::infinity()};
  void update(double x) {
    double cur = v.load(std::memory_order_relaxed);
    while (x < cur && !v.compare_exchange_weak(cur, x, std::memory_order_relaxed)) {
    }
  }
  double get() const { return v.load(std::memory_order_relaxed); }
};

// min over point pairs of sum_k term(|w_i(k)-w_l(k)|^2), with early abort on
// the partial sum (all terms are nonnegative)
template <typename TermFn>
double min_pair_scan(const PointTable& t, TermFn term, AtomicMin& best) {
  const int k = t.k;
  const int64_t n = t.n();
  parallel_chunks(n, [&](int, int64_t b, int64_t e) {
    for (int64_t i = b; i < e; ++i) {
      const cd* wi = &t.w[i * k];
      for (int64_t l = i + 1; l < n; ++l) {
        const cd* wl = &t.w[l * k];
        double limit = best.get();
        double acc = 0.0;
        for (int kk = 0; kk < k; ++kk) {
          acc += term(std::norm(wi[kk] - wl[kk]));
          if (acc >= limit) break;
        }
        if (acc < limit && acc > 0.0) best.update(acc);
        if (acc == 0.0 && t.idx[i] != t.idx[l]) best.update(0.0);
      }
    }
  });
  return best.get();
}

double squared_term(double tau) { return tau; }

}  // namespace

bool product_structured(const CodebookSet& cbs) {
  for (int j = 0; j < cbs.J; ++j) {
    const auto& rows = cbs.fg.resources_of[j];
    std::vector<std::vector<cd>> vals(rows.size());
    std::vector<std::vector<int>> proj(rows.size(), std::vector<int>(cbs.M));
    size_t combos = 1;
    for (size_t n = 0; n < rows.size(); ++n) {
      for (int m = 0; m < cbs.M; ++m) {
        cd v = cbs.user_at(j, rows[n], m);
        auto it = std::find(vals[n].begin(), vals[n].end(), v);
        if (it == vals[n].end()) {
          vals[n].push_back(v);
          proj[n][m] = static_cast<int>(vals[n].size()) - 1;
        } else {
          proj[n][m] = static_cast<int>(it - vals[n].begin());
        }
      }
      combos *= vals[n].size();
    }
    if (combos != static_cast<size_t>(cbs.M)) return false;
    // injectivity of m -> value tuple together with |tuples| == M gives the
    // full product
    std::vector<bool> seen(combos, false);
    for (int m = 0; m < cbs.M; ++m) {
      size_t key = 0;
      for (size_t n = 0; n < rows.size(); ++n) key = key * vals[n].size() + proj[n][m];
      if (seen[key]) return false;
      seen[key] = true;
    }
  }
  return true;
}

std::vector<std::vector<cd>> sum_constellations(const CodebookSet& cbs) {
  std::vector<std::vector<cd>> out(cbs.K);
  for (int k = 0; k < cbs.K; ++k) {
    std::vector<std::vector<cd>> vals;
    for (int j : cbs.fg.users_at[k]) {
      std::vector<cd> v;
      for (int m = 0; m < cbs.M; ++m) {
        cd x = cbs.user_at(j, k, m);
        if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(x);
      }
      vals.push_back(std::move(v));
    }
    std::vector<cd> sums{cd(0.0, 0.0)};
    for (const auto& v : vals) {
      std::vector<cd> next;
      next.reserve(sums.size() * v.size());
      for (const cd& s : sums)
        for (const cd& x : v) next.push_back(s + x);
      sums = std::move(next);
      if (sums.size() > (1u << 22)) throw std::runtime_error("sum_constellations: blowup");
    }
    out[k] = std::move(sums);
  }
  return out;
}

namespace {

// coincident points are genuine collisions of superimposed codewords and
// count as distance zero
double min_pair_sq(const std::vector<cd>& pts) {
  double best = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t l = i + 1; l < pts.size(); ++l) best = std::min(best, std::norm(pts[i] - pts[l]));
  return best;
}

// exact minimum over single-user error events (other users cancel in the
// difference, so only per-user codeword pairs matter)
template <typename TermFn>
double see_min(const CodebookSet& cbs, TermFn term) {
  double best = std::numeric_limits<double>::infinity();
  for (int j = 0; j < cbs.J; ++j) {
    for (int i = 0; i < cbs.M; ++i)
      for (int l = i + 1; l < cbs.M; ++l) {
        double acc = 0.0;
        for (int k : cbs.fg.resources_of[j]) acc += term(std::norm(cbs.user_at(j, k, i) - cbs.user_at(j, k, l)));
        if (acc > 0.0) best = std::min(best, acc);
      }
  }
  return best;
}

template <typename TermFn>
double sampled_rounds_min(const CodebookSet& cbs, TermFn term, const SampleOptions& opt,
                          double init = std::numeric_limits<double>::infinity()) {
  uint64_t n_total = superimposed_count(cbs);
  CounterRng root(opt.seed);
  AtomicMin best;
  best.update(init);
  int rounds = (std::min<uint64_t>(opt.q, n_total) == n_total) ? 1 : opt.t_max;
  for (int r = 0; r < rounds; ++r) {
    PointTable t = build_sampled_points(cbs, n_total, opt.q, root.derive(r));
    min_pair_scan(t, term, best);
  }
  return best.get();
}

}  // namespace

double delta_min(const CodebookSet& cbs, double kappa, double n0, DeltaMode mode,
                 const SampleOptions& opt) {
  if (n0 <= 0.0) throw std::domain_error("delta_min: N0 must be > 0");
  if (kappa < 0.0) throw std::domain_error("delta_min: kappa must be >= 0");
  auto term = [kappa, n0](double tau) { return rician_d2_sum_term(tau, kappa, n0); };
  uint64_t n_total = superimposed_count(cbs);
  if (mode == DeltaMode::kExact) {
    if (n_total > static_cast<uint64_t>(opt.exact_cap))
      throw std::domain_error(
          "delta_min: exact enumeration needs M^J <= " + std::to_string(opt.exact_cap) +
          "; use the monte-carlo mode or raise the cap");
    PointTable t = build_all_points(cbs, n_total);
    AtomicMin best;
    return min_pair_scan(t, term, best);
  }
  return sampled_rounds_min(cbs, term, opt);
}

double med_superimposed(const CodebookSet& cbs, const SampleOptions& opt) {
  if (product_structured(cbs)) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : sum_constellations(cbs)) best = std::min(best, min_pair_sq(s));
    return std::sqrt(best);
  }
  uint64_t n_total = superimposed_count(cbs);
  if (n_total <= static_cast<uint64_t>(opt.exact_cap)) {
    PointTable t = build_all_points(cbs, n_total);
    AtomicMin best;
    return std::sqrt(min_pair_scan(t, squared_term, best));
  }
  double see = see_min(cbs, squared_term);
  return std::sqrt(sampled_rounds_min(cbs, squared_term, opt, see));
}

double med_sampled_pairs(const CodebookSet& cbs, long long pairs, uint64_t seed) {
  uint64_t n_total = superimposed_count(cbs);
  CounterRng root(seed);
  AtomicMin best;
  parallel_chunks(pairs, [&](int chunk, int64_t b, int64_t e) {
    CounterRng rng = root.derive(chunk);
    std::vector<cd> wi(cbs.K), wl(cbs.K);
    for (int64_t s = b; s < e; ++s) {
      uint64_t i = rng.next_u64() % n_total;
      uint64_t l = rng.next_u64() % n_total;
      if (i == l) continue;
      superimpose(cbs, i, wi.data());
      superimpose(cbs, l, wl.data());
      double acc = 0.0;
      for (int k = 0; k < cbs.K; ++k) acc += std::norm(wi[k] - wl[k]);
      if (acc > 0.0) best.update(acc);
    }
  });
  return std::sqrt(best.get());
}

DeltaLb delta_lb(const CodebookSet& cbs, double kappa, double n0, const SampleOptions& opt) {
  if (n0 <= 0.0) throw std::domain_error("delta_lb: N0 must be > 0");
  DeltaLb out;
  auto d2term = [kappa, n0](double tau) { return rician_d2_term(tau, kappa, n0); };
  out.d2_min = see_min(cbs, d2term);
  if (kappa == 0.0) {
    out.d1_min = 0.0;  // d1 vanishes term-wise without a LoS component
  } else {
    auto d1term = [kappa, n0](double tau) { return rician_d1_term(tau, kappa, n0); };
    out.d1_min = sampled_rounds_min(cbs, d1term, opt);
  }
  out.value = out.d1_min + out.d2_min;
  return out;
}

double mpd_codebook(const CodebookSet& cbs) {
  double best = std::numeric_limits<double>::infinity();
  for (int j = 0; j < cbs.J; ++j)
    for (int i = 0; i < cbs.M; ++i)
      for (int l = i + 1; l < cbs.M; ++l) {
        double prod = 1.0;
        bool any = false;
        for (int k = 0; k < cbs.K; ++k) {
          cd d = cbs.user_at(j, k, i) - cbs.user_at(j, k, l);
          if (d != cd(0.0, 0.0)) {
            prod *= std::norm(d);
            any = true;
          }
        }
        best = std::min(best, any ? prod : 0.0);
      }
  return best;
}

AberBound aber_union_bound(const CodebookSet& cbs, double kappa, double n0,
                           const SampleOptions& opt) {
  if (n0 <= 0.0) throw std::domain_error("aber_union_bound: N0 must be > 0");
  uint64_t n_total = superimposed_count(cbs);
  const int bits = cbs.bits_per_symbol();
  const double denom = static_cast<double>(n_total) * cbs.J * bits;

  auto tuple_bits = [&](uint64_t idx, int* m) {
    for (int j = 0; j < cbs.J; ++j) {
      m[j] = static_cast<int>(idx % cbs.M);
      idx /= cbs.M;
    }
  };
  auto pair_term = [&](const cd* wi, const cd* wl, const int* mi, const int* ml) {
    int ne = 0;
    for (int j = 0; j < cbs.J; ++j)
      ne += std::popcount(cbs.users[j].labels[mi[j]] ^ cbs.users[j].labels[ml[j]]);
    if (ne == 0) return 0.0;
    double d2 = 0.0;
    for (int k = 0; k < cbs.K; ++k) d2 += rician_d2_sum_term(std::norm(wi[k] - wl[k]), kappa, n0);
    return ne * pep_chernoff(d2, n0);
  };

  AberBound out;
  if (n_total <= static_cast<uint64_t>(opt.exact_cap)) {
    PointTable t = build_all_points(cbs, n_total);
    std::vector<int> tuples(n_total * cbs.J);
    for (uint64_t i = 0; i < n_total; ++i) tuple_bits(i, &tuples[i * cbs.J]);
    int chunks = num_chunks(t.n());
    std::vector<double> partial(std::max(chunks, 1), 0.0);
    parallel_chunks(t.n(), [&](int c, int64_t b, int64_t e) {
      double acc = 0.0;
      for (int64_t i = b; i < e; ++i)
        for (int64_t l = 0; l < t.n(); ++l) {
          if (l == i) continue;
          acc += pair_term(&t.w[i * cbs.K], &t.w[l * cbs.K], &tuples[i * cbs.J], &tuples[l * cbs.J]);
        }
      partial[c] = acc;
    });
    double total = 0.0;
    for (double p : partial) total += p;
    out.value = total / denom;
    out.exact = true;
    return out;
  }

  // sampled ordered pairs with the unbiased total-count scale
  const int64_t samples = static_cast<int64_t>(opt.q) * opt.t_max;
  CounterRng root(opt.seed);
  int chunks = num_chunks(samples);
  std::vector<double> sum(std::max(chunks, 1), 0.0), sumsq(std::max(chunks, 1), 0.0);
  std::vector<int64_t> cnt(std::max(chunks, 1), 0);
  parallel_chunks(samples, [&](int c, int64_t b, int64_t e) {
    CounterRng rng = root.derive(c);
    std::vector<cd> wi(cbs.K), wl(cbs.K);
    std::vector<int> mi(cbs.J), ml(cbs.J);
    for (int64_t s = b; s < e; ++s) {
      uint64_t i = rng.next_u64() % n_total;
      uint64_t l = rng.next_u64() % n_total;
      if (i == l) continue;
      superimpose(cbs, i, wi.data());
      superimpose(cbs, l, wl.data());
      tuple_bits(i, mi.data());
      tuple_bits(l, ml.data());
      double v = pair_term(wi.data(), wl.data(), mi.data(), ml.data());
      sum[c] += v;
      sumsq[c] += v * v;
      cnt[c]++;
    }
  });
  double s1 = 0.0, s2 = 0.0;
  int64_t n = 0;
  for (size_t c = 0; c < sum.size(); ++c) {
    s1 += sum[c];
    s2 += sumsq[c];
    n += cnt[c];
  }
  double mean = s1 / n;
  double var = std::max(0.0, s2 / n - mean * mean);
  double pairs_total = static_cast<double>(n_total) * (static_cast<double>(n_total) - 1.0);
  out.value = mean * pairs_total / denom;
  out.std_error = std::sqrt(var / n) * pairs_total / denom;
  out.exact = false;
  return out;
}

double codebook_eb(const CodebookSet& cbs) { return cbs.mean_user_energy() / cbs.bits_per_symbol(); }

double n0_from_ebn0_db(const CodebookSet& cbs, double ebn0_db) {
  return codebook_eb(cbs) * std::pow(10.0, -ebn0_db / 10.0);
}

std::optional<bool> power_imbalance_holds(const CodebookSet& cbs) {
  const auto& e = cbs.meta.energies;
  const double tol = 1e-9;
  if (cbs.overload == 150 && e.size() == 3) return std::abs(e[0] + e[2] - 2.0 * e[1]) > tol;
  if (cbs.overload == 200 && e.size() == 4) return std::abs(e[0] + e[3] - (e[1] + e[2])) > tol;
  return std::nullopt;
}

}  // namespace lpscma
