#include "core/simulator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "core/metrics.hpp"
#include "core/parallel.hpp"

namespace lpscma {

cd draw_fading(double kappa, CounterRng& rng) {
  if (std::isinf(kappa)) return cd(1.0, 0.0);
  double mean = std::sqrt(kappa / (1.0 + kappa));
  return cd(mean, 0.0) + rng.complex_gaussian(1.0 / (1.0 + kappa));
}

Frame transmit(const CodebookSet& cbs, const std::vector<uint32_t>& bits_per_user,
               const ChannelSpec& ch, CounterRng& rng) {
  if (static_cast<int>(bits_per_user.size()) != cbs.J)
    throw std::invalid_argument("transmit: need one bit label per user");
  Frame f;
  f.tx.resize(cbs.J);
  for (int j = 0; j < cbs.J; ++j) {
    int m = -1;
    for (int i = 0; i < cbs.M; ++i)
      if (cbs.users[j].labels[i] == bits_per_user[j]) {
        m = i;
        break;
      }
    if (m < 0) throw std::invalid_argument("transmit: bit label out of range");
    f.tx[j] = m;
  }
  f.h.resize(cbs.K);
  for (int k = 0; k < cbs.K; ++k) f.h[k] = draw_fading(ch.kappa, rng);
  f.y.assign(cbs.K, cd(0.0, 0.0));
  for (int j = 0; j < cbs.J; ++j)
    for (int k : cbs.fg.resources_of[j]) f.y[k] += cbs.user_at(j, k, f.tx[j]);
  for (int k = 0; k < cbs.K; ++k) f.y[k] = f.h[k] * f.y[k] + rng.complex_gaussian(ch.n0);
  return f;
}

namespace {

struct Messages {
  // edge-indexed: per resource k, per local user slot, length M
  std::vector<std::vector<std::vector<double>>> u2r;  // [k][slot][m]
  std::vector<std::vector<std::vector<double>>> r2u;
};

void normalize(std::vector<double>& v, long long& n_mult, long long& n_add) {
  double s = 0.0;
  for (double x : v) s += x;
  n_add += static_cast<long long>(v.size()) - 1;
  if (s <= 0.0) {
    std::fill(v.begin(), v.end(), 1.0 / v.size());
    return;
  }
  double inv = 1.0 / s;
  for (double& x : v) x *= inv;
  n_mult += static_cast<long long>(v.size());
}

// common driver for both decoders; ResourceUpdate fills r2u for one resource
template <typename ResourceUpdate>
MpaResult run_mpa(const std::vector<cd>& y, const std::vector<cd>& h, const CodebookSet& cbs,
                  double n0, const MpaOptions& opt, ResourceUpdate&& resource_update) {
  if (n0 <= 0.0) throw std::domain_error("mpa: N0 must be > 0");
  if (static_cast<int>(y.size()) != cbs.K || static_cast<int>(h.size()) != cbs.K)
    throw std::invalid_argument("mpa: y/h must have K entries");
  const int m = cbs.M;

  Messages msg;
  msg.u2r.resize(cbs.K);
  msg.r2u.resize(cbs.K);
  for (int k = 0; k < cbs.K; ++k) {
    size_t df = cbs.fg.users_at[k].size();
    msg.u2r[k].assign(df, std::vector<double>(m, 1.0 / m));
    msg.r2u[k].assign(df, std::vector<double>(m, 1.0 / m));
  }

  MpaResult res;
  res.posteriors.assign(cbs.J, std::vector<double>(m, 1.0 / m));
  std::vector<std::vector<double>> prev = res.posteriors;
  DecodeStats& st = res.stats;

  for (int it = 1; it <= opt.max_iters; ++it) {
    for (int k = 0; k < cbs.K; ++k) {
      resource_update(k, msg.u2r[k], msg.r2u[k], st);
      for (auto& v : msg.r2u[k]) normalize(v, st.n_mult, st.n_add);
    }

    // variable nodes: product of the other resources' messages
    for (int j = 0; j < cbs.J; ++j) {
      const auto& rows = cbs.fg.resources_of[j];
      for (size_t a = 0; a < rows.size(); ++a) {
        int ka = rows[a];
        int slot_a = -1;
        for (size_t s = 0; s < cbs.fg.users_at[ka].size(); ++s)
          if (cbs.fg.users_at[ka][s] == j) slot_a = static_cast<int>(s);
        auto& out = msg.u2r[ka][slot_a];
        std::fill(out.begin(), out.end(), 1.0);
        for (size_t b = 0; b < rows.size(); ++b) {
          if (b == a) continue;
          int kb = rows[b];
          int slot_b = -1;
          for (size_t s = 0; s < cbs.fg.users_at[kb].size(); ++s)
            if (cbs.fg.users_at[kb][s] == j) slot_b = static_cast<int>(s);
          for (int mm = 0; mm < m; ++mm) out[mm] *= msg.r2u[kb][slot_b][mm];
          st.n_mult += m;
        }
        normalize(out, st.n_mult, st.n_add);
      }
    }

    // beliefs and convergence
    double delta = 0.0;
    for (int j = 0; j < cbs.J; ++j) {
      auto& b = res.posteriors[j];
      std::fill(b.begin(), b.end(), 1.0);
      for (int k : cbs.fg.resources_of[j]) {
        int slot = -1;
        for (size_t s = 0; s < cbs.fg.users_at[k].size(); ++s)
          if (cbs.fg.users_at[k][s] == j) slot = static_cast<int>(s);
        for (int mm = 0; mm < m; ++mm) b[mm] *= msg.r2u[k][slot][mm];
        st.n_mult += m;
      }
      normalize(b, st.n_mult, st.n_add);
      for (int mm = 0; mm < m; ++mm) delta = std::max(delta, std::abs(b[mm] - prev[j][mm]));
    }
    prev = res.posteriors;
    st.iterations = it;
    st.final_delta = delta;
    if (delta < opt.tol) {
      st.converged = true;
      break;
    }
  }

  res.decisions.resize(cbs.J);
  for (int j = 0; j < cbs.J; ++j) {
    int best = 0;
    for (int mm = 1; mm < m; ++mm)
      if (res.posteriors[j][mm] > res.posteriors[j][best]) best = mm;
    res.decisions[j] = best;
  }
  return res;
}

}  // namespace

MpaResult mpa_decode(const std::vector<cd>& y, const std::vector<cd>& h, const CodebookSet& cbs,
                     double n0, const MpaOptions& opt) {
  const int m = cbs.M;
  const double inv_n0 = 1.0 / n0;

  return run_mpa(y, h, cbs, n0, opt,
                 [&](int k, const std::vector<std::vector<double>>& in,
                     std::vector<std::vector<double>>& out, DecodeStats& st) {
                   const auto& users = cbs.fg.users_at[k];
                   const int df = static_cast<int>(users.size());
                   long long combos = 1;
                   for (int i = 0; i < df; ++i) combos *= m;

                   // log-likelihood per combo, then shift by the max to stay
                   // in range when N0 is tiny
                   std::vector<double> loglik(combos);
                   std::vector<int> digits(df, 0);
                   double lmax = -std::numeric_limits<double>::infinity();
                   for (long long c = 0; c < combos; ++c) {
                     cd sum(0.0, 0.0);
                     long long rest = c;
                     for (int i = 0; i < df; ++i) {
                       int mi = static_cast<int>(rest % m);
                       rest /= m;
                       sum += cbs.user_at(users[i], k, mi);
                       st.n_add += 2;
                     }
                     double l = -std::norm(y[k] - h[k] * sum) * inv_n0;
                     st.n_mult += 4 + 2 + 1;  // h*sum, |.|^2, *1/N0
                     st.n_add += 2 + 2 + 1;
                     loglik[c] = l;
                     lmax = std::max(lmax, l);
                   }
                   std::vector<double> g(combos);
                   for (long long c = 0; c < combos; ++c) {
                     g[c] = std::exp(loglik[c] - lmax);
                     st.n_mult += 1;
                     st.n_add += 1;
                   }

                   for (int t = 0; t < df; ++t) std::fill(out[t].begin(), out[t].end(), 0.0);
                   for (long long c = 0; c < combos; ++c) {
                     long long rest = c;
                     digits.assign(df, 0);
                     for (int i = 0; i < df; ++i) {
                       digits[i] = static_cast<int>(rest % m);
                       rest /= m;
                     }
                     for (int t = 0; t < df; ++t) {
                       double p = g[c];
                       for (int i = 0; i < df; ++i) {
                         if (i == t) continue;
                         p *= in[i][digits[i]];
                       }
                       st.n_mult += df - 1;
                       out[t][digits[t]] += p;
                       st.n_add += 1;
                     }
                   }
                 });
}

MpaResult lp_mpa_decode(const std::vector<cd>& y, const std::vector<cd>& h, const CodebookSet& cbs,
                        double n0, const MpaOptions& opt) {
  const int m = cbs.M;
  const double inv_n0 = 1.0 / n0;

  // distinct projected values and the codeword -> value map per edge
  std::vector<std::vector<std::vector<cd>>> vals(cbs.K);
  std::vector<std::vector<std::vector<int>>> proj(cbs.K);
  for (int k = 0; k < cbs.K; ++k) {
    const auto& users = cbs.fg.users_at[k];
    vals[k].resize(users.size());
    proj[k].assign(users.size(), std::vector<int>(m));
    for (size_t i = 0; i < users.size(); ++i) {
      for (int mm = 0; mm < m; ++mm) {
        cd v = cbs.user_at(users[i], k, mm);
        auto it = std::find(vals[k][i].begin(), vals[k][i].end(), v);
        if (it == vals[k][i].end()) {
          vals[k][i].push_back(v);
          proj[k][i][mm] = static_cast<int>(vals[k][i].size()) - 1;
        } else {
          proj[k][i][mm] = static_cast<int>(it - vals[k][i].begin());
        }
      }
    }
  }

  return run_mpa(y, h, cbs, n0, opt,
                 [&](int k, const std::vector<std::vector<double>>& in,
                     std::vector<std::vector<double>>& out, DecodeStats& st) {
                   const int df = static_cast<int>(cbs.fg.users_at[k].size());
                   // fold each user's message onto its projected values
                   std::vector<std::vector<double>> folded(df);
                   for (int i = 0; i < df; ++i) {
                     folded[i].assign(vals[k][i].size(), 0.0);
                     for (int mm = 0; mm < m; ++mm) {
                       folded[i][proj[k][i][mm]] += in[i][mm];
                       st.n_add += 1;
                     }
                   }

                   long long combos = 1;
                   for (int i = 0; i < df; ++i) combos *= static_cast<long long>(vals[k][i].size());

                   std::vector<double> loglik(combos);
                   double lmax = -std::numeric_limits<double>::infinity();
                   std::vector<int> digits(df, 0);
                   for (long long c = 0; c < combos; ++c) {
                     cd sum(0.0, 0.0);
                     long long rest = c;
                     for (int i = 0; i < df; ++i) {
                       int vi = static_cast<int>(rest % vals[k][i].size());
                       rest /= vals[k][i].size();
                       sum += vals[k][i][vi];
                       st.n_add += 2;
                     }
                     double l = -std::norm(y[k] - h[k] * sum) * inv_n0;
                     st.n_mult += 4 + 2 + 1;
                     st.n_add += 2 + 2 + 1;
                     loglik[c] = l;
                     lmax = std::max(lmax, l);
                   }
                   std::vector<double> g(combos);
                   for (long long c = 0; c < combos; ++c) {
                     g[c] = std::exp(loglik[c] - lmax);
                     st.n_mult += 1;
                     st.n_add += 1;
                   }

                   // accumulate per projected value, then spread over the
                   // codewords sharing it
                   std::vector<std::vector<double>> acc(df);
                   for (int i = 0; i < df; ++i) acc[i].assign(vals[k][i].size(), 0.0);
                   for (long long c = 0; c < combos; ++c) {
                     long long rest = c;
                     for (int i = 0; i < df; ++i) {
                       digits[i] = static_cast<int>(rest % vals[k][i].size());
                       rest /= vals[k][i].size();
                     }
                     for (int t = 0; t < df; ++t) {
                       double p = g[c];
                       for (int i = 0; i < df; ++i) {
                         if (i == t) continue;
                         p *= folded[i][digits[i]];
                       }
                       st.n_mult += df - 1;
                       acc[t][digits[t]] += p;
                       st.n_add += 1;
                     }
                   }
                   for (int t = 0; t < df; ++t)
                     for (int mm = 0; mm < m; ++mm) out[t][mm] = acc[t][proj[k][t][mm]];
                 });
}

std::vector<BerPoint> ber_sweep(const CodebookSet& cbs, const BerOptions& opt) {
  if (opt.ebn0_db.empty() || opt.kappas.empty())
    throw std::invalid_argument("ber_sweep: need at least one Eb/N0 and one kappa");
  const int bits = cbs.bits_per_symbol();
  std::vector<BerPoint> table;
  CounterRng root(opt.seed);

  int point_index = 0;
  for (double kappa : opt.kappas) {
    for (double db : opt.ebn0_db) {
      ChannelSpec ch;
      ch.kappa = kappa;
      ch.n0 = n0_from_ebn0_db(cbs, db);

      int chunks = num_chunks(opt.frames);
      std::vector<long long> errs(std::max(chunks, 1), 0), mults(std::max(chunks, 1), 0),
          adds(std::max(chunks, 1), 0), iters(std::max(chunks, 1), 0);
      CounterRng point_rng = root.derive(point_index);

      parallel_chunks(opt.frames, [&](int c, int64_t b, int64_t e) {
        MpaOptions mo;
        mo.max_iters = opt.max_iters;
        mo.tol = opt.tol;
        std::vector<uint32_t> tx_bits(cbs.J);
        for (int64_t f = b; f < e; ++f) {
          CounterRng rng = point_rng.derive(static_cast<uint64_t>(f));
          for (int j = 0; j < cbs.J; ++j) tx_bits[j] = static_cast<uint32_t>(rng.next_below(cbs.M));
          Frame fr = transmit(cbs, tx_bits, ch, rng);
          MpaResult res = opt.use_lp ? lp_mpa_decode(fr.y, fr.h, cbs, ch.n0, mo)
                                     : mpa_decode(fr.y, fr.h, cbs, ch.n0, mo);
          for (int j = 0; j < cbs.J; ++j)
            errs[c] += std::popcount(cbs.users[j].labels[res.decisions[j]] ^ tx_bits[j]);
          mults[c] += res.stats.n_mult;
          adds[c] += res.stats.n_add;
          iters[c] += res.stats.iterations;
        }
      });

      BerPoint p;
      p.ebn0_db = db;
      p.kappa = kappa;
      p.frames = opt.frames;
      p.seed = opt.seed;
      for (size_t c = 0; c < errs.size(); ++c) {
        p.bit_errors += errs[c];
        p.n_mult += mults[c];
        p.n_add += adds[c];
        p.avg_iters += static_cast<double>(iters[c]);
      }
      double total_bits = static_cast<double>(opt.frames) * cbs.J * bits;
      p.ber = p.bit_errors / total_bits;
      p.avg_iters /= static_cast<double>(opt.frames);
      // Wilson 95% interval on the bit error probability
      double z = 1.959963984540054;
      double n = total_bits, ph = p.ber;
      double denom = 1.0 + z * z / n;
      double center = (ph + z * z / (2.0 * n)) / denom;
      double half = z * std::sqrt(ph * (1.0 - ph) / n + z * z / (4.0 * n * n)) / denom;
      p.ci_low = std::max(0.0, center - half);
      p.ci_high = std::min(1.0, center + half);
      table.push_back(p);
      ++point_index;
    }
  }
  return table;
}

}  // namespace lpscma
