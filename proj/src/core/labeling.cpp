#include "core/labeling.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "core/rician.hpp"
#include "core/rng.hpp"

namespace lpscma {

std::vector<double> labeling_weights(const CodebookSet& cbs, int user, double kappa, double n0) {
  if (n0 <= 0.0) throw std::domain_error("labeling_weights: N0 must be > 0");
  const int m = cbs.M;
  std::vector<double> w(static_cast<size_t>(m) * m, 0.0);
  for (int i = 0; i < m; ++i)
    for (int l = i + 1; l < m; ++l) {
      double d = 0.0;
      for (int k : cbs.fg.resources_of[user])
        d += rician_d2_sum_term(std::norm(cbs.user_at(user, k, i) - cbs.user_at(user, k, l)), kappa, n0);
      double v = std::exp(-d / (4.0 * n0));
      w[static_cast<size_t>(i) * m + l] = v;
      w[static_cast<size_t>(l) * m + i] = v;
    }
  return w;
}

namespace {

void check_bijection(const std::vector<uint32_t>& labels, int m) {
  if (static_cast<int>(labels.size()) != m) throw std::domain_error("labeling: label vector must have M entries");
  std::vector<bool> seen(m, false);
  for (uint32_t v : labels) {
    if (v >= static_cast<uint32_t>(m) || seen[v]) throw std::domain_error("labeling: labels must be a bijection");
    seen[v] = true;
  }
}

double total_cost(const std::vector<double>& w, const std::vector<uint32_t>& labels, int m) {
  double pi = 0.0;
  for (int i = 0; i < m; ++i)
    for (int l = i + 1; l < m; ++l)
      pi += std::popcount(labels[i] ^ labels[l]) * w[static_cast<size_t>(i) * m + l];
  return pi;
}

std::vector<double> per_codeword_cost(const std::vector<double>& w, const std::vector<uint32_t>& labels,
                                      int m) {
  std::vector<double> xi(m, 0.0);
  for (int i = 0; i < m; ++i)
    for (int l = 0; l < m; ++l)
      if (l != i) xi[i] += std::popcount(labels[i] ^ labels[l]) * w[static_cast<size_t>(i) * m + l];
  return xi;
}

}  // namespace

Labeling labeling_cost(const CodebookSet& cbs, int user, const std::vector<uint32_t>& labels,
                       double kappa, double n0) {
  check_bijection(labels, cbs.M);
  std::vector<double> w = labeling_weights(cbs, user, kappa, n0);
  Labeling out;
  out.labels = labels;
  out.cost = total_cost(w, labels, cbs.M);
  out.codeword_cost = per_codeword_cost(w, labels, cbs.M);
  return out;
}

Labeling bsa_label(const CodebookSet& cbs, int user, double kappa, double n0, const BsaOptions& opt) {
  const int m = cbs.M;
  if (m < 2) throw std::domain_error("bsa_label: M must be >= 2");
  std::vector<double> w = labeling_weights(cbs, user, kappa, n0);

  CounterRng root(opt.seed);
  Labeling best;
  best.cost = std::numeric_limits<double>::infinity();
  long max_swap_evals = 0;

  for (int r = 0; r < opt.restarts; ++r) {
    CounterRng rng = root.derive(r);
    std::vector<uint32_t> labels(m);
    std::iota(labels.begin(), labels.end(), 0);
    for (int i = m - 1; i > 0; --i) std::swap(labels[i], labels[rng.next_below(i + 1)]);

    long swap_evals = 0;
    double pi_ini = total_cost(w, labels, m);
    std::vector<double> trace{pi_ini};

    for (int it = 0; it < opt.i_max; ++it) {
      std::vector<double> xi = per_codeword_cost(w, labels, m);
      std::vector<int> order(m);
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return xi[a] > xi[b]; });

      for (int oi = 0; oi < m; ++oi) {
        int i = order[oi];
        for (int l = 0; l < m; ++l) {
          if (l == i) continue;
          std::swap(labels[i], labels[l]);
          double pi_sw = total_cost(w, labels, m);
          ++swap_evals;
          if (pi_sw <= pi_ini) {
            pi_ini = pi_sw;
            trace.push_back(pi_sw);
          } else {
            std::swap(labels[i], labels[l]);
          }
        }
      }
    }

    max_swap_evals = std::max(max_swap_evals, swap_evals);
    if (pi_ini < best.cost) {
      best.labels = labels;
      best.cost = pi_ini;
      best.trace = std::move(trace);
    }
  }
  best.codeword_cost = per_codeword_cost(w, best.labels, m);
  best.swap_evals = max_swap_evals;
  return best;
}

void label_codebook(CodebookSet& cbs, double kappa, double n0, const BsaOptions& opt) {
  for (int j = 0; j < cbs.J; ++j) {
    BsaOptions o = opt;
    o.seed = opt.seed + static_cast<uint64_t>(j) * 0x51ed2701;
    cbs.users[j].labels = bsa_label(cbs, j, kappa, n0, o).labels;
  }
}

}  // namespace lpscma
