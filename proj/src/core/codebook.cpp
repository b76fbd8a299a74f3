#include "core/codebook.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lpscma {

FactorGraph FactorGraph::from_matrix(int resources, int users, const std::vector<uint8_t>& f) {
  if (static_cast<int>(f.size()) != resources * users)
    throw std::invalid_argument("factor graph: matrix size mismatch");
  FactorGraph fg;
  fg.resources = resources;
  fg.users = users;
  fg.f = f;
  fg.users_at.resize(resources);
  fg.resources_of.resize(users);
  for (int k = 0; k < resources; ++k)
    for (int j = 0; j < users; ++j)
      if (fg.at(k, j)) {
        fg.users_at[k].push_back(j);
        fg.resources_of[j].push_back(k);
      }
  // d_f is the worst-case collision count; degenerate sub-systems (e.g. a
  // single user carved out of a larger graph) may leave some rows lighter
  fg.row_weight = 0;
  for (const auto& r : fg.users_at) fg.row_weight = std::max(fg.row_weight, static_cast<int>(r.size()));
  fg.col_weight = static_cast<int>(fg.resources_of.empty() ? 0 : fg.resources_of[0].size());
  for (const auto& u : fg.resources_of)
    if (static_cast<int>(u.size()) != fg.col_weight)
      throw std::invalid_argument("factor graph: column weights must be uniform");
  return fg;
}

FactorGraph builtin_factor_graph(int overload_percent) {
  if (overload_percent == 150) {
    return FactorGraph::from_matrix(4, 6,
                                    {0, 1, 1, 0, 1, 0,  //
                                     1, 0, 1, 0, 0, 1,  //
                                     0, 1, 0, 1, 0, 1,  //
                                     1, 0, 0, 1, 1, 0});
  }
  if (overload_percent == 200) {
    return FactorGraph::from_matrix(5, 10,
                                    {1, 1, 1, 1, 0, 0, 0, 0, 0, 0,  //
                                     1, 0, 0, 0, 1, 1, 1, 0, 0, 0,  //
                                     0, 1, 0, 0, 1, 0, 0, 1, 1, 0,  //
                                     0, 0, 1, 0, 0, 1, 0, 1, 0, 1,  //
                                     0, 0, 0, 1, 0, 0, 1, 0, 1, 1});
  }
  throw std::invalid_argument("builtin_factor_graph: overload must be 150 or 200");
}

SignaturePattern builtin_signature(int overload_percent) {
  SignaturePattern sig;
  if (overload_percent == 150) {
    sig.resources = 4;
    sig.users = 6;
    sig.op = {0, 1, 2, 0, 3, 0,  //
              1, 0, 2, 0, 0, 3,  //
              0, 3, 0, 2, 0, 1,  //
              3, 0, 0, 2, 1, 0};
    return sig;
  }
  if (overload_percent == 200) {
    sig.resources = 5;
    sig.users = 10;
    sig.op = {1, 2, 3, 4, 0, 0, 0, 0, 0, 0,  //
              4, 0, 0, 0, 1, 2, 3, 0, 0, 0,  //
              0, 3, 0, 0, 4, 0, 0, 1, 2, 0,  //
              0, 0, 2, 0, 0, 3, 0, 4, 0, 1,  //
              0, 0, 0, 1, 0, 0, 2, 0, 3, 4};
    return sig;
  }
  throw std::invalid_argument("builtin_signature: overload must be 150 or 200");
}

cd OperatorParams::z(int i) const {
  return std::polar(energies.at(i - 1), thetas.at(i - 1));
}

int CodebookSet::bits_per_symbol() const {
  int b = 0;
  while ((1 << b) < M) ++b;
  return b;
}

double CodebookSet::mean_user_energy() const {
  double total = 0.0;
  for (const auto& u : users) {
    double e = 0.0;
    for (const cd& v : u.x) e += std::norm(v);
    total += e / M;
  }
  return total / J;
}

void CodebookSet::scale(double factor) {
  for (auto& u : users)
    for (cd& v : u.x) v *= factor;
}

void CodebookSet::validate() const {
  if (M < 2 || (M & (M - 1)) != 0) throw std::invalid_argument("codebook: M must be a power of two >= 2");
  if (static_cast<int>(users.size()) != J) throw std::invalid_argument("codebook: user count mismatch");
  if (fg.resources != K || fg.users != J) throw std::invalid_argument("codebook: factor graph shape mismatch");
  if (fg.col_weight != N) throw std::invalid_argument("codebook: N must match the factor graph column weight");
  const int bits = bits_per_symbol();
  for (int j = 0; j < J; ++j) {
    const auto& u = users[j];
    if (static_cast<int>(u.x.size()) != K * M) throw std::invalid_argument("codebook: codeword matrix shape mismatch");
    for (int k = 0; k < K; ++k) {
      if (fg.at(k, j)) continue;
      for (int m = 0; m < M; ++m)
        if (u.at(k, m, M) != cd(0.0, 0.0))
          throw std::invalid_argument("codebook: nonzero entry outside the user's resource support");
    }
    if (static_cast<int>(u.labels.size()) != M) throw std::invalid_argument("codebook: labels must cover all codewords");
    std::vector<bool> seen(M, false);
    for (uint32_t lab : u.labels) {
      if (lab >= static_cast<uint32_t>(1 << bits) || seen[lab])
        throw std::invalid_argument("codebook: labels must be a bijection onto log2(M)-bit strings");
      seen[lab] = true;
    }
  }
}

CodebookSet assemble(const MotherConstellation& mc, const OperatorParams& params,
                     const FactorGraph& fg, const SignaturePattern& sig, int overload_percent) {
  if (mc.dims != fg.col_weight)
    throw std::invalid_argument("assemble: mother constellation dimension must equal the column weight");
  if (sig.resources != fg.resources || sig.users != fg.users)
    throw std::invalid_argument("assemble: signature shape must match the factor graph");
  if (static_cast<int>(params.energies.size()) != fg.row_weight ||
      static_cast<int>(params.thetas.size()) != fg.row_weight)
    throw std::invalid_argument("assemble: need one operator per colliding user");

  CodebookSet cbs;
  cbs.M = mc.size;
  cbs.K = fg.resources;
  cbs.J = fg.users;
  cbs.N = fg.col_weight;
  cbs.overload = overload_percent;
  cbs.fg = fg;
  cbs.users.resize(cbs.J);
  for (int j = 0; j < cbs.J; ++j) {
    auto& u = cbs.users[j];
    u.x.assign(static_cast<size_t>(cbs.K) * cbs.M, cd(0.0, 0.0));
    const auto& rows = fg.resources_of[j];
    for (int n = 0; n < cbs.N; ++n) {
      int k = rows[n];
      int op = sig.at(k, j);
      if (op < 1 || op > fg.row_weight) throw std::invalid_argument("assemble: signature/support mismatch");
      cd zi = params.z(op);
      for (int m = 0; m < cbs.M; ++m) u.x[static_cast<size_t>(k) * cbs.M + m] = zi * mc.at(n, m);
    }
    u.labels.resize(cbs.M);
    for (int m = 0; m < cbs.M; ++m) u.labels[m] = static_cast<uint32_t>(m);
  }
  cbs.meta.t = mc.source.distinct_count();
  cbs.meta.rho = params.rho;
  cbs.meta.phi = params.phi;
  cbs.meta.energies = params.energies;
  cbs.meta.thetas = params.thetas;
  return cbs;
}

void normalize_power(CodebookSet& cbs) {
  double u = cbs.mean_user_energy();
  if (u <= 0.0) throw std::runtime_error("normalize_power: degenerate codebook");
  cbs.scale(1.0 / std::sqrt(u));
}

}  // namespace lpscma
