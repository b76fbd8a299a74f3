#include "core/gam.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace lpscma {

void GamParams::validate() const {
  if (num_points < 1) throw std::invalid_argument("gam: num_points must be >= 1");
  if (power <= 0.0) throw std::invalid_argument("gam: power must be > 0");
  if (rho <= -1.0) throw std::invalid_argument("gam: rho must be > -1");
  if (phi < 0.0 || phi > kPi / 2.0) throw std::invalid_argument("gam: phi must be in [0, pi/2]");
}

int OverlapPlan::total() const {
  int s = 0;
  for (int c : counts) s += c;
  return s;
}

cd gam_point(int n, const GamParams& params) {
  params.validate();
  if (n < 1 || n > params.num_points) throw std::domain_error("gam_point: n out of range");
  double c_norm = std::sqrt(2.0 * params.power / (params.num_points + 1));
  double radius = c_norm * std::sqrt(static_cast<double>(n) + params.rho);
  double angle = 2.0 * kPi * (params.phi + kGoldenAngleTurns) * n;
  return std::polar(radius, angle);
}

std::vector<cd> build_basic_constellation(int t, const GamParams& params) {
  if (t < 2) throw std::domain_error("build_basic_constellation: T must be >= 2");
  GamParams p = params;
  p.num_points = t / 2;
  p.validate();
  std::vector<cd> out;
  out.reserve(t);
  for (int n = 1; n <= p.num_points; ++n) out.push_back(gam_point(n, p));
  for (int n = 0; n < p.num_points; ++n) out.push_back(-out[n]);
  if (t % 2 == 1) out.push_back(cd(0.0, 0.0));
  return out;
}

OverlapPlan default_overlap_plan(int t, int m) {
  if (t < 2) throw std::domain_error("default_overlap_plan: T must be >= 2");
  if (t > m) throw std::domain_error("default_overlap_plan: T must be <= M");
  OverlapPlan plan;
  int repeats = m - t;
  if (repeats == 0) return plan;

  const bool has_zero = (t % 2 == 1);
  const int pairs = t / 2;
  int base = repeats / t;
  int extra = repeats % t;

  // counts[i] for the layout of build_basic_constellation:
  // [x_1..x_P, -x_1..-x_P, (0)]
  std::vector<int> counts(t, base);
  if (extra % 2 == 1) {
    if (!has_zero)
      throw std::domain_error(
          "default_overlap_plan: M - T parity requires a zero point; pick T of matching parity");
    counts[t - 1] += 1;
    extra -= 1;
  }
  // remaining extras come in twos; hand them to the lowest-energy +-pairs
  // (spiral radii grow with the point index, so index order is energy order)
  for (int e = 0; e < extra / 2; ++e) {
    int pair = e % pairs;
    counts[pair] += 1;
    counts[pair + pairs] += 1;
  }
  for (int i = 0; i < t; ++i) {
    if (counts[i] > 0) {
      plan.points.push_back(i);
      plan.counts.push_back(counts[i]);
    }
  }
  return plan;
}

Constellation1D build_lp_vector(int t, int m, const OverlapPlan& plan, const GamParams& params) {
  std::vector<cd> basic = build_basic_constellation(t, params);
  if (plan.points.size() != plan.counts.size())
    throw std::invalid_argument("build_lp_vector: plan points/counts size mismatch");
  if (plan.total() != m - t)
    throw std::invalid_argument("build_lp_vector: plan copy count must equal M - T");

  std::vector<int> copies(t, 0);
  for (size_t i = 0; i < plan.points.size(); ++i) {
    int p = plan.points[i];
    if (p < 0 || p >= t) throw std::invalid_argument("build_lp_vector: plan point index out of range");
    if (plan.counts[i] <= 0) throw std::invalid_argument("build_lp_vector: plan counts must be positive");
    if (copies[p] != 0) throw std::invalid_argument("build_lp_vector: duplicate plan point");
    copies[p] = plan.counts[i];
  }

  // symmetry: a point and its negation must receive the same number of
  // copies (the zero point is its own negation), otherwise the multiset
  // loses its zero mean
  for (int i = 0; i < t; ++i) {
    cd neg = -basic[i];
    int j = -1;
    for (int k = 0; k < t; ++k) {
      if (basic[k] == neg) {
        j = k;
        break;
      }
    }
    if (j < 0 || copies[i] != copies[j])
      throw std::invalid_argument("build_lp_vector: asymmetric plan breaks the zero-mean rule");
  }

  Constellation1D out;
  out.distinct = basic;
  out.points.reserve(m);
  out.projection_map.reserve(m);
  for (int i = 0; i < t; ++i) {
    for (int rep = 0; rep <= copies[i]; ++rep) {
      out.points.push_back(basic[i]);
      out.projection_map.push_back(i);
    }
  }
  return out;
}

}  // namespace lpscma
