#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include "stratah/errors.hpp"

namespace stratah {

// Standard normal CDF.
inline double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

// Two-sided p-value for a standard normal test statistic.
inline double two_sided_p(double z) {
  if (std::isnan(z)) return std::numeric_limits<double>::quiet_NaN();
  return std::erfc(std::fabs(z) / std::sqrt(2.0));
}

// Standard normal quantile, p in (0,1).  Safeguarded Newton iteration on
// erfc; accurate to ~1e-14, well beyond what CI construction needs.
inline double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw InvalidInput("normal_quantile: p must lie strictly in (0,1)");
  if (p == 0.5) return 0.0;

  const double q = std::min(p, 1.0 - p);
  double x = -std::sqrt(-2.0 * std::log(q));  // crude tail start
  if (q > 0.2) x = -1.0;
  double lo = -40.0, hi = 0.0;
  const double inv_sqrt2pi = 0.3989422804014327;
  for (int it = 0; it < 100; ++it) {
    const double f = normal_cdf(x) - q;
    if (f > 0.0) hi = x; else lo = x;
    const double d = inv_sqrt2pi * std::exp(-0.5 * x * x);
    double step = f / d;
    double next = x - step;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);  // bisect fallback
    if (std::fabs(next - x) <= 1e-15 * (1.0 + std::fabs(x))) { x = next; break; }
    x = next;
  }
  return p < 0.5 ? x : -x;
}

namespace detail {

// 15-point Kronrod / 7-point Gauss nodes and weights on [-1,1] (QUADPACK).
inline constexpr std::array<double, 8> gk15_nodes = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0};
inline constexpr std::array<double, 8> gk15_weights = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
inline constexpr std::array<double, 4> gauss7_weights = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

template <class F>
inline void gk15_apply(const F& f, double a, double b, double& kronrod,
                       double& gauss) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  kronrod = 0.0;
  gauss = 0.0;
  for (std::size_t i = 0; i < 7; ++i) {
    const double fsum = f(c - h * gk15_nodes[i]) + f(c + h * gk15_nodes[i]);
    kronrod += gk15_weights[i] * fsum;
    if (i % 2 == 1) gauss += gauss7_weights[i / 2] * fsum;  // i = 1,3,5
  }
  const double fc = f(c);
  kronrod += gk15_weights[7] * fc;
  gauss += gauss7_weights[3] * fc;
  kronrod *= h;
  gauss *= h;
}

}  // namespace detail

// Adaptive Gauss-Kronrod (7,15) quadrature of f over [a,b] to an absolute
// tolerance.  Intervals are bisected until the local Kronrod/Gauss error
// estimate fits within a length-proportional share of the budget.
template <class F>
inline double integrate(const F& f, double a, double b, double abs_tol = 1e-10) {
  if (!(b >= a)) throw InvalidInput("integrate: requires b >= a");
  if (a == b) return 0.0;
  struct Interval {
    double a, b;
    int depth;
  };
  const double total_len = b - a;
  std::vector<Interval> stack{{a, b, 0}};
  double result = 0.0;
  while (!stack.empty()) {
    const Interval iv = stack.back();
    stack.pop_back();
    double k = 0.0, g = 0.0;
    detail::gk15_apply(f, iv.a, iv.b, k, g);
    const double err = std::fabs(k - g);
    const double budget = abs_tol * (iv.b - iv.a) / total_len;
    // the roundoff guard stops bisection once the error estimate sits at the
    // floating-point floor of the local integral
    const double floor_err =
        16.0 * std::numeric_limits<double>::epsilon() * std::fabs(k);
    if (err <= budget || err <= floor_err || iv.depth >= 48) {
      result += k;
    } else {
      const double mid = 0.5 * (iv.a + iv.b);
      stack.push_back({iv.a, mid, iv.depth + 1});
      stack.push_back({mid, iv.b, iv.depth + 1});
    }
  }
  return result;
}

}  // namespace stratah
