#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stratah/average_hazard.hpp"
#include "stratah/errors.hpp"

namespace stratah {

enum class WeightKind {
  user_supplied,
  sample_size_proportional,
  cmh1,
  cmh2,
  inverse_variance,
};

struct WeightScheme {
  WeightKind kind = WeightKind::sample_size_proportional;
  std::optional<std::vector<double>> user_weights;  // keyed by stratum index

  static WeightScheme user(std::vector<double> w) {
    return {WeightKind::user_supplied, std::move(w)};
  }
  static WeightScheme by_size() { return {WeightKind::sample_size_proportional, {}}; }
};

namespace detail {

inline std::vector<double> normalized(std::vector<double> w) {
  double sum = 0.0;
  for (double v : w) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw InvalidInput("weights must be positive and finite");
    sum += v;
  }
  for (double& v : w) v /= sum;
  return w;
}

}  // namespace detail

// Resolve a weight scheme against the fitted per-stratum cells of both
// groups.  Returns positive weights normalized to sum 1.
//   sample_size_proportional: w_k ~ n_1k + n_0k
//   cmh1:  w_k ~ n_1k n_0k R_1k(tau) R_0k(tau) / (n_1k + n_0k)
//   cmh2:  w_k ~ n_1k n_0k R_1k(tau) R_0k(tau) / {n_1k R_1k(tau) + n_0k R_0k(tau)}
//   inverse_variance: w_k ~ 1 / Var(log RAH_k)
inline std::vector<double> resolve_weights(const WeightScheme& scheme,
                                           std::span<const CellFit> cells_control,
                                           std::span<const CellFit> cells_treatment,
                                           double tau) {
  if (cells_control.size() != cells_treatment.size())
    throw MissingStratumArm("resolve_weights: strata differ between arms");
  const std::size_t k = cells_control.size();
  if (k == 0) throw InvalidInput("resolve_weights: no strata");

  std::vector<double> w(k);
  switch (scheme.kind) {
    case WeightKind::user_supplied: {
      if (!scheme.user_weights || scheme.user_weights->size() != k)
        throw InvalidInput("resolve_weights: user weights must name every stratum");
      w = *scheme.user_weights;
      break;
    }
    case WeightKind::sample_size_proportional: {
      for (std::size_t i = 0; i < k; ++i)
        w[i] = double(cells_control[i].n + cells_treatment[i].n);
      break;
    }
    case WeightKind::cmh1:
    case WeightKind::cmh2: {
      for (std::size_t i = 0; i < k; ++i) {
        const double n0 = cells_control[i].n, n1 = cells_treatment[i].n;
        const double r0 = cells_control[i].rmst(tau);
        const double r1 = cells_treatment[i].rmst(tau);
        if (scheme.kind == WeightKind::cmh1)
          w[i] = n1 * n0 * r1 * r0 / (n1 + n0);
        else
          w[i] = n1 * n0 * r1 * r0 / (n1 * r1 + n0 * r0);
      }
      break;
    }
    case WeightKind::inverse_variance: {
      for (std::size_t i = 0; i < k; ++i) {
        const AhEstimate a0 = detail::stratum_ah_summary(cells_control[i], tau);
        const AhEstimate a1 = detail::stratum_ah_summary(cells_treatment[i], tau);
        if (a0.events == 0 || a1.events == 0)
          throw ZeroEvents("resolve_weights: inverse-variance weights need "
                           "events in every stratum of both arms");
        w[i] = 1.0 / (a1.var_log + a0.var_log);
      }
      break;
    }
  }
  return detail::normalized(std::move(w));
}

}  // namespace stratah
