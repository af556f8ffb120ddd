#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "stratah/average_hazard.hpp"
#include "stratah/errors.hpp"
#include "stratah/step_function.hpp"
#include "stratah/weights.hpp"

namespace stratah {

// Group-level standardized AH: the AH of the weighted mixture survival curve
// sum_k w_k S_k(t).  var_q is the natural-scale variance of eta_bar_hat and
// var_w the variance of its log, both already divided by the group size, so
// CIs are eta +- z*sqrt(var_q) and eta*exp(+-z*sqrt(var_w)).
struct StandardizedAhEstimate {
  double tau = 0.0;
  double eta_bar_hat = 0.0;
  double f_bar = 0.0;  // sum_k w_k {1 - S_k(tau)}
  double r_bar = 0.0;  // sum_k w_k R_k(tau)
  double var_q = 0.0;
  double var_w = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> weights;  // normalized
  std::vector<AhEstimate> per_stratum;
  std::vector<double> p_hat;  // n_k / n_total
  int n_total = 0;
  int events_total = 0;

  bool has_log_scale() const { return events_total > 0; }
};

// Standardized AH for one group from fitted per-stratum cells.  Weights may
// come unnormalized; they are rescaled to sum 1 internally.  Strata with no
// events stay in the mix (they contribute exposure but no incidence); the
// log-scale variance is undefined only when the whole group has no events.
inline StandardizedAhEstimate standardized_ah(std::span<const CellFit> cells,
                                              std::span<const double> weights,
                                              double tau) {
  if (!(tau > 0.0)) throw InvalidInput("standardized_ah: tau must be > 0");
  if (cells.empty()) throw InvalidInput("standardized_ah: no strata");
  if (cells.size() != weights.size())
    throw InvalidInput("standardized_ah: one weight per stratum required");

  StandardizedAhEstimate out;
  out.tau = tau;
  out.weights = detail::normalized({weights.begin(), weights.end()});

  const std::size_t K = cells.size();
  out.per_stratum.reserve(K);
  for (std::size_t k = 0; k < K; ++k) {
    if (!cells[k].identifiable_at(tau))
      throw TauBeyondData("standardized_ah: survival not estimable at tau",
                          std::to_string(k));
    out.per_stratum.push_back(detail::stratum_ah_summary(cells[k], tau));
    out.n_total += cells[k].n;
    out.events_total += out.per_stratum.back().events;
  }
  out.p_hat.resize(K);
  for (std::size_t k = 0; k < K; ++k)
    out.p_hat[k] = double(cells[k].n) / double(out.n_total);

  for (std::size_t k = 0; k < K; ++k) {
    out.f_bar += out.weights[k] * out.per_stratum[k].f_hat;
    out.r_bar += out.weights[k] * out.per_stratum[k].r_hat;
  }
  out.eta_bar_hat = out.f_bar / out.r_bar;

  // Plug-in variances of Q_j and W_j, divided by n_j: the weight on stratum
  // k's integral is w_k^2 / (p_k n_j) = w_k^2 / n_k.
  double vq = 0.0, vw = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    const CellFit& cell = cells[k];
    const std::size_t m = cell.events_upto(tau);
    double q_sum = 0.0, w_sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double ru = cell.rmst_at_event[i];
      const double weight_i = cell.dh[i] / cell.g_at_event[i];
      const double aq = 1.0 / out.r_bar - out.f_bar * ru / (out.r_bar * out.r_bar);
      q_sum += aq * aq * weight_i;
      if (out.f_bar > 0.0) {
        const double aw = 1.0 / out.f_bar - ru / out.r_bar;
        w_sum += aw * aw * weight_i;
      }
    }
    const double scale = out.weights[k] * out.weights[k] / double(cell.n);
    vq += scale * q_sum;
    vw += scale * w_sum;
  }
  out.var_q = vq;
  out.var_w = out.has_log_scale() ? vw
                                  : std::numeric_limits<double>::quiet_NaN();
  return out;
}

// Convenience overload fitting each stratum sample first.
inline StandardizedAhEstimate standardized_ah(
    const std::vector<std::vector<Observation>>& strata_samples,
    std::span<const double> weights, double tau) {
  std::vector<CellFit> cells;
  cells.reserve(strata_samples.size());
  for (const auto& s : strata_samples) cells.push_back(CellFit::from(s));
  return standardized_ah(cells, weights, tau);
}

// Weighted mixture of survival curves, evaluated at the union of jump points.
inline StepFunction mixture_survival(std::span<const CellFit> cells,
                                     std::span<const double> weights) {
  if (cells.empty() || cells.size() != weights.size())
    throw InvalidInput("mixture_survival: one weight per stratum required");
  const auto w = detail::normalized({weights.begin(), weights.end()});
  std::vector<double> grid;
  for (const auto& c : cells)
    grid.insert(grid.end(), c.fit.event_times.begin(), c.fit.event_times.end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k < cells.size(); ++k)
      s += w[k] * cells[k].fit.survival(grid[i]);
    values[i] = s;
  }
  return StepFunction(std::move(grid), std::move(values), 1.0);
}

}  // namespace stratah
