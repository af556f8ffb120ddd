#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "stratah/errors.hpp"
#include "stratah/kaplan_meier.hpp"

namespace stratah {

// Precomputed per-sample quantities shared by every AH-type estimator:
// at each event time u_i <= max follow-up, the restricted mean R(u_i), the
// at-risk fraction G(u_i) and the cumulative-hazard increment dH(u_i).
struct CellFit {
  KmFit fit;
  std::vector<double> rmst_at_event;
  std::vector<double> g_at_event;
  std::vector<double> dh;
  int n = 0;

  static CellFit from(std::span<const Observation> sample) {
    CellFit c;
    c.fit = kaplan_meier(sample);
    c.n = c.fit.n;
    const auto& times = c.fit.event_times;
    const auto& values = c.fit.survival.values();
    c.rmst_at_event.resize(times.size());
    c.g_at_event.resize(times.size());
    double area = 0.0, prev_t = 0.0, prev_s = 1.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
      area += (times[i] - prev_t) * prev_s;
      c.rmst_at_event[i] = area;
      prev_t = times[i];
      prev_s = values[i];
      c.g_at_event[i] = double(c.fit.at_risk_at[i]) / double(c.n);
    }
    if (!times.empty()) {
      auto incr = hazard_increments(c.fit, times.back());
      c.dh.resize(incr.size());
      for (std::size_t i = 0; i < incr.size(); ++i) c.dh[i] = incr[i].second;
    }
    return c;
  }

  // S is determined on [0,tau] iff someone is still under observation at tau
  // or the curve already resolved to zero through events.
  bool identifiable_at(double tau) const {
    return fit.max_observed >= tau || fit.hits_zero();
  }

  // Number of event times <= tau.
  std::size_t events_upto(double tau) const {
    return std::size_t(std::upper_bound(fit.event_times.begin(),
                                        fit.event_times.end(), tau) -
                       fit.event_times.begin());
  }

  double cuminc(double tau) const { return 1.0 - fit.survival(tau); }
  double rmst(double tau) const { return fit.survival.integral(0.0, tau); }
};

// Stratum-level AH estimate.  var_log is the variance of log(eta_hat)
// (V_jk / n); var_natural is the delta-method variance of eta_hat itself.
struct AhEstimate {
  double tau = 0.0;
  double eta_hat = 0.0;
  double f_hat = 0.0;
  double r_hat = 0.0;
  double var_log = 0.0;
  double var_natural = 0.0;
  int n = 0;
  int events = 0;
  // Share of the variance sum carried by its largest single jump; a value
  // above 0.5 signals a late risk set too thin to trust the estimate.
  double dominant_jump_share = 0.0;
};

namespace detail {

// Core of the AH computation without the zero-event error, so that the
// standardized estimator can keep degenerate strata in the mix.
inline AhEstimate stratum_ah_summary(const CellFit& cell, double tau) {
  if (!(tau > 0.0)) throw InvalidInput("stratum_ah: tau must be > 0");
  if (!cell.identifiable_at(tau))
    throw TauBeyondData("stratum_ah: survival not estimable at tau (risk set "
                        "exhausted by censoring before tau)");

  AhEstimate est;
  est.tau = tau;
  est.n = cell.n;
  est.f_hat = cell.cuminc(tau);
  est.r_hat = cell.rmst(tau);
  est.eta_hat = est.f_hat / est.r_hat;

  const std::size_t m = cell.events_upto(tau);
  est.events = 0;
  for (std::size_t i = 0; i < m; ++i) est.events += cell.fit.deaths_at[i];
  if (m == 0) {
    est.var_log = std::numeric_limits<double>::quiet_NaN();
    est.var_natural = 0.0;
    return est;
  }

  double v = 0.0, max_term = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double a = 1.0 / est.f_hat - cell.rmst_at_event[i] / est.r_hat;
    const double term = a * a * cell.dh[i] / cell.g_at_event[i];
    v += term;
    max_term = std::max(max_term, term);
  }
  est.var_log = v / double(cell.n);
  est.var_natural = est.eta_hat * est.eta_hat * est.var_log;
  est.dominant_jump_share = v > 0.0 ? max_term / v : 0.0;
  return est;
}

}  // namespace detail

// AH for one group in one stratum: eta = {1 - S(tau)} / R(tau) with the
// martingale variance of its logarithm.
inline AhEstimate stratum_ah(std::span<const Observation> sample, double tau) {
  const CellFit cell = CellFit::from(sample);
  AhEstimate est = detail::stratum_ah_summary(cell, tau);
  if (est.events == 0)
    throw ZeroEvents("stratum_ah: no events by tau; AH is 0 and log-scale "
                     "quantities are undefined");
  return est;
}

}  // namespace stratah
