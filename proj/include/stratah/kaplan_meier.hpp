#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "stratah/errors.hpp"
#include "stratah/step_function.hpp"

namespace stratah {

// One follow-up record: observed time X = min(T, C) and the event indicator.
struct Observation {
  double time = 0.0;
  bool event = false;
};

// Product-limit fit.  `survival` jumps only at event times; counts are kept
// so downstream variance integrals can reconstruct the at-risk process.
struct KmFit {
  StepFunction survival;
  std::vector<double> event_times;  // distinct times with >= 1 event
  std::vector<int> deaths_at;
  std::vector<int> at_risk_at;
  int n = 0;
  double max_observed = 0.0;

  // True when the curve reaches exactly zero (risk set exhausted by events).
  bool hits_zero() const {
    return !survival.values().empty() && survival.values().back() == 0.0;
  }
};

// Kaplan-Meier estimate with the standard tie rule: at equal times, events
// are processed before censorings (censored subjects stay in the risk set).
inline KmFit kaplan_meier(std::span<const Observation> sample) {
  if (sample.empty()) throw InvalidInput("kaplan_meier: empty sample");
  for (const auto& o : sample) {
    if (!std::isfinite(o.time) || o.time < 0.0)
      throw InvalidInput("kaplan_meier: times must be finite and >= 0");
  }

  std::vector<double> times;
  times.reserve(sample.size());
  std::vector<std::size_t> order(sample.size());
  for (std::size_t i = 0; i < sample.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (sample[a].time != sample[b].time) return sample[a].time < sample[b].time;
    return sample[a].event > sample[b].event;
  });

  KmFit fit;
  fit.n = int(sample.size());
  fit.max_observed = sample[order.back()].time;

  std::vector<double> breakpoints;
  std::vector<double> values;
  double s = 1.0;
  int at_risk = fit.n;
  std::size_t i = 0;
  while (i < order.size()) {
    const double t = sample[order[i]].time;
    int deaths = 0, censored = 0;
    while (i < order.size() && sample[order[i]].time == t) {
      if (sample[order[i]].event) ++deaths; else ++censored;
      ++i;
    }
    if (deaths > 0) {
      s *= 1.0 - double(deaths) / double(at_risk);
      fit.event_times.push_back(t);
      fit.deaths_at.push_back(deaths);
      fit.at_risk_at.push_back(at_risk);
      breakpoints.push_back(t);
      values.push_back(s);
    }
    at_risk -= deaths + censored;
  }
  fit.survival = StepFunction(std::move(breakpoints), std::move(values), 1.0);
  return fit;
}

// Restricted mean survival time: exact integral of the step curve on [0,tau].
inline double rmst(const KmFit& fit, double tau) {
  if (!(tau > 0.0)) throw InvalidInput("rmst: tau must be > 0");
  return fit.survival.integral(0.0, tau);
}

// 1 - S(tau).
inline double cumulative_incidence(const KmFit& fit, double tau) {
  if (!(tau > 0.0)) throw InvalidInput("cumulative_incidence: tau must be > 0");
  return 1.0 - fit.survival(tau);
}

// Cumulative-hazard increments at event times u <= tau, taken as
// -d log S(u).  Where S reaches exactly zero the log is undefined and the
// Nelson-Aalen increment deaths/at_risk is substituted.
inline std::vector<std::pair<double, double>> hazard_increments(const KmFit& fit,
                                                                double tau) {
  if (!(tau > 0.0)) throw InvalidInput("hazard_increments: tau must be > 0");
  std::vector<std::pair<double, double>> out;
  double prev_log = 0.0;  // log S(u-)
  for (std::size_t i = 0; i < fit.event_times.size(); ++i) {
    if (fit.event_times[i] > tau) break;
    const double s = fit.survival.values()[i];
    double dh;
    if (s == 0.0) {
      dh = double(fit.deaths_at[i]) / double(fit.at_risk_at[i]);
    } else {
      const double lg = std::log(s);
      dh = prev_log - lg;
      prev_log = lg;
    }
    out.emplace_back(fit.event_times[i], dh);
  }
  return out;
}

// Empirical at-risk fraction G(t) = n^-1 * #{X >= t} (closed at t).
inline double at_risk_fraction(std::span<const Observation> sample, double t) {
  if (sample.empty()) throw InvalidInput("at_risk_fraction: empty sample");
  std::size_t count = 0;
  for (const auto& o : sample)
    if (o.time >= t) ++count;
  return double(count) / double(sample.size());
}

}  // namespace stratah
