#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "stratah/contrasts.hpp"
#include "stratah/dataset.hpp"
#include "stratah/errors.hpp"
#include "stratah/numeric.hpp"
#include "stratah/rng.hpp"
#include "stratah/scenario.hpp"
#include "stratah/standardized.hpp"

namespace stratah {

// Order matches the rows of the published summary tables.
enum SimMetric : int { sim_ah_treatment = 0, sim_ah_control = 1, sim_dah = 2,
                       sim_log_rah = 3 };
inline constexpr std::array<const char*, 4> sim_metric_names = {
    "ah_treatment", "ah_control", "dah", "log_rah"};

// Analytic values of the four estimands under the scenario's Weibull laws.
inline std::array<double, 4> weibull_truth(const SimScenario& sc, double tau) {
  if (!(tau > 0.0)) throw InvalidInput("weibull_truth: tau must be > 0");
  double wsum = 0.0;
  for (double w : sc.weights) wsum += w;
  std::array<double, 2> eta{};
  for (int j = 0; j < 2; ++j) {
    double f_bar = 0.0, r_bar = 0.0;
    for (std::size_t k = 0; k < sc.n_strata(); ++k) {
      const double w = sc.weights[k] / wsum;
      f_bar += w * sc.event_params[size_t(j)][k].cuminc(tau);
      r_bar += w * sc.event_params[size_t(j)][k].rmst(tau);
    }
    eta[size_t(j)] = f_bar / r_bar;
  }
  return {eta[1], eta[0], eta[1] - eta[0], std::log(eta[1] / eta[0])};
}

// One simulated trial.  Replicates are independent Philox substreams keyed
// by (seed, replicate), so any replicate can be regenerated in isolation and
// parallel runs match serial ones.
inline Dataset generate_trial(const SimScenario& sc, std::uint64_t replicate) {
  RngStream rng(sc.seed, replicate);
  const auto counts = sc.stratum_counts();

  Dataset ds;
  ds.stratum_labels = sc.stratum_labels;
  ds.arm_labels = {"control", "treatment"};
  ds.records.reserve(std::size_t(2 * sc.n_per_arm));
  for (int j = 0; j < 2; ++j) {
    for (std::size_t k = 0; k < sc.n_strata(); ++k) {
      const WeibullParams& law = sc.event_params[size_t(j)][k];
      for (int i = 0; i < counts[k]; ++i) {
        const double t = law.from_uniform(rng.uniform());
        SubjectRecord rec;
        rec.arm = Arm(j);
        rec.stratum = int(k);
        if (sc.censoring) {
          const double c = sc.censoring->from_uniform(rng.uniform());
          rec.time = std::min(t, c);
          rec.event = t <= c;
        } else {
          rec.time = t;
          rec.event = true;
        }
        ds.records.push_back(rec);
      }
    }
  }
  return ds;
}

struct MetricSummary {
  double truth = 0.0;
  double mean_estimate = 0.0;
  double bias = 0.0;
  double empirical_sd = 0.0;
  double mean_se = 0.0;
  double coverage = 0.0;
};

struct ReplicateDetail {
  std::array<double, 4> est{};
  std::array<double, 4> se{};
  std::array<bool, 4> cover{};
  double p_dah = 1.0, p_rah = 1.0;
  bool ci_excludes_null_dah = false, ci_excludes_null_rah = false;
  bool failed = false;
};

struct SimResult {
  std::vector<double> taus;
  std::vector<std::array<MetricSummary, 4>> metrics;            // [tau][metric]
  std::vector<std::array<std::vector<double>, 2>> avg_risk_set; // [tau][arm][stratum]
  std::vector<std::array<double, 2>> min_avg_risk_set;          // [tau][arm]
  std::vector<int> failed_replicates;                           // [tau]
  std::map<std::string, int> failure_kinds;
  int replications = 0;
  int n_per_arm = 0;
  std::uint64_t seed = 0;
  std::vector<std::vector<ReplicateDetail>> detail;  // [tau][rep] if collected
};

namespace detail {

struct RepPerTau {
  bool failed = false;
  std::string error_kind;
  std::array<double, 4> est{};
  std::array<double, 4> se{};
  std::array<bool, 4> cover{};
  double p_dah = 1.0, p_rah = 1.0;
  bool excl_dah = false, excl_rah = false;
  std::array<std::vector<double>, 2> risk_counts;  // [arm][stratum]
};

inline void run_replicate(const SimScenario& sc,
                          const std::array<double, 4>* truths,
                          std::uint64_t rep, std::vector<RepPerTau>& out) {
  const Dataset ds = generate_trial(sc, rep);
  const auto cell_obs = ds.cells();
  std::array<std::vector<CellFit>, 2> cells;
  for (int j = 0; j < 2; ++j) {
    cells[size_t(j)].reserve(sc.n_strata());
    for (const auto& obs : cell_obs[size_t(j)])
      cells[size_t(j)].push_back(CellFit::from(obs));
  }
  const double z_crit = normal_quantile(1.0 - sc.alpha / 2.0);

  for (std::size_t ti = 0; ti < sc.taus.size(); ++ti) {
    const double tau = sc.taus[ti];
    RepPerTau& r = out[ti];
    for (int j = 0; j < 2; ++j) {
      r.risk_counts[size_t(j)].resize(sc.n_strata());
      for (std::size_t k = 0; k < sc.n_strata(); ++k) {
        int count = 0;
        for (const auto& o : cell_obs[size_t(j)][k])
          if (o.time >= tau) ++count;
        r.risk_counts[size_t(j)][k] = double(count);
      }
    }
    try {
      const auto g0 = standardized_ah(cells[0], sc.weights, tau);
      const auto g1 = standardized_ah(cells[1], sc.weights, tau);
      const auto diff = ah_contrast(g0, g1, ContrastScale::difference, sc.alpha);
      const auto ratio = ah_contrast(g0, g1, ContrastScale::ratio, sc.alpha);
      const auto& truth = truths[ti];

      r.est = {g1.eta_bar_hat, g0.eta_bar_hat, diff.estimate,
               std::log(ratio.estimate)};
      r.se = {std::sqrt(g1.var_q), std::sqrt(g0.var_q), diff.se, ratio.se};
      for (int m = 0; m < 2; ++m) {
        const double lo = r.est[size_t(m)] - z_crit * r.se[size_t(m)];
        const double hi = r.est[size_t(m)] + z_crit * r.se[size_t(m)];
        r.cover[size_t(m)] = lo <= truth[size_t(m)] && truth[size_t(m)] <= hi;
      }
      r.cover[sim_dah] = diff.ci_low <= truth[sim_dah] && truth[sim_dah] <= diff.ci_high;
      r.cover[sim_log_rah] = ratio.ci_low <= std::exp(truth[sim_log_rah]) &&
                             std::exp(truth[sim_log_rah]) <= ratio.ci_high;
      r.p_dah = diff.p_value;
      r.p_rah = ratio.p_value;
      r.excl_dah = diff.ci_low > 0.0 || diff.ci_high < 0.0;
      r.excl_rah = ratio.ci_low > 1.0 || ratio.ci_high < 1.0;
    } catch (const Error& e) {
      r.failed = true;
      switch (e.code()) {
        case ErrorCode::tau_beyond_data: r.error_kind = "tau_beyond_data"; break;
        case ErrorCode::zero_events: r.error_kind = "zero_events"; break;
        default: r.error_kind = "other"; break;
      }
    }
  }
}

}  // namespace detail

// Full Monte Carlo study: per tau and metric, bias / empirical SD / mean SE /
// CI coverage against the analytic truth, plus across-replicate average
// risk-set counts per arm and stratum.  Failed replicates are excluded from
// the aggregates, counted, and classified; the run aborts if more than 1%
// fail for any tau.  Output is bit-identical for a given (scenario, seed)
// regardless of `threads`.
inline SimResult run_simulation(const SimScenario& sc, int threads = 0,
                                bool collect_detail = false) {
  sc.validate();
  const std::size_t T = sc.taus.size();
  const int reps = sc.replications;

  std::vector<std::array<double, 4>> truths(T);
  for (std::size_t ti = 0; ti < T; ++ti)
    truths[ti] = weibull_truth(sc, sc.taus[ti]);

  std::vector<std::vector<detail::RepPerTau>> outcomes(static_cast<std::size_t>(reps));
  for (auto& o : outcomes) o.resize(T);

  int nthreads = threads > 0 ? threads
                             : int(std::thread::hardware_concurrency());
  nthreads = std::max(1, std::min(nthreads, reps));
  if (nthreads == 1) {
    for (int rep = 0; rep < reps; ++rep)
      detail::run_replicate(sc, truths.data(), std::uint64_t(rep),
                            outcomes[std::size_t(rep)]);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(std::size_t(nthreads));
    for (int t = 0; t < nthreads; ++t) {
      pool.emplace_back([&, t] {
        for (int rep = t; rep < reps; rep += nthreads)
          detail::run_replicate(sc, truths.data(), std::uint64_t(rep),
                                outcomes[std::size_t(rep)]);
      });
    }
    for (auto& th : pool) th.join();
  }

  // ordered reduction keeps sums independent of the thread layout
  SimResult res;
  res.taus = sc.taus;
  res.replications = reps;
  res.n_per_arm = sc.n_per_arm;
  res.seed = sc.seed;
  res.metrics.resize(T);
  res.avg_risk_set.resize(T);
  res.min_avg_risk_set.resize(T);
  res.failed_replicates.assign(T, 0);
  if (collect_detail) res.detail.resize(T);

  for (std::size_t ti = 0; ti < T; ++ti) {
    std::array<double, 2> risk_denom{};
    for (int j = 0; j < 2; ++j)
      res.avg_risk_set[ti][size_t(j)].assign(sc.n_strata(), 0.0);

    std::array<double, 4> sum{}, sum_se{};
    std::array<long, 4> cover_count{};
    long ok = 0;
    for (int rep = 0; rep < reps; ++rep) {
      const auto& r = outcomes[std::size_t(rep)][ti];
      for (int j = 0; j < 2; ++j)
        for (std::size_t k = 0; k < sc.n_strata(); ++k)
          res.avg_risk_set[ti][size_t(j)][k] += r.risk_counts[size_t(j)][k];
      risk_denom[0] += 1.0;
      risk_denom[1] += 1.0;
      if (r.failed) {
        ++res.failed_replicates[ti];
        ++res.failure_kinds[r.error_kind];
      } else {
        ++ok;
        for (int m = 0; m < 4; ++m) {
          sum[size_t(m)] += r.est[size_t(m)];
          sum_se[size_t(m)] += r.se[size_t(m)];
          if (r.cover[size_t(m)]) ++cover_count[size_t(m)];
        }
      }
      if (collect_detail) {
        ReplicateDetail d;
        d.est = r.est;
        d.se = r.se;
        d.cover = r.cover;
        d.p_dah = r.p_dah;
        d.p_rah = r.p_rah;
        d.ci_excludes_null_dah = r.excl_dah;
        d.ci_excludes_null_rah = r.excl_rah;
        d.failed = r.failed;
        res.detail[ti].push_back(d);
      }
    }
    for (int j = 0; j < 2; ++j) {
      for (auto& v : res.avg_risk_set[ti][size_t(j)]) v /= risk_denom[size_t(j)];
      res.min_avg_risk_set[ti][size_t(j)] =
          *std::min_element(res.avg_risk_set[ti][size_t(j)].begin(),
                            res.avg_risk_set[ti][size_t(j)].end());
    }

    if (res.failed_replicates[ti] > 0.01 * reps)
      throw SimulationFailure(
          "simulation aborted: " + std::to_string(res.failed_replicates[ti]) +
          " of " + std::to_string(reps) + " replicates failed at tau = " +
          std::to_string(sc.taus[ti]));

    for (int m = 0; m < 4; ++m) {
      MetricSummary& s = res.metrics[ti][size_t(m)];
      s.truth = truths[ti][size_t(m)];
      s.mean_estimate = sum[size_t(m)] / double(ok);
      s.bias = s.mean_estimate - s.truth;
      s.mean_se = sum_se[size_t(m)] / double(ok);
      s.coverage = double(cover_count[size_t(m)]) / double(ok);
      double ss = 0.0;
      for (int rep = 0; rep < reps; ++rep) {
        const auto& r = outcomes[std::size_t(rep)][ti];
        if (r.failed) continue;
        const double d = r.est[size_t(m)] - s.mean_estimate;
        ss += d * d;
      }
      s.empirical_sd = ok > 1 ? std::sqrt(ss / double(ok - 1)) : 0.0;
    }
  }
  return res;
}

}  // namespace stratah
