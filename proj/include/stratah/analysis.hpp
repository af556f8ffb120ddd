#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "stratah/contrasts.hpp"
#include "stratah/dataset.hpp"
#include "stratah/errors.hpp"
#include "stratah/numeric.hpp"
#include "stratah/standardized.hpp"
#include "stratah/weights.hpp"

namespace stratah {

struct AnalysisConfig {
  double tau = 0.0;
  double alpha = 0.05;
  std::vector<Method> methods = {Method::proposed, Method::conventional,
                                 Method::cmh1, Method::cmh2};
  WeightScheme weights = WeightScheme::by_size();
  double unit_scale = 100.0;  // display factor; reports keep base units

  void validate() const {
    if (!(tau > 0.0)) throw InvalidInput("config: tau must be > 0");
    if (!(alpha > 0.0 && alpha < 1.0))
      throw InvalidInput("config: alpha must lie in (0,1)");
    if (methods.empty()) throw InvalidInput("config: select at least one method");
    if (!(unit_scale > 0.0)) throw InvalidInput("config: unit scale must be > 0");
  }
};

// A contrast that may be unavailable for a structural reason (for example a
// ratio against a zero-event arm); `error` carries the reason.
struct ContrastEntry {
  std::optional<ContrastResult> result;
  std::string error;
};

struct PerStratumRow {
  std::string label;
  std::array<AhEstimate, 2> ah;         // [control, treatment]
  std::array<GroupSummary, 2> group;    // natural-scale CIs (NaN when no events)
  ContrastEntry difference;
  ContrastEntry ratio;
};

struct MethodBlock {
  Method method = Method::proposed;
  bool ok = true;
  std::string error;
  std::string error_code;
  std::optional<std::array<GroupSummary, 2>> groups;
  ContrastEntry difference;
  ContrastEntry ratio;
  std::optional<std::array<StandardizedAhEstimate, 2>> standardized;  // proposed
  std::optional<CmhResult> cmh;                                       // cmh1/cmh2
};

struct AnalysisReport {
  double tau = 0.0;
  double alpha = 0.05;
  double unit_scale = 100.0;
  std::string weight_scheme;
  std::vector<double> weights;
  std::array<std::string, 2> arm_labels;
  std::vector<std::string> stratum_labels;
  std::vector<std::array<int, 2>> n_per_cell;  // [stratum][arm]
  int n_total = 0;
  std::vector<PerStratumRow> strata;
  std::vector<MethodBlock> methods;
};

namespace detail {

inline const char* method_name(Method m) {
  switch (m) {
    case Method::proposed: return "proposed";
    case Method::conventional: return "conventional";
    case Method::cmh1: return "cmh1";
    case Method::cmh2: return "cmh2";
  }
  return "?";
}

inline const char* weight_kind_name(WeightKind k) {
  switch (k) {
    case WeightKind::user_supplied: return "user";
    case WeightKind::sample_size_proportional: return "size";
    case WeightKind::cmh1: return "cmh1";
    case WeightKind::cmh2: return "cmh2";
    case WeightKind::inverse_variance: return "inverse_variance";
  }
  return "?";
}

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::invalid_input: return "invalid_input";
    case ErrorCode::parse_error: return "parse_error";
    case ErrorCode::zero_events: return "zero_events";
    case ErrorCode::tau_beyond_data: return "tau_beyond_data";
    case ErrorCode::missing_stratum_arm: return "missing_stratum_arm";
    case ErrorCode::invalid_pairing: return "invalid_pairing";
    case ErrorCode::simulation_failure: return "simulation_failure";
  }
  return "?";
}

}  // namespace detail

// Full stratified analysis of a two-arm dataset at one truncation time.
// Methods that cannot be computed for a structural reason are reported as
// failed blocks; analyze() itself throws only when nothing can be computed
// (or the data/config are unusable, e.g. tau beyond follow-up in any cell).
inline AnalysisReport analyze(const Dataset& ds, const AnalysisConfig& config) {
  config.validate();
  const std::size_t K = std::size_t(ds.n_strata());
  if (K == 0) throw InvalidInput("analyze: dataset has no strata");

  const auto cell_obs = ds.cells();
  for (int j = 0; j < 2; ++j)
    for (std::size_t k = 0; k < K; ++k)
      if (cell_obs[size_t(j)][k].empty())
        throw MissingStratumArm("stratum '" + ds.stratum_labels[k] +
                                "' has no records in arm '" +
                                ds.arm_labels[size_t(j)] + "'");

  std::array<std::vector<CellFit>, 2> cells;
  for (int j = 0; j < 2; ++j) {
    cells[size_t(j)].reserve(K);
    for (std::size_t k = 0; k < K; ++k) {
      cells[size_t(j)].push_back(CellFit::from(cell_obs[size_t(j)][k]));
      if (!cells[size_t(j)].back().identifiable_at(config.tau))
        throw TauBeyondData("arm '" + ds.arm_labels[size_t(j)] + "' stratum '" +
                                ds.stratum_labels[k] +
                                "': survival not estimable at tau " +
                                "(risk set exhausted by censoring)",
                            ds.stratum_labels[k]);
    }
  }

  AnalysisReport rep;
  rep.tau = config.tau;
  rep.alpha = config.alpha;
  rep.unit_scale = config.unit_scale;
  rep.weight_scheme = detail::weight_kind_name(config.weights.kind);
  rep.arm_labels = ds.arm_labels;
  rep.stratum_labels = ds.stratum_labels;
  rep.n_total = int(ds.records.size());
  rep.n_per_cell.resize(K);
  for (std::size_t k = 0; k < K; ++k)
    for (int j = 0; j < 2; ++j)
      rep.n_per_cell[k][size_t(j)] = cells[size_t(j)][k].n;

  rep.weights = resolve_weights(config.weights, cells[0], cells[1], config.tau);

  const double z_crit = normal_quantile(1.0 - config.alpha / 2.0);
  const double nan = std::numeric_limits<double>::quiet_NaN();

  // per-stratum rows: unadjusted two-sample results within each stratum
  const double one[] = {1.0};
  for (std::size_t k = 0; k < K; ++k) {
    PerStratumRow row;
    row.label = ds.stratum_labels[k];
    std::array<StandardizedAhEstimate, 2> single;
    for (int j = 0; j < 2; ++j) {
      single[size_t(j)] = standardized_ah(
          std::span<const CellFit>(&cells[size_t(j)][k], 1),
          std::span<const double>(one, 1), config.tau);
      row.ah[size_t(j)] = single[size_t(j)].per_stratum[0];
      const AhEstimate& a = row.ah[size_t(j)];
      if (a.events > 0) {
        const double hw = z_crit * std::sqrt(a.var_natural);
        row.group[size_t(j)] = {a.eta_hat, a.eta_hat - hw, a.eta_hat + hw};
      } else {
        row.group[size_t(j)] = {a.eta_hat, nan, nan};
      }
    }
    row.difference.result =
        ah_contrast(single[0], single[1], ContrastScale::difference, config.alpha);
    try {
      row.ratio.result =
          ah_contrast(single[0], single[1], ContrastScale::ratio, config.alpha);
    } catch (const Error& e) {
      row.ratio.error = e.what();
    }
    rep.strata.push_back(std::move(row));
  }

  for (Method m : config.methods) {
    MethodBlock block;
    block.method = m;
    try {
      switch (m) {
        case Method::proposed: {
          std::array<StandardizedAhEstimate, 2> g;
          for (int j = 0; j < 2; ++j)
            g[size_t(j)] = standardized_ah(cells[size_t(j)], rep.weights, config.tau);
          block.difference.result =
              ah_contrast(g[0], g[1], ContrastScale::difference, config.alpha);
          block.groups = block.difference.result->group_summaries;
          try {
            block.ratio.result =
                ah_contrast(g[0], g[1], ContrastScale::ratio, config.alpha);
          } catch (const Error& e) {
            block.ratio.error = e.what();
          }
          block.standardized = std::move(g);
          break;
        }
        case Method::conventional: {
          block.difference.result = conventional_contrast(
              cells[0], cells[1], ContrastScale::difference, config.tau,
              config.alpha);
          block.ratio.result = conventional_contrast(
              cells[0], cells[1], ContrastScale::ratio, config.tau, config.alpha);
          break;
        }
        case Method::cmh1:
        case Method::cmh2: {
          CmhResult cmh = cmh_adjusted_ah(cells[0], cells[1], m, config.tau);
          block.groups = {{GroupSummary{cmh.eta_control, nan, nan},
                           GroupSummary{cmh.eta_treatment, nan, nan}}};
          block.cmh = std::move(cmh);
          break;
        }
      }
    } catch (const Error& e) {
      block.ok = false;
      block.error = e.what();
      block.error_code = detail::error_code_name(e.code());
    }
    rep.methods.push_back(std::move(block));
  }

  bool any_ok = false;
  for (const auto& b : rep.methods) any_ok = any_ok || b.ok;
  if (!any_ok)
    throw ZeroEvents("analyze: no selected method could be computed; first "
                     "failure: " + rep.methods.front().error);
  return rep;
}

}  // namespace stratah
