#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "stratah/analysis.hpp"
#include "stratah/scenario.hpp"
#include "stratah/simulation.hpp"
#include "stratah/version.hpp"

namespace stratah {

namespace detail {

using ordered_json = nlohmann::ordered_json;

inline std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

inline std::string num3(double v, double scale = 1.0) {
  if (std::isnan(v)) return "-";
  return fmt("%.3f", v * scale);
}

inline std::string pval(double p) {
  if (std::isnan(p)) return "-";
  if (p < 0.001) return "<0.001";
  return fmt("%.3f", p);
}

inline std::string contrast_cell(const ContrastEntry& e, double scale,
                                 bool with_ci) {
  if (!e.result) return "-";
  const ContrastResult& c = *e.result;
  if (!with_ci) return num3(c.estimate, scale);
  return num3(c.estimate, scale) + " (" + num3(c.ci_low, scale) + " to " +
         num3(c.ci_high, scale) + "; p " + pval(c.p_value) + ")";
}

inline std::string group_cell(const GroupSummary& g, double scale) {
  std::string s = num3(g.estimate, scale);
  if (!std::isnan(g.ci_low))
    s += " (" + num3(g.ci_low, scale) + " to " + num3(g.ci_high, scale) + ")";
  return s;
}

inline void pad_to(std::string& line, std::size_t width) {
  if (line.size() < width) line.append(width - line.size(), ' ');
  else line += "  ";
}

inline ordered_json contrast_json(const ContrastEntry& e) {
  if (!e.result) return ordered_json{{"error", e.error}};
  const ContrastResult& c = *e.result;
  return ordered_json{{"estimate", c.estimate}, {"ci_low", c.ci_low},
                      {"ci_high", c.ci_high},   {"se", c.se},
                      {"z", c.z},               {"p_value", c.p_value}};
}

inline ordered_json ah_json(const AhEstimate& a) {
  return ordered_json{{"eta", a.eta_hat},
                      {"f", a.f_hat},
                      {"r", a.r_hat},
                      {"var_log", a.var_log},
                      {"var_natural", a.var_natural},
                      {"n", a.n},
                      {"events", a.events},
                      {"dominant_jump_share", a.dominant_jump_share}};
}

inline ordered_json standardized_json(const StandardizedAhEstimate& g) {
  ordered_json per = ordered_json::array();
  for (const auto& a : g.per_stratum) per.push_back(ah_json(a));
  return ordered_json{{"eta_bar", g.eta_bar_hat}, {"f_bar", g.f_bar},
                      {"r_bar", g.r_bar},         {"var_q", g.var_q},
                      {"var_w", g.var_w},         {"n", g.n_total},
                      {"events", g.events_total}, {"p_hat", g.p_hat},
                      {"per_stratum", per}};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// analyze reports

inline std::string render_analysis_table(const AnalysisReport& rep) {
  const double u = rep.unit_scale;
  std::string out;
  out += "Average hazard with survival weight (tau = " + detail::fmt("%g", rep.tau) +
         ", alpha = " + detail::fmt("%g", rep.alpha) + ")\n";
  out += "unit: events per " + detail::fmt("%g", u) + " person-month" +
         (u == 1.0 ? std::string("") : std::string("s")) + "\n";
  out += "arms: control = " + rep.arm_labels[0] + ", treatment = " +
         rep.arm_labels[1] + "; n = " + std::to_string(rep.n_total) + "\n";
  out += "weights (" + rep.weight_scheme + "):";
  for (std::size_t k = 0; k < rep.stratum_labels.size(); ++k)
    out += " " + rep.stratum_labels[k] + " = " + detail::fmt("%.4f", rep.weights[k]);
  out += "\n\n";

  struct Row {
    std::string name, g0, g1, diff, ratio;
  };
  std::vector<Row> rows;
  rows.push_back({"", "control (" + detail::fmt("%g", 100 * (1 - rep.alpha)) + "% CI)",
                  "treatment (CI)", "difference (CI; p)", "ratio (CI; p)"});
  for (std::size_t k = 0; k < rep.strata.size(); ++k) {
    const PerStratumRow& r = rep.strata[k];
    Row row;
    row.name = "stratum " + r.label + " (n=" +
               std::to_string(rep.n_per_cell[k][0] + rep.n_per_cell[k][1]) + ")";
    row.g0 = detail::group_cell(r.group[0], u);
    row.g1 = detail::group_cell(r.group[1], u);
    row.diff = detail::contrast_cell(r.difference, u, true);
    row.ratio = r.ratio.result ? detail::contrast_cell(r.ratio, 1.0, true) : "-";
    rows.push_back(std::move(row));
  }
  for (const MethodBlock& b : rep.methods) {
    Row row;
    row.name = detail::method_name(b.method);
    if (!b.ok) {
      row.g0 = "unavailable: " + b.error;
      rows.push_back(std::move(row));
      continue;
    }
    row.g0 = b.groups ? detail::group_cell((*b.groups)[0], u) : "-";
    row.g1 = b.groups ? detail::group_cell((*b.groups)[1], u) : "-";
    if (b.cmh) {
      row.diff = detail::num3(b.cmh->dah, u);
      row.ratio = detail::num3(b.cmh->rah, 1.0);
    } else {
      row.diff = detail::contrast_cell(b.difference, u, true);
      row.ratio = detail::contrast_cell(b.ratio, 1.0, true);
    }
    rows.push_back(std::move(row));
  }

  std::size_t w0 = 0, w1 = 0, w2 = 0, w3 = 0;
  for (const Row& r : rows) {
    w0 = std::max(w0, r.name.size() + 2);
    w1 = std::max(w1, r.g0.size() + 2);
    w2 = std::max(w2, r.g1.size() + 2);
    w3 = std::max(w3, r.diff.size() + 2);
  }
  for (const Row& r : rows) {
    std::string line = r.name;
    detail::pad_to(line, w0);
    line += r.g0;
    detail::pad_to(line, w0 + w1);
    line += r.g1;
    detail::pad_to(line, w0 + w1 + w2);
    line += r.diff;
    detail::pad_to(line, w0 + w1 + w2 + w3);
    line += r.ratio;
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + "\n";
  }
  return out;
}

inline std::string render_analysis_json(const AnalysisReport& rep) {
  using detail::ordered_json;
  ordered_json j;
  j["schema_version"] = report_schema_version;
  j["command"] = "analyze";
  j["rates_unit"] = "per person-month";
  j["unit_scale"] = rep.unit_scale;
  j["tau"] = rep.tau;
  j["alpha"] = rep.alpha;
  j["arms"] = {{"control", rep.arm_labels[0]}, {"treatment", rep.arm_labels[1]}};
  j["strata"] = rep.stratum_labels;
  j["n_total"] = rep.n_total;
  ordered_json ncell = ordered_json::array();
  for (std::size_t k = 0; k < rep.stratum_labels.size(); ++k)
    ncell.push_back({{"stratum", rep.stratum_labels[k]},
                     {"control", rep.n_per_cell[k][0]},
                     {"treatment", rep.n_per_cell[k][1]}});
  j["n_per_cell"] = ncell;
  ordered_json w;
  w["scheme"] = rep.weight_scheme;
  ordered_json wv;
  for (std::size_t k = 0; k < rep.stratum_labels.size(); ++k)
    wv[rep.stratum_labels[k]] = rep.weights[k];
  w["values"] = wv;
  j["weights"] = w;

  ordered_json strata = ordered_json::array();
  for (const PerStratumRow& r : rep.strata) {
    ordered_json s;
    s["stratum"] = r.label;
    s["control"] = detail::ah_json(r.ah[0]);
    s["treatment"] = detail::ah_json(r.ah[1]);
    s["control"]["ci_natural"] = {r.group[0].ci_low, r.group[0].ci_high};
    s["treatment"]["ci_natural"] = {r.group[1].ci_low, r.group[1].ci_high};
    s["difference"] = detail::contrast_json(r.difference);
    s["ratio"] = detail::contrast_json(r.ratio);
    strata.push_back(std::move(s));
  }
  j["per_stratum"] = strata;

  ordered_json methods;
  for (const MethodBlock& b : rep.methods) {
    ordered_json m;
    if (!b.ok) {
      m["error"] = {{"code", b.error_code}, {"message", b.error}};
      methods[detail::method_name(b.method)] = std::move(m);
      continue;
    }
    if (b.standardized) {
      ordered_json groups;
      for (int g = 0; g < 2; ++g) {
        ordered_json gj = detail::standardized_json((*b.standardized)[size_t(g)]);
        gj["ci_natural"] = {(*b.groups)[size_t(g)].ci_low,
                            (*b.groups)[size_t(g)].ci_high};
        groups[g == 0 ? "control" : "treatment"] = std::move(gj);
      }
      m["groups"] = std::move(groups);
    } else if (b.groups) {
      m["groups"] = {{"control", {{"estimate", (*b.groups)[0].estimate}}},
                     {"treatment", {{"estimate", (*b.groups)[1].estimate}}}};
    }
    if (b.cmh) {
      m["difference"] = {{"estimate", b.cmh->dah}};
      m["ratio"] = {{"estimate", b.cmh->rah}};
      ordered_json cw, crw;
      for (std::size_t k = 0; k < rep.stratum_labels.size(); ++k) {
        cw[rep.stratum_labels[k]] = b.cmh->weights[k];
        crw[rep.stratum_labels[k]] = b.cmh->ratio_weights[k];
      }
      m["weights"] = std::move(cw);
      m["ratio_weights"] = std::move(crw);
    } else {
      m["difference"] = detail::contrast_json(b.difference);
      m["ratio"] = detail::contrast_json(b.ratio);
    }
    methods[detail::method_name(b.method)] = std::move(m);
  }
  j["methods"] = std::move(methods);
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// simulate reports

inline std::string render_sim_table(const SimResult& res, const SimScenario& sc) {
  std::string out;
  out += "Monte Carlo study: " + std::to_string(res.replications) +
         " replications, seed " + std::to_string(res.seed) + " (stratah " +
         version_string + ")\n";
  out += "n per arm = " + std::to_string(res.n_per_arm) + " (" +
         std::to_string(2 * res.n_per_arm) + " total); censoring: ";
  if (sc.censoring)
    out += "weibull(" + detail::fmt("%g", sc.censoring->shape) + ", " +
           detail::fmt("%g", sc.censoring->scale) + ")";
  else
    out += "none";
  out += "\nstrata:";
  for (std::size_t k = 0; k < sc.n_strata(); ++k)
    out += " " + sc.stratum_labels[k] + " = " +
           detail::fmt("%g", sc.stratum_fractions[k]);
  out += "; weights:";
  for (std::size_t k = 0; k < sc.n_strata(); ++k)
    out += " " + detail::fmt("%g", sc.weights[k]);
  out += "\nunit: AH and DAH per 100 person-months; log_rah on the log scale\n\n";

  const std::size_t name_w = 18;
  auto row = [&](const std::string& name, auto value_of) {
    std::string line = "  " + name;
    detail::pad_to(line, name_w);
    for (std::size_t ti = 0; ti < res.taus.size(); ++ti)
      line += detail::fmt("%10.3f", value_of(ti));
    return line + "\n";
  };
  const double scale[4] = {100.0, 100.0, 100.0, 1.0};

  std::string header = "tau";
  detail::pad_to(header, name_w);
  for (double t : res.taus) header += detail::fmt("%10.1f", t);
  out += header + "\n";

  out += "True value\n";
  for (int m = 0; m < 4; ++m)
    out += row(sim_metric_names[size_t(m)], [&](std::size_t ti) {
      return res.metrics[ti][size_t(m)].truth * scale[m];
    });
  out += "Avg risk set at tau (per arm and stratum; min over strata)\n";
  for (int j : {1, 0}) {
    const std::string arm = j == 1 ? "treatment" : "control";
    for (std::size_t k = 0; k < sc.n_strata(); ++k)
      out += row(arm + " " + sc.stratum_labels[k], [&](std::size_t ti) {
        return res.avg_risk_set[ti][size_t(j)][k];
      });
    out += row(arm + " min", [&](std::size_t ti) {
      return res.min_avg_risk_set[ti][size_t(j)];
    });
  }
  out += "Bias\n";
  for (int m = 0; m < 4; ++m)
    out += row(sim_metric_names[size_t(m)], [&](std::size_t ti) {
      return res.metrics[ti][size_t(m)].bias * scale[m];
    });
  out += "Coverage (nominal " + detail::fmt("%g", 1.0 - sc.alpha) + ")\n";
  for (int m = 0; m < 4; ++m)
    out += row(sim_metric_names[size_t(m)], [&](std::size_t ti) {
      return res.metrics[ti][size_t(m)].coverage;
    });

  int total_failures = 0;
  for (int f : res.failed_replicates) total_failures += f;
  out += "failed replicates: " + std::to_string(total_failures);
  if (total_failures > 0) {
    out += " (";
    bool first = true;
    for (const auto& [kind, count] : res.failure_kinds) {
      if (!first) out += ", ";
      out += kind + ": " + std::to_string(count);
      first = false;
    }
    out += ")";
  }
  out += "\n";
  return out;
}

inline std::string render_sim_json(const SimResult& res, const SimScenario& sc) {
  using detail::ordered_json;
  ordered_json j;
  j["schema_version"] = report_schema_version;
  j["command"] = "simulate";
  j["version"] = version_string;
  j["seed"] = res.seed;
  j["replications"] = res.replications;
  j["rates_unit"] = "per person-month";
  j["n_per_arm"] = res.n_per_arm;
  j["strata"] = sc.stratum_labels;
  j["stratum_fractions"] = sc.stratum_fractions;
  j["weights"] = sc.weights;
  j["alpha"] = sc.alpha;
  if (sc.censoring)
    j["censoring"] = {{"kind", "weibull"}, {"shape", sc.censoring->shape},
                      {"scale", sc.censoring->scale}};
  else
    j["censoring"] = {{"kind", "none"}};
  ordered_json events;
  for (int jj = 0; jj < 2; ++jj) {
    ordered_json arm;
    for (std::size_t k = 0; k < sc.n_strata(); ++k)
      arm[sc.stratum_labels[k]] = {{"shape", sc.event_params[size_t(jj)][k].shape},
                                   {"scale", sc.event_params[size_t(jj)][k].scale}};
    events[jj == 0 ? "control" : "treatment"] = std::move(arm);
  }
  j["event_params"] = std::move(events);

  ordered_json results = ordered_json::array();
  for (std::size_t ti = 0; ti < res.taus.size(); ++ti) {
    ordered_json r;
    r["tau"] = res.taus[ti];
    ordered_json metrics;
    for (int m = 0; m < 4; ++m) {
      const MetricSummary& s = res.metrics[ti][size_t(m)];
      metrics[sim_metric_names[size_t(m)]] = {
          {"truth", s.truth},         {"mean_estimate", s.mean_estimate},
          {"bias", s.bias},           {"empirical_sd", s.empirical_sd},
          {"mean_se", s.mean_se},     {"coverage", s.coverage}};
    }
    r["metrics"] = std::move(metrics);
    ordered_json risk;
    for (int jj = 0; jj < 2; ++jj) {
      ordered_json arm;
      for (std::size_t k = 0; k < sc.n_strata(); ++k)
        arm[sc.stratum_labels[k]] = res.avg_risk_set[ti][size_t(jj)][k];
      arm["min"] = res.min_avg_risk_set[ti][size_t(jj)];
      risk[jj == 0 ? "control" : "treatment"] = std::move(arm);
    }
    r["avg_risk_set"] = std::move(risk);
    r["failed_replicates"] = res.failed_replicates[ti];
    results.push_back(std::move(r));
  }
  j["results"] = std::move(results);
  ordered_json kinds = ordered_json::object();
  for (const auto& [kind, count] : res.failure_kinds) kinds[kind] = count;
  j["failure_kinds"] = std::move(kinds);
  return j.dump(2) + "\n";
}

}  // namespace stratah
