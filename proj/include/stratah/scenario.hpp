#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stratah/dataset.hpp"
#include "stratah/errors.hpp"
#include "stratah/weibull.hpp"

namespace stratah {

// Data-generating configuration for the Monte Carlo study.  Sample sizes are
// per arm; stratum_fractions allocate each arm deterministically across
// strata (rounded counts, remainder to the last stratum).
struct SimScenario {
  std::vector<std::string> stratum_labels;
  std::vector<double> stratum_fractions;
  std::vector<double> weights;  // standardization weights, sum 1 after validate
  int n_per_arm = 0;
  std::array<std::vector<WeibullParams>, 2> event_params;  // [arm][stratum]
  std::optional<WeibullParams> censoring;                  // nullopt = none
  std::vector<double> taus;
  double alpha = 0.05;
  int replications = 1;
  std::uint64_t seed = 1;

  std::size_t n_strata() const { return stratum_labels.size(); }

  // Deterministic per-arm stratum counts.
  std::vector<int> stratum_counts() const {
    std::vector<int> counts(n_strata());
    int used = 0;
    for (std::size_t k = 0; k + 1 < n_strata(); ++k) {
      counts[k] = int(std::lround(stratum_fractions[k] * n_per_arm));
      used += counts[k];
    }
    counts.back() = n_per_arm - used;
    return counts;
  }

  void validate() const {
    const std::size_t K = stratum_labels.size();
    if (K == 0) throw InvalidInput("scenario: needs at least one stratum");
    if (stratum_fractions.size() != K || weights.size() != K)
      throw InvalidInput("scenario: stratum_fractions and weights must match strata");
    double fsum = 0.0;
    for (double f : stratum_fractions) {
      if (!(f > 0.0)) throw InvalidInput("scenario: stratum fractions must be positive");
      fsum += f;
    }
    if (std::fabs(fsum - 1.0) > 1e-9)
      throw InvalidInput("scenario: stratum fractions must sum to 1");
    for (double w : weights)
      if (!(w > 0.0)) throw InvalidInput("scenario: weights must be positive");
    if (n_per_arm < 1) throw InvalidInput("scenario: n_per_arm must be >= 1");
    for (int c : stratum_counts())
      if (c < 1) throw InvalidInput("scenario: a stratum receives no subjects");
    for (int j = 0; j < 2; ++j)
      if (event_params[size_t(j)].size() != K)
        throw InvalidInput("scenario: event parameters required for every arm/stratum");
    if (taus.empty()) throw InvalidInput("scenario: at least one tau required");
    for (double t : taus)
      if (!(t > 0.0)) throw InvalidInput("scenario: taus must be positive");
    if (!(alpha > 0.0 && alpha < 1.0))
      throw InvalidInput("scenario: alpha must lie in (0,1)");
    if (replications < 1) throw InvalidInput("scenario: replications must be >= 1");
  }
};

namespace detail {

inline std::vector<std::string> tokens(const std::string& value) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : value) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) out.push_back(std::move(cur)), cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

inline double to_double(const std::string& s, const std::string& key) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || !std::isfinite(v))
    throw InvalidInput("scenario key '" + key + "': cannot parse number '" + s + "'");
  return v;
}

}  // namespace detail

// Parse the flat key = value scenario format.  Recognized keys:
//   strata              = A B ...
//   stratum_fractions   = 0.7 0.3
//   weights             = 0.7 0.3            (optional; defaults to fractions)
//   n_per_arm           = 700
//   event.control.<s>   = <shape> <scale>    (one per stratum, likewise
//   event.treatment.<s> = <shape> <scale>     for the treatment arm)
//   censoring           = none | weibull <shape> <scale>
//   taus                = 45 48 51
//   alpha               = 0.05               (optional)
//   replications        = 3000
//   seed                = 17
// '#' starts a comment; blank lines are ignored.
inline SimScenario parse_scenario(std::string_view text) {
  std::map<std::string, std::string> kv;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t pos = text.find('\n', start);
    if (pos == std::string_view::npos) pos = text.size();
    std::string line(text.substr(start, pos - start));
    start = pos + 1;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) {
      if (pos == text.size()) break;
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw InvalidInput("scenario: expected 'key = value', found '" + line + "'");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw InvalidInput("scenario: empty key or value in '" + line + "'");
    if (!kv.emplace(key, value).second)
      throw InvalidInput("scenario: duplicate key '" + key + "'");
    if (pos == text.size()) break;
  }

  auto take = [&](const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw InvalidInput("scenario: missing key '" + key + "'");
    std::string v = it->second;
    kv.erase(it);
    return v;
  };
  auto take_optional = [&](const std::string& key) -> std::optional<std::string> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    std::string v = it->second;
    kv.erase(it);
    return v;
  };

  SimScenario sc;
  sc.stratum_labels = detail::tokens(take("strata"));
  for (const std::string& t : detail::tokens(take("stratum_fractions")))
    sc.stratum_fractions.push_back(detail::to_double(t, "stratum_fractions"));
  if (auto w = take_optional("weights")) {
    for (const std::string& t : detail::tokens(*w))
      sc.weights.push_back(detail::to_double(t, "weights"));
  } else {
    sc.weights = sc.stratum_fractions;
  }
  sc.n_per_arm = int(detail::to_double(take("n_per_arm"), "n_per_arm"));

  const std::array<std::string, 2> arm_names{"control", "treatment"};
  for (int j = 0; j < 2; ++j) {
    for (const std::string& label : sc.stratum_labels) {
      const std::string key = "event." + arm_names[size_t(j)] + "." + label;
      const auto parts = detail::tokens(take(key));
      if (parts.size() != 2)
        throw InvalidInput("scenario key '" + key + "': expected '<shape> <scale>'");
      sc.event_params[size_t(j)].emplace_back(detail::to_double(parts[0], key),
                                              detail::to_double(parts[1], key));
    }
  }

  const auto cens = detail::tokens(take("censoring"));
  if (cens.size() == 1 && cens[0] == "none") {
    sc.censoring = std::nullopt;
  } else if (cens.size() == 3 && cens[0] == "weibull") {
    sc.censoring = WeibullParams(detail::to_double(cens[1], "censoring"),
                                 detail::to_double(cens[2], "censoring"));
  } else {
    throw InvalidInput("scenario key 'censoring': expected 'none' or "
                       "'weibull <shape> <scale>'");
  }

  for (const std::string& t : detail::tokens(take("taus")))
    sc.taus.push_back(detail::to_double(t, "taus"));
  if (auto a = take_optional("alpha")) sc.alpha = detail::to_double(*a, "alpha");
  sc.replications = int(detail::to_double(take("replications"), "replications"));
  sc.seed = std::uint64_t(detail::to_double(take("seed"), "seed"));

  if (!kv.empty())
    throw InvalidInput("scenario: unknown key '" + kv.begin()->first + "'");
  sc.validate();
  return sc;
}

}  // namespace stratah
