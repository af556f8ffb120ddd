#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stratah/average_hazard.hpp"
#include "stratah/errors.hpp"
#include "stratah/numeric.hpp"
#include "stratah/standardized.hpp"

namespace stratah {

enum class Method { proposed, conventional, cmh1, cmh2 };
enum class ContrastScale { difference, ratio };

struct GroupSummary {
  double estimate = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

struct ContrastResult {
  Method method = Method::proposed;
  ContrastScale scale = ContrastScale::difference;
  double estimate = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double se = 0.0;  // on the estimation scale (log scale for ratios)
  double z = 0.0;
  double p_value = 1.0;
  double alpha = 0.05;
  // group-level (control, treatment) AH summaries where the method has them
  std::optional<std::array<GroupSummary, 2>> group_summaries;
};

namespace detail {

inline void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw InvalidInput("alpha must lie strictly in (0,1)");
}

}  // namespace detail

// Difference or ratio of two standardized AHs with asymptotic CI and the
// two-sided normal test of equal AH.
inline ContrastResult ah_contrast(const StandardizedAhEstimate& control,
                                  const StandardizedAhEstimate& treatment,
                                  ContrastScale scale, double alpha = 0.05) {
  detail::check_alpha(alpha);
  if (control.tau != treatment.tau)
    throw InvalidPairing("ah_contrast: groups use different tau");
  if (control.weights != treatment.weights)
    throw InvalidPairing("ah_contrast: groups use different weights");

  const double z_crit = normal_quantile(1.0 - alpha / 2.0);
  ContrastResult res;
  res.method = Method::proposed;
  res.scale = scale;
  res.alpha = alpha;

  if (scale == ContrastScale::difference) {
    res.estimate = treatment.eta_bar_hat - control.eta_bar_hat;
    res.se = std::sqrt(treatment.var_q + control.var_q);
    res.ci_low = res.estimate - z_crit * res.se;
    res.ci_high = res.estimate + z_crit * res.se;
    res.z = res.estimate / res.se;
  } else {
    if (!(control.eta_bar_hat > 0.0) || !(treatment.eta_bar_hat > 0.0))
      throw ZeroEvents("ah_contrast: ratio undefined when a group has no "
                       "events by tau");
    res.estimate = treatment.eta_bar_hat / control.eta_bar_hat;
    res.se = std::sqrt(treatment.var_w + control.var_w);
    res.ci_low = res.estimate * std::exp(-z_crit * res.se);
    res.ci_high = res.estimate * std::exp(z_crit * res.se);
    res.z = std::log(res.estimate) / res.se;
  }
  res.p_value = two_sided_p(res.z);

  const auto group = [&](const StandardizedAhEstimate& g) {
    const double hw = z_crit * std::sqrt(g.var_q);
    return GroupSummary{g.eta_bar_hat, g.eta_bar_hat - hw, g.eta_bar_hat + hw};
  };
  res.group_summaries = {{group(control), group(treatment)}};
  return res;
}

// Woolf-type fixed-effect pooling: inverse-variance weighted mean of
// stratum effects on whatever scale the inputs live on.
inline ContrastResult inverse_variance_combine(std::span<const double> theta_hats,
                                               std::span<const double> variances,
                                               double alpha = 0.05) {
  detail::check_alpha(alpha);
  if (theta_hats.empty() || theta_hats.size() != variances.size())
    throw InvalidInput("inverse_variance_combine: need matching, non-empty "
                       "estimates and variances");
  double wsum = 0.0, est = 0.0;
  for (std::size_t k = 0; k < theta_hats.size(); ++k) {
    if (!(variances[k] > 0.0))
      throw InvalidInput("inverse_variance_combine: variances must be > 0");
    const double w = 1.0 / variances[k];
    wsum += w;
    est += w * theta_hats[k];
  }
  est /= wsum;
  const double var = 1.0 / wsum;
  const double se = std::sqrt(var);
  const double z_crit = normal_quantile(1.0 - alpha / 2.0);

  ContrastResult res;
  res.method = Method::conventional;
  res.scale = ContrastScale::difference;
  res.alpha = alpha;
  res.estimate = est;
  res.se = se;
  res.ci_low = est - z_crit * se;
  res.ci_high = est + z_crit * se;
  res.z = est / se;
  res.p_value = two_sided_p(res.z);
  return res;
}

// Conventional stratified contrast: per-stratum DAH (natural scale) or
// log RAH pooled by inverse variance.  Every stratum needs events in both
// arms, otherwise its effect or variance is undefined.
inline ContrastResult conventional_contrast(std::span<const CellFit> cells_control,
                                            std::span<const CellFit> cells_treatment,
                                            ContrastScale scale, double tau,
                                            double alpha = 0.05) {
  if (cells_control.size() != cells_treatment.size())
    throw MissingStratumArm("conventional_contrast: strata differ between arms");
  const std::size_t K = cells_control.size();
  std::vector<double> theta(K), var(K);
  for (std::size_t k = 0; k < K; ++k) {
    const AhEstimate a0 = detail::stratum_ah_summary(cells_control[k], tau);
    const AhEstimate a1 = detail::stratum_ah_summary(cells_treatment[k], tau);
    if (a0.events == 0 || a1.events == 0)
      throw ZeroEvents("conventional_contrast: stratum " + std::to_string(k) +
                       " has an arm with no events by tau");
    if (scale == ContrastScale::difference) {
      theta[k] = a1.eta_hat - a0.eta_hat;
      var[k] = a1.var_natural + a0.var_natural;
    } else {
      theta[k] = std::log(a1.eta_hat / a0.eta_hat);
      var[k] = a1.var_log + a0.var_log;
    }
  }
  ContrastResult res = inverse_variance_combine(theta, var, alpha);
  res.method = Method::conventional;
  res.scale = scale;
  if (scale == ContrastScale::ratio) {
    res.estimate = std::exp(res.estimate);
    res.ci_low = std::exp(res.ci_low);
    res.ci_high = std::exp(res.ci_high);
  }
  return res;
}

// CMH-type adjusted AHs: weighted averages of stratum AHs per arm with the
// variant's weights, plus the equivalent stratum weights that express the
// adjusted RAH as a weighted average of stratum-specific RAHs.
struct CmhResult {
  double eta_control = 0.0;
  double eta_treatment = 0.0;
  double dah = 0.0;
  double rah = 0.0;
  std::vector<double> weights;        // w^CMH, normalized
  std::vector<double> ratio_weights;  // w^CMH*, normalized
};

inline CmhResult cmh_adjusted_ah(std::span<const CellFit> cells_control,
                                 std::span<const CellFit> cells_treatment,
                                 Method variant, double tau) {
  if (variant != Method::cmh1 && variant != Method::cmh2)
    throw InvalidInput("cmh_adjusted_ah: variant must be cmh1 or cmh2");
  if (cells_control.size() != cells_treatment.size())
    throw MissingStratumArm("cmh_adjusted_ah: strata differ between arms");
  const std::size_t K = cells_control.size();

  CmhResult res;
  res.weights.resize(K);
  res.ratio_weights.resize(K);
  double num1 = 0.0, num0 = 0.0, wsum = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    const AhEstimate a0 = detail::stratum_ah_summary(cells_control[k], tau);
    const AhEstimate a1 = detail::stratum_ah_summary(cells_treatment[k], tau);
    if (a0.events == 0 || a1.events == 0)
      throw ZeroEvents("cmh_adjusted_ah: stratum " + std::to_string(k) +
                       " has an arm with no events by tau");
    const double n0 = a0.n, n1 = a1.n;
    const double denom = variant == Method::cmh1
                             ? n1 + n0
                             : n1 * a1.r_hat + n0 * a0.r_hat;
    const double w = n1 * n0 * a1.r_hat * a0.r_hat / denom;
    res.weights[k] = w;
    res.ratio_weights[k] = n1 * n0 * a0.f_hat * a1.r_hat / denom;
    num1 += w * a1.eta_hat;
    num0 += w * a0.eta_hat;
    wsum += w;
  }
  res.eta_treatment = num1 / wsum;
  res.eta_control = num0 / wsum;
  res.dah = res.eta_treatment - res.eta_control;
  res.rah = res.eta_treatment / res.eta_control;
  res.weights = detail::normalized(std::move(res.weights));
  res.ratio_weights = detail::normalized(std::move(res.ratio_weights));
  return res;
}

}  // namespace stratah
