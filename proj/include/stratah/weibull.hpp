#pragma once

#include <cmath>

#include "stratah/errors.hpp"
#include "stratah/numeric.hpp"

namespace stratah {

// Weibull law with S(t) = exp{-(t/scale)^shape}; time unit is months here.
struct WeibullParams {
  double shape = 1.0;
  double scale = 1.0;

  WeibullParams() = default;
  WeibullParams(double shape_, double scale_) : shape(shape_), scale(scale_) {
    if (!(shape > 0.0) || !(scale > 0.0) || !std::isfinite(shape) ||
        !std::isfinite(scale))
      throw InvalidInput("WeibullParams: shape and scale must be positive");
  }

  double survival(double t) const {
    if (t <= 0.0) return 1.0;
    return std::exp(-std::pow(t / scale, shape));
  }

  double cuminc(double t) const { return 1.0 - survival(t); }

  // Inverse-transform draw: maps u in (0,1) to scale * (-log u)^(1/shape).
  double from_uniform(double u) const {
    return scale * std::pow(-std::log(u), 1.0 / shape);
  }

  // Restricted mean survival time by adaptive quadrature.
  double rmst(double tau, double abs_tol = 1e-10) const {
    if (!(tau > 0.0)) throw InvalidInput("WeibullParams::rmst: tau must be > 0");
    return integrate([this](double u) { return survival(u); }, 0.0, tau,
                     abs_tol);
  }
};

}  // namespace stratah
