#include <doctest.h>

#include <cmath>
#include <vector>

#include "stratah/average_hazard.hpp"
#include "stratah/rng.hpp"
#include "stratah/standardized.hpp"
#include "stratah/weibull.hpp"

using namespace stratah;

namespace {

std::vector<Observation> censored_weibull_sample(int n, std::uint64_t seed,
                                                 double shape = 1.3,
                                                 double scale = 40.0,
                                                 double cens_scale = 60.0) {
  const WeibullParams event(shape, scale);
  const WeibullParams cens(1.0, cens_scale);
  RngStream rng(seed, 3);
  std::vector<Observation> out(static_cast<std::size_t>(n));
  for (auto& o : out) {
    const double t = event.from_uniform(rng.uniform());
    const double c = cens.from_uniform(rng.uniform());
    o = {std::min(t, c), t <= c};
  }
  return out;
}

}  // namespace

TEST_SUITE("average_hazard") {

TEST_CASE("three uncensored events at tau 3") {
  const std::vector<Observation> s{{1, true}, {2, true}, {3, true}};
  const AhEstimate est = stratum_ah(s, 3.0);
  CHECK(est.f_hat == doctest::Approx(1.0));
  CHECK(est.r_hat == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(est.eta_hat == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(est.eta_hat == est.f_hat / est.r_hat);  // exact identity
  CHECK(est.events == 3);
  CHECK(est.var_log > 0.0);
}

TEST_CASE("exponential fixed point") {
  const double lam = 0.02, tau = 30.0;
  const WeibullParams law(1.0, 1.0 / lam);
  RngStream rng(7, 0);
  std::vector<Observation> s(100000);
  for (auto& o : s) o = {law.from_uniform(rng.uniform()), true};
  const AhEstimate est = stratum_ah(s, tau);
  CHECK(std::fabs(est.eta_hat - lam) / lam < 0.05);
}

TEST_CASE("zero events by tau") {
  const std::vector<Observation> s{{5, false}, {6, false}};
  CHECK_THROWS_AS(stratum_ah(s, 3.0), ZeroEvents);
}

TEST_CASE("tau beyond censored follow-up") {
  const std::vector<Observation> s{{1, true}, {2, false}};
  CHECK_THROWS_AS(stratum_ah(s, 3.0), TauBeyondData);

  // but fully resolved curves extrapolate at zero survival
  const std::vector<Observation> done{{1, true}, {2, true}};
  const AhEstimate est = stratum_ah(done, 3.0);
  CHECK(est.f_hat == 1.0);
  CHECK(est.r_hat == doctest::Approx(1.5).epsilon(1e-15));
}

TEST_CASE("scale equivariance") {
  const auto s = censored_weibull_sample(300, 11);
  const double tau = 25.0, c = 2.5;
  std::vector<Observation> scaled = s;
  for (auto& o : scaled) o.time *= c;
  const AhEstimate a = stratum_ah(s, tau);
  const AhEstimate b = stratum_ah(scaled, tau * c);
  CHECK(b.eta_hat == doctest::Approx(a.eta_hat / c).epsilon(1e-13));
  CHECK(b.f_hat == doctest::Approx(a.f_hat).epsilon(1e-14));
  CHECK(b.var_log == doctest::Approx(a.var_log).epsilon(1e-13));
  CHECK(b.var_natural == doctest::Approx(a.var_natural / (c * c)).epsilon(1e-13));
}

TEST_CASE("status beyond tau is ignorable for tau-truncated quantities") {
  auto s = censored_weibull_sample(200, 13);
  for (auto& o : s) o.event = true;  // uncensored baseline
  const double tau = 20.0;
  const AhEstimate a = stratum_ah(s, tau);
  std::vector<Observation> flipped = s;
  for (auto& o : flipped)
    if (o.time > tau) o.event = false;
  const AhEstimate b = stratum_ah(flipped, tau);
  CHECK(a.eta_hat == b.eta_hat);
  CHECK(a.f_hat == b.f_hat);
  CHECK(a.r_hat == b.r_hat);
  CHECK(a.var_log == b.var_log);
  CHECK(a.n == b.n);
}

TEST_CASE("delta-method variance equals the K=1 standardized variance") {
  const auto s = censored_weibull_sample(500, 17);
  const double tau = 30.0;
  const AhEstimate a = stratum_ah(s, tau);
  const double w[] = {1.0};
  const StandardizedAhEstimate g = standardized_ah({s}, w, tau);
  CHECK(g.eta_bar_hat == a.eta_hat);
  CHECK(g.var_w == a.var_log);
  // two algebraic routes to the natural-scale variance agree to >= 10 digits
  CHECK(a.var_natural == doctest::Approx(g.var_q).epsilon(1e-12));
}

TEST_CASE("variance diagnostic flags a dominating jump") {
  const std::vector<Observation> tiny{{1, true}, {2, true}};
  const AhEstimate est = stratum_ah(tiny, 2.0);
  CHECK(est.dominant_jump_share > 0.5);

  const auto s = censored_weibull_sample(2000, 23);
  const AhEstimate big = stratum_ah(s, 25.0);
  CHECK(big.dominant_jump_share < 0.5);
}

TEST_CASE("monte carlo SE calibration of var_natural") {
  // sd of eta over replicates should match the mean reported SE within 5%
  const WeibullParams law(1.46, 55.87);
  const double tau = 40.0;
  const int reps = 400, n = 460;
  std::vector<double> etas;
  double mean_se = 0.0;
  for (int r = 0; r < reps; ++r) {
    RngStream rng(555, std::uint64_t(r));
    std::vector<Observation> s(static_cast<std::size_t>(n));
    for (auto& o : s) o = {law.from_uniform(rng.uniform()), true};
    const AhEstimate est = stratum_ah(s, tau);
    etas.push_back(est.eta_hat);
    mean_se += std::sqrt(est.var_natural);
  }
  mean_se /= reps;
  double mean = 0.0;
  for (double e : etas) mean += e;
  mean /= reps;
  double ss = 0.0;
  for (double e : etas) ss += (e - mean) * (e - mean);
  const double sd = std::sqrt(ss / (reps - 1));
  CHECK(mean_se / sd == doctest::Approx(1.0).epsilon(0.12));
}

}  // TEST_SUITE
