#include <doctest.h>

#include <cmath>
#include <set>

#include "stratah/numeric.hpp"
#include "stratah/rng.hpp"
#include "stratah/weibull.hpp"

using namespace stratah;

TEST_SUITE("numeric") {

TEST_CASE("quadrature is exact on polynomials") {
  CHECK(integrate([](double x) { return x; }, 0.0, 1.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(integrate([](double x) { return x * x * x * x * x * x * x; }, 0.0, 1.0) ==
        doctest::Approx(1.0 / 8.0).epsilon(1e-14));
  CHECK(integrate([](double x) { return 3.0; }, 2.0, 7.0) ==
        doctest::Approx(15.0).epsilon(1e-14));
}

TEST_CASE("quadrature matches closed forms") {
  const double lam = 0.02;
  const double got = integrate([&](double u) { return std::exp(-lam * u); }, 0.0, 48.0);
  CHECK(got == doctest::Approx((1.0 - std::exp(-lam * 48.0)) / lam).epsilon(1e-12));

  // mildly singular derivative at 0 (Weibull shape < 1 exponent in f'')
  const WeibullParams w(1.37, 87.64);
  const double r1 = w.rmst(48.0, 1e-10);
  const double r2 = w.rmst(48.0, 1e-12);
  CHECK(std::fabs(r1 - r2) < 1e-8);
}

TEST_CASE("weibull shape=1 is exponential") {
  const double lam = 0.01;
  const WeibullParams w(1.0, 1.0 / lam);
  CHECK(w.survival(30.0) == doctest::Approx(std::exp(-0.3)).epsilon(1e-15));
  CHECK(w.rmst(30.0) ==
        doctest::Approx((1.0 - std::exp(-0.3)) / lam).epsilon(1e-12));
}

TEST_CASE("normal quantile and cdf") {
  CHECK(normal_quantile(0.5) == 0.0);
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-10));
  CHECK(normal_quantile(0.025) == doctest::Approx(-1.959963984540054).epsilon(1e-10));
  for (double p : {1e-8, 1e-3, 0.2, 0.4, 0.6, 0.9, 1.0 - 1e-6})
    CHECK(normal_cdf(normal_quantile(p)) == doctest::Approx(p).epsilon(1e-11));
  // representing 1-p caps the achievable symmetry in the far tails
  for (double p : {1e-3, 0.2, 0.4, 0.6, 0.9})
    CHECK(normal_quantile(p) == doctest::Approx(-normal_quantile(1.0 - p)).epsilon(1e-11));
  CHECK(two_sided_p(1.959963984540054) == doctest::Approx(0.05).epsilon(1e-9));
  CHECK(two_sided_p(0.0) == 1.0);
  CHECK_THROWS_AS(normal_quantile(0.0), InvalidInput);
  CHECK_THROWS_AS(normal_quantile(1.0), InvalidInput);
}

TEST_CASE("philox known-answer vectors") {
  // Random123 kat_vectors for philox4x32, 10 rounds
  auto zeros = Philox4x32::block({0, 0, 0, 0}, {0, 0});
  CHECK(zeros[0] == 0x6627e8d5u);
  CHECK(zeros[1] == 0xe169c58du);
  CHECK(zeros[2] == 0xbc57ac4cu);
  CHECK(zeros[3] == 0x9b00dbd8u);

  auto ones = Philox4x32::block({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                {0xffffffffu, 0xffffffffu});
  CHECK(ones[0] == 0x408f276du);
  CHECK(ones[1] == 0x41c83b0eu);
  CHECK(ones[2] == 0xa20bc7c6u);
  CHECK(ones[3] == 0x6d5451fdu);

  auto pi = Philox4x32::block({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                              {0xa4093822u, 0x299f31d0u});
  CHECK(pi[0] == 0xd16cfe09u);
  CHECK(pi[1] == 0x94fdccebu);
  CHECK(pi[2] == 0x5001e420u);
  CHECK(pi[3] == 0x24126ea1u);
}

TEST_CASE("rng streams are deterministic and distinct") {
  RngStream a(42, 7), b(42, 7), c(42, 8), d(43, 7);
  bool same_ab = true, same_ac = true, same_ad = true;
  double first = -1.0;
  for (int i = 0; i < 100; ++i) {
    const double ua = a.uniform();
    if (i == 0) first = ua;
    same_ab = same_ab && ua == b.uniform();
    same_ac = same_ac && ua == c.uniform();
    same_ad = same_ad && ua == d.uniform();
  }
  CHECK(same_ab);
  CHECK_FALSE(same_ac);
  CHECK_FALSE(same_ad);
  CHECK(first > 0.0);
  CHECK(first < 1.0);
}

TEST_CASE("rng uniforms stay strictly inside (0,1) and look uniform") {
  RngStream s(123, 0);
  double sum = 0.0, lo = 1.0, hi = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = s.uniform();
    sum += u;
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  CHECK(lo > 0.0);
  CHECK(hi < 1.0);
  // mean of n uniforms: sd = 1/sqrt(12 n) ~ 6.5e-4; allow 5 sigma
  CHECK(std::fabs(sum / n - 0.5) < 5.0 / std::sqrt(12.0 * n));
}

}  // TEST_SUITE
