#include <doctest.h>

#include "stratah/step_function.hpp"

using namespace stratah;

TEST_SUITE("step_function") {

TEST_CASE("lookup is right-continuous") {
  const StepFunction f({1.0, 2.0, 3.0}, {0.6, 0.3, 0.0}, 1.0);
  CHECK(f(0.0) == 1.0);
  CHECK(f(0.999) == 1.0);
  CHECK(f(1.0) == 0.6);
  CHECK(f(1.5) == 0.6);
  CHECK(f(2.0) == 0.3);
  CHECK(f(3.0) == 0.0);
  CHECK(f(100.0) == 0.0);
}

TEST_CASE("integral is the exact piecewise sum") {
  const StepFunction f({1.0, 2.0, 3.0}, {0.6, 0.3, 0.0}, 1.0);
  CHECK(f.integral(0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(f.integral(0.0, 3.0) == doctest::Approx(1.0 + 0.6 + 0.3).epsilon(1e-15));
  CHECK(f.integral(0.0, 2.5) == doctest::Approx(1.0 + 0.6 + 0.15).epsilon(1e-15));
  CHECK(f.integral(1.5, 2.5) == doctest::Approx(0.3 + 0.15).epsilon(1e-15));
  CHECK(f.integral(5.0, 9.0) == 0.0);
  CHECK(f.integral(2.0, 2.0) == 0.0);
}

TEST_CASE("empty function is the constant before-first value") {
  const StepFunction f({}, {}, 1.0);
  CHECK(f(17.0) == 1.0);
  CHECK(f.integral(0.0, 10.0) == 10.0);
}

TEST_CASE("construction validates input") {
  CHECK_THROWS_AS(StepFunction({2.0, 1.0}, {0.5, 0.2}, 1.0), InvalidInput);
  CHECK_THROWS_AS(StepFunction({1.0, 1.0}, {0.5, 0.2}, 1.0), InvalidInput);
  CHECK_THROWS_AS(StepFunction({1.0}, {0.5, 0.2}, 1.0), InvalidInput);
  CHECK_THROWS_AS(StepFunction({-1.0}, {0.5}, 1.0), InvalidInput);
  const StepFunction f({1.0}, {0.5}, 1.0);
  CHECK_THROWS_AS(f.integral(2.0, 1.0), InvalidInput);
}

}  // TEST_SUITE
