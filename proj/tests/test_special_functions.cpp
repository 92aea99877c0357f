#include <doctest.h>

#include <boost/math/special_functions/digamma.hpp>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "elmlab/special_functions.hpp"

using namespace elmlab;

TEST_CASE("digamma anchors")
{
  CHECK(digamma(1.0) == doctest::Approx(-0.5772156649015329).epsilon(1e-12));
  CHECK(std::abs(digamma(2.0) - digamma(1.0) - 1.0) < 1e-12);
  CHECK(digamma(0.5) == doctest::Approx(-0.5772156649015329 - 2.0 * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("digamma matches boost across [1e-6, 1e8]")
{
  for (double lx = -6.0; lx <= 8.0; lx += 0.05) {
    const double x = std::pow(10.0, lx);
    const double want = boost::math::digamma(x);
    const double got = digamma(x);
    INFO("x = " << x);
    CHECK(std::abs(got - want) <= 1e-10 * std::max(1.0, std::abs(want)));
  }
}

TEST_CASE("digamma recurrence")
{
  for (double x : {1e-3, 0.37, 1.5, 7.25, 12.0, 99.5}) {
    CHECK(std::abs(digamma(x + 1.0) - digamma(x) - 1.0 / x) < 1e-10 * std::max(1.0, 1.0 / x));
  }
}

TEST_CASE("digamma rejects non-positive input")
{
  CHECK_THROWS_AS(digamma(0.0), std::domain_error);
  CHECK_THROWS_AS(digamma(-1.5), std::domain_error);
  CHECK_THROWS_AS(digamma(std::numeric_limits<double>::quiet_NaN()), std::domain_error);
}

TEST_CASE("log multivariate beta")
{
  const std::vector<double> ones = {1.0, 1.0, 1.0};
  CHECK(log_multivariate_beta(ones) == doctest::Approx(-std::log(2.0)).epsilon(1e-14));
  const std::vector<double> ab = {2.5, 0.7};
  CHECK(log_multivariate_beta(ab) ==
        doctest::Approx(std::lgamma(2.5) + std::lgamma(0.7) - std::lgamma(3.2)).epsilon(1e-13));
}

TEST_CASE("log_sum_exp and softplus")
{
  const std::vector<double> v = {1000.0, 1000.0};
  CHECK(log_sum_exp(v) == doctest::Approx(1000.0 + std::log(2.0)));
  const std::vector<double> empty;
  CHECK(log_sum_exp(empty) == -std::numeric_limits<double>::infinity());
  CHECK(softplus(0.0) == doctest::Approx(std::log(2.0)));
  CHECK(softplus(800.0) == doctest::Approx(800.0));
  CHECK(softplus(-800.0) >= 0.0);
  CHECK(softplus(-30.0) == doctest::Approx(std::exp(-30.0)).epsilon(1e-10));
}
