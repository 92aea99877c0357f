#include <doctest.h>

#include <cmath>
#include <limits>

#include "elmlab/nelder_mead.hpp"

using namespace elmlab;

TEST_CASE("quadratic bowl")
{
  const Objective f = [](std::span<const double> x) {
    return (x[0] - 1.0) * (x[0] - 1.0) + 10.0 * (x[1] + 2.0) * (x[1] + 2.0);
  };
  const auto r = nelder_mead(f, {5.0, 5.0}, {});
  CHECK(r.converged);
  CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(r.x[1] == doctest::Approx(-2.0).epsilon(1e-3));
  CHECK(r.value < 1e-7);
}

TEST_CASE("Rosenbrock")
{
  const Objective f = [](std::span<const double> x) {
    return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
  };
  NelderMeadOptions opt;
  opt.max_iterations = 5000;
  opt.tolerance = 1e-14;
  const auto r = nelder_mead(f, {-1.2, 1.0}, opt);
  CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(r.x[1] == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("non-finite values are avoided")
{
  const Objective f = [](std::span<const double> x) {
    if (x[0] < 0.0) return std::numeric_limits<double>::quiet_NaN();
    return (x[0] - 0.5) * (x[0] - 0.5);
  };
  const auto r = nelder_mead(f, {3.0}, {});
  CHECK(r.value == doctest::Approx(0.0).epsilon(1e-8));
  CHECK(r.x[0] >= 0.0);
}

TEST_CASE("iteration budget is respected")
{
  const Objective f = [](std::span<const double> x) { return std::abs(x[0]) + std::abs(x[1]); };
  NelderMeadOptions opt;
  opt.max_iterations = 5;
  const auto r = nelder_mead(f, {100.0, -50.0}, opt);
  CHECK(r.iterations <= 5);
  CHECK_FALSE(r.converged);
}

TEST_CASE("deterministic")
{
  const Objective f = [](std::span<const double> x) { return std::cos(x[0]) + x[1] * x[1]; };
  const auto a = nelder_mead(f, {0.3, 0.2}, {});
  const auto b = nelder_mead(f, {0.3, 0.2}, {});
  CHECK(a.x == b.x);
  CHECK(a.evaluations == b.evaluations);
}
