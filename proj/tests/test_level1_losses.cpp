#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "elmlab/level1_losses.hpp"
#include "elmlab/level2_distribution.hpp"
#include "elmlab/rng.hpp"

using namespace elmlab;

TEST_CASE("loss examples")
{
  CHECK(level1_loss(Level1LossKind::Brier, SimplexPoint({0.5, 0.5}), Label{1}) == doctest::Approx(0.5));
  CHECK(level1_loss(Level1LossKind::LogLoss, SimplexPoint({1.0, 0.0}), Label{0}) == 0.0);
  CHECK(level1_loss(Level1LossKind::Brier, SimplexPoint({0.25, 0.75}), Label{0}) == doctest::Approx(1.125));
  CHECK(level1_loss(Level1LossKind::BinaryBrier, SimplexPoint({0.25, 0.75}), Label{0}) == doctest::Approx(0.5625));
  CHECK_THROWS_AS(level1_loss(Level1LossKind::BinaryBrier, SimplexPoint::uniform(3), Label{0}),
                  std::invalid_argument);
}

TEST_CASE("binary Brier is half the two-class sum")
{
  for (double t : {0.0, 0.1, 0.5, 0.93, 1.0}) {
    for (std::size_t y : {0u, 1u}) {
      const SimplexPoint th({1.0 - t, t});
      CHECK(level1_loss(Level1LossKind::BinaryBrier, th, Label{y}) ==
            doctest::Approx(0.5 * level1_loss(Level1LossKind::Brier, th, Label{y})));
    }
  }
}

TEST_CASE("log loss at the boundary is clamped")
{
  const double v = level1_loss(Level1LossKind::LogLoss, SimplexPoint({1.0, 0.0}), Label{1});
  CHECK(std::isfinite(v));
  CHECK(v == doctest::Approx(-std::log(kLogLossClamp)));
}

TEST_CASE("names round trip")
{
  for (auto k : {Level1LossKind::Brier, Level1LossKind::LogLoss, Level1LossKind::BinaryBrier}) {
    CHECK(level1_loss_from_string(to_string(k)) == k);
  }
  CHECK_THROWS_AS(level1_loss_from_string("hinge"), std::invalid_argument);
}

TEST_CASE("empirical risk")
{
  const std::vector<SimplexPoint> one = {SimplexPoint({0.5, 0.5})};
  const std::vector<Label> y1 = {Label{0}};
  CHECK(empirical_risk(Level1LossKind::Brier, one, y1) == doctest::Approx(0.5));
  const std::vector<SimplexPoint> two = {SimplexPoint({0.5, 0.5}), SimplexPoint({0.5, 0.5})};
  const std::vector<Label> y2 = {Label{0}, Label{1}};
  CHECK(empirical_risk(Level1LossKind::LogLoss, two, y2) == doctest::Approx(std::log(2.0)));
  const std::vector<SimplexPoint> none;
  const std::vector<Label> ynone;
  CHECK_THROWS_AS(empirical_risk(Level1LossKind::Brier, none, ynone), std::invalid_argument);
  CHECK_THROWS_AS(empirical_risk(Level1LossKind::Brier, two, y1), std::invalid_argument);

  // Sufficient statistics against direct summation.
  const SimplexPoint th({0.35, 0.65});
  std::vector<SimplexPoint> preds(37, th);
  std::vector<Label> ys;
  for (int i = 0; i < 37; ++i) ys.push_back(Label{i % 3 == 0 ? 1u : 0u});
  const double n1 = 13.0, n0 = 24.0;
  for (auto k : {Level1LossKind::Brier, Level1LossKind::LogLoss}) {
    const double want = (n1 * level1_loss(k, th, Label{1}) + n0 * level1_loss(k, th, Label{0})) / 37.0;
    CHECK(empirical_risk(k, preds, ys) == doctest::Approx(want).epsilon(1e-13));
  }
}

TEST_CASE("expected loss under truth")
{
  CHECK(expected_loss_under_truth(Level1LossKind::LogLoss, SimplexPoint({0.5, 0.5}), SimplexPoint({0.5, 0.5})) ==
        doctest::Approx(std::log(2.0)));
  CHECK(expected_loss_under_truth(Level1LossKind::Brier, SimplexPoint({0.25, 0.75}), SimplexPoint({0.25, 0.75})) ==
        doctest::Approx(0.375));
}

TEST_CASE("strict propriety on a 101-point grid")
{
  for (auto kind : {Level1LossKind::Brier, Level1LossKind::LogLoss, Level1LossKind::BinaryBrier}) {
    for (int s = 0; s <= 100; ++s) {
      const double ts = s / 100.0;
      const SimplexPoint star({1.0 - ts, ts});
      int best = -1;
      double best_v = INFINITY;
      int ties = 0;
      for (int i = 0; i <= 100; ++i) {
        const double t = i / 100.0;
        const double v = expected_loss_under_truth(kind, SimplexPoint({1.0 - t, t}), star);
        if (v < best_v - 1e-14) {
          best_v = v;
          best = i;
          ties = 0;
        } else if (std::abs(v - best_v) <= 1e-14) {
          ++ties;
        }
      }
      INFO("kind " << to_string(kind) << " theta* " << ts);
      CHECK(best == s);
      // log loss at the endpoints is flat only through the clamp
      if (kind != Level1LossKind::LogLoss) CHECK(ties == 0);
    }
  }
}

TEST_CASE("convexity witness")
{
  SeededRng rng(31, 4);
  for (int i = 0; i < 1000; ++i) {
    const SimplexPoint a = dirichlet_sample(DirichletParams({1.0, 1.0, 1.0}), rng);
    const SimplexPoint b = dirichlet_sample(DirichletParams({1.0, 1.0, 1.0}), rng);
    const SimplexPoint mid = SimplexPoint::normalized({0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1]), 0.5 * (a[2] + b[2])});
    const Label y{static_cast<std::size_t>(i % 3)};
    for (auto kind : {Level1LossKind::Brier, Level1LossKind::LogLoss}) {
      CHECK(level1_loss(kind, mid, y) <= 0.5 * (level1_loss(kind, a, y) + level1_loss(kind, b, y)) + 1e-12);
    }
  }
}

TEST_CASE("level-0 averaging")
{
  CHECK(expected_level0_loss(SimplexPoint({1.0, 0.0}), Label{0}) == 0.0);
  CHECK(expected_level0_loss(SimplexPoint({0.5, 0.5}), Label{1}) == 0.5);
  // Linear in p: the minimiser over the simplex is a vertex, the mode of theta*.
  const SimplexPoint star({0.3, 0.7});
  double best = INFINITY;
  double best_t = -1;
  for (int i = 0; i <= 100; ++i) {
    const SimplexPoint p({1.0 - i / 100.0, i / 100.0});
    const double v = 0.3 * expected_level0_loss(p, Label{0}) + 0.7 * expected_level0_loss(p, Label{1});
    if (v < best) {
      best = v;
      best_t = i / 100.0;
    }
  }
  CHECK(best_t == 1.0);
}
