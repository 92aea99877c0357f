#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "elmlab/elm.hpp"
#include "elmlab/entropy.hpp"

using namespace elmlab;

namespace {

const SimplexGrid& grid2()
{
  static const SimplexGrid g = build_simplex_grid(2, 1000);
  return g;
}

std::vector<Label> labels_from_counts(const std::vector<std::size_t>& counts)
{
  std::vector<Label> out;
  for (std::size_t k = 0; k < counts.size(); ++k) out.insert(out.end(), counts[k], Label{k});
  return out;
}

}  // namespace

TEST_CASE("parametrization round trip and cap")
{
  const MixtureParametrization p(3, 2, kAlphaMax);
  CHECK(p.dimension() == 7);
  const std::vector<std::vector<double>> alphas = {{1.0, 2.0, 3.0}, {10.0, 0.5, 7.0}};
  const std::vector<double> w = {0.25, 0.75};
  const Level2Distribution q = p.decode(p.encode(alphas, w));
  const DirichletMixture m = q.as_mixture();
  CHECK(m.weights()[1] == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(m.components()[1][2] == doctest::Approx(7.0).epsilon(1e-9));

  std::vector<double> huge(7, 1e3);
  const DirichletMixture capped = p.decode(huge).as_mixture();
  for (const auto& c : capped.components()) CHECK(c.total() <= kAlphaMax);
  CHECK_THROWS_AS(p.decode(std::vector<double>(3, 0.0)), std::invalid_argument);
  CHECK_THROWS_AS(p.encode({{1.0, 2.0, 4e5}, {1.0, 1.0, 1.0}}, w), std::invalid_argument);
}

TEST_CASE("dirac check examples")
{
  CHECK(dirac_check(Dirac{SimplexPoint({0.3, 0.7})}, grid2()));
  CHECK_FALSE(dirac_check(DirichletParams({1.0, 1.0}), grid2()));
  CHECK(dirac_check(DirichletParams({5e5, 5e5}), grid2()));
  // Concentrated but small total: Beta(1.5, 2730) sits against the corner.
  CHECK(dirac_check(DirichletParams({1.5, 2730.0}), grid2()));
  // Two separated spikes are not a point mass.
  CHECK_FALSE(dirac_check(DirichletMixture({0.5, 0.5}, {DirichletParams({4e5, 1e5}), DirichletParams({1e5, 4e5})}),
                          grid2()));
  // A negligible second component does not matter.
  CHECK(dirac_check(DirichletMixture({0.9995, 0.0005}, {DirichletParams({4e5, 1e5}), DirichletParams({1.0, 1.0})}),
                    grid2()));
}

TEST_CASE("lambda = 0 with counts (5, 5) collapses to a Dirac at the frequency")
{
  const LossConfig cfg{Level1LossKind::Brier, RegularizerKind::neg_entropy(), 0.0};
  SeededRng rng(1, 1);
  const auto labels = labels_from_counts({5, 5});
  const ElmFit fit = fit_elm(labels, 2, cfg, {}, rng);
  CHECK(fit.is_dirac);
  CHECK(fit.quantized_entropy_bits == 0.0);
  CHECK(fit.predicted_mean[1] == doctest::Approx(0.5).epsilon(0.02));
  CHECK(std::abs(fit.objective - empirical_l2_risk(cfg, fit.q, labels)) < 1e-9);
}

TEST_CASE("lambda = 1e-5 stays a Dirac")
{
  const LossConfig cfg{Level1LossKind::BinaryBrier, RegularizerKind::neg_entropy(), 1e-5};
  for (std::vector<std::size_t> counts : {std::vector<std::size_t>{10, 0}, {7, 3}, {480, 520}, {95000, 5000}}) {
    SeededRng rng(2, counts[0]);
    const ElmFit fit = fit_elm_counts(counts, cfg, {}, rng, grid2());
    CHECK(fit.is_dirac);
    CHECK(fit.quantized_entropy_bits <= 0.05);
  }
}

TEST_CASE("lambda = 10 at N = 1e5 keeps about 4.9 bits")
{
  const LossConfig cfg{Level1LossKind::BinaryBrier, RegularizerKind::neg_entropy(), 10.0};
  SeededRng rng(3, 3);
  const std::vector<std::size_t> counts = {50000, 50000};
  const ElmFit fit = fit_elm_counts(counts, cfg, {}, rng, grid2());
  CHECK_FALSE(fit.is_dirac);
  CHECK(std::abs(fit.quantized_entropy_bits - 4.870) <= 0.3);
  CHECK(fit.starts_agreeing >= 1);
}

TEST_CASE("local-minimum certificate and objective consistency")
{
  const MixtureParametrization p(2, 2, kAlphaMax);
  for (double lambda : {0.0, 0.5, 10.0}) {
    const LossConfig cfg{Level1LossKind::BinaryBrier, RegularizerKind::neg_entropy(), lambda};
    const std::vector<std::size_t> counts = {37, 63};
    OptimizerConfig opt;
    SeededRng rng(4, 4);
    const ElmFit fit = fit_elm_counts(counts, cfg, opt, rng, grid2());
    CHECK(fit.objective == doctest::Approx(empirical_l2_risk_from_counts(cfg, fit.q, counts)).epsilon(1e-12));
    for (std::size_t i = 0; i < fit.parameters.size(); ++i) {
      for (double s : {-1.0, 1.0}) {
        std::vector<double> x = fit.parameters;
        x[i] += s * 0.01 * std::max(std::abs(x[i]), 1.0);
        const double v = empirical_l2_risk_from_counts(cfg, p.decode(x), counts);
        CHECK(v >= fit.objective - opt.tolerance);
      }
    }
  }
}

TEST_CASE("fits are deterministic")
{
  const LossConfig cfg{Level1LossKind::BinaryBrier, RegularizerKind::neg_entropy(), 1.0};
  const std::vector<std::size_t> counts = {40, 60};
  SeededRng a(5, 5), b(5, 5);
  const ElmFit fa = fit_elm_counts(counts, cfg, {}, a, grid2());
  const ElmFit fb = fit_elm_counts(counts, cfg, {}, b, grid2());
  CHECK(fa.parameters == fb.parameters);
  CHECK(fa.objective == fb.objective);
  CHECK(fa.q == fb.q);
}

TEST_CASE("three classes")
{
  const LossConfig cfg{Level1LossKind::Brier, RegularizerKind::neg_entropy(), 0.0};
  SeededRng rng(6, 6);
  OptimizerConfig opt;
  opt.starts = 4;
  const std::vector<std::size_t> counts = {5, 3, 2};
  const ElmFit fit = fit_elm_counts(counts, cfg, opt, rng);
  CHECK(fit.is_dirac);
  CHECK(fit.predicted_mean[0] == doctest::Approx(0.5).epsilon(0.02));
  CHECK(fit.predicted_mean[2] == doctest::Approx(0.2).epsilon(0.05));
}

TEST_CASE("input validation")
{
  const LossConfig cfg{Level1LossKind::Brier, RegularizerKind::neg_entropy(), 0.0};
  SeededRng rng(7, 7);
  const std::vector<Label> none;
  CHECK_THROWS_AS(fit_elm(none, 2, cfg, {}, rng), std::invalid_argument);
  OptimizerConfig bad;
  bad.starts = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = {};
  bad.tolerance = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("a budget too small to converge raises FitError")
{
  const LossConfig cfg{Level1LossKind::Brier, RegularizerKind::neg_entropy(), 1.0};
  OptimizerConfig opt;
  opt.max_iterations = 3;
  opt.starts = 2;
  SeededRng rng(8, 8);
  const std::vector<std::size_t> counts = {3, 7};
  CHECK_THROWS_AS(fit_elm_counts(counts, cfg, opt, rng, grid2()), FitError);
}
