#include "elmlab/dirichlet.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "elmlab/special_functions.hpp"

namespace elmlab {

namespace {
constexpr double kBoundaryClamp = 1e-12;
}

DirichletParams::DirichletParams(std::vector<double> alpha) : alpha_(std::move(alpha))
{
  if (alpha_.size() < 2) {
    throw std::invalid_argument("DirichletParams: need at least two classes");
  }
  for (double a : alpha_) {
    if (!(a > 0.0) || !std::isfinite(a)) {
      throw std::invalid_argument("DirichletParams: alpha must be positive and finite, got " + std::to_string(a));
    }
    total_ += a;
  }
  if (total_ > kAlphaMax * (1.0 + 1e-12)) {
    throw std::invalid_argument("DirichletParams: total concentration " + std::to_string(total_) +
                                " exceeds the cap " + std::to_string(kAlphaMax));
  }
}

DirichletParams DirichletParams::symmetric(std::size_t k, double c)
{
  return DirichletParams(std::vector<double>(k, c));
}

SimplexPoint DirichletParams::mean() const
{
  std::vector<double> m(alpha_.size());
  for (std::size_t k = 0; k < alpha_.size(); ++k) m[k] = alpha_[k] / total_;
  return SimplexPoint::normalized(std::move(m));
}

double DirichletParams::variance(std::size_t k) const
{
  const double a = alpha_.at(k);
  return a * (total_ - a) / (total_ * total_ * (total_ + 1.0));
}

double log_multivariate_beta(const DirichletParams& params) { return log_multivariate_beta(params.alpha()); }

double dirichlet_log_pdf(const DirichletParams& params, const SimplexPoint& theta)
{
  if (theta.size() != params.size()) {
    throw std::invalid_argument("dirichlet_log_pdf: dimension mismatch");
  }
  double acc = -log_multivariate_beta(params);
  for (std::size_t k = 0; k < params.size(); ++k) {
    const double t = std::clamp(theta[k], kBoundaryClamp, 1.0 - kBoundaryClamp);
    acc += (params[k] - 1.0) * std::log(t);
  }
  return acc;
}

double expected_log_theta(const DirichletParams& params, std::size_t k)
{
  return digamma(params[k]) - digamma(params.total());
}

double kl_dirichlet(const DirichletParams& q, const DirichletParams& prior)
{
  if (q.size() != prior.size()) {
    throw std::invalid_argument("kl_dirichlet: dimension mismatch");
  }
  const double psi_total = digamma(q.total());
  double kl = log_multivariate_beta(prior) - log_multivariate_beta(q);
  for (std::size_t k = 0; k < q.size(); ++k) {
    kl += (q[k] - prior[k]) * (digamma(q[k]) - psi_total);
  }
  return std::max(kl, 0.0);
}

}  // namespace elmlab
