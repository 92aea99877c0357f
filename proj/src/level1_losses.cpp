#include "elmlab/level1_losses.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace elmlab {

std::string_view to_string(Level1LossKind kind)
{
  switch (kind) {
    case Level1LossKind::Brier: return "brier";
    case Level1LossKind::LogLoss: return "log_loss";
    case Level1LossKind::BinaryBrier: return "brier_binary";
  }
  return "unknown";
}

Level1LossKind level1_loss_from_string(std::string_view name)
{
  if (name == "brier") return Level1LossKind::Brier;
  if (name == "log_loss") return Level1LossKind::LogLoss;
  if (name == "brier_binary") return Level1LossKind::BinaryBrier;
  throw std::invalid_argument("unknown level-1 loss '" + std::string(name) + "'");
}

double level1_loss(Level1LossKind kind, const SimplexPoint& theta, Label y)
{
  if (y.index >= theta.size()) {
    throw std::invalid_argument("level1_loss: label out of range");
  }
  switch (kind) {
    case Level1LossKind::Brier: {
      double acc = 0.0;
      for (std::size_t k = 0; k < theta.size(); ++k) {
        const double d = theta[k] - (k == y.index ? 1.0 : 0.0);
        acc += d * d;
      }
      return acc;
    }
    case Level1LossKind::LogLoss:
      return -std::log(std::max(theta[y.index], kLogLossClamp));
    case Level1LossKind::BinaryBrier: {
      if (theta.size() != 2) {
        throw std::invalid_argument("level1_loss: the binary Brier score needs K = 2");
      }
      const double d = theta[1] - (y.index == 1 ? 1.0 : 0.0);
      return d * d;
    }
  }
  throw std::invalid_argument("level1_loss: unknown loss kind");
}

double empirical_risk(Level1LossKind kind, std::span<const SimplexPoint> predictions, std::span<const Label> labels)
{
  if (predictions.empty()) {
    throw std::invalid_argument("empirical_risk: empty data");
  }
  if (predictions.size() != labels.size()) {
    throw std::invalid_argument("empirical_risk: predictions and labels differ in length");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) acc += level1_loss(kind, predictions[i], labels[i]);
  return acc / static_cast<double>(labels.size());
}

double expected_loss_under_truth(Level1LossKind kind, const SimplexPoint& theta, const SimplexPoint& theta_star)
{
  if (theta.size() != theta_star.size()) {
    throw std::invalid_argument("expected_loss_under_truth: dimension mismatch");
  }
  double acc = 0.0;
  for (std::size_t y = 0; y < theta_star.size(); ++y) {
    if (theta_star[y] == 0.0) continue;
    acc += theta_star[y] * level1_loss(kind, theta, Label{y});
  }
  return acc;
}

double expected_level0_loss(const SimplexPoint& p, Label y)
{
  if (y.index >= p.size()) {
    throw std::invalid_argument("expected_level0_loss: label out of range");
  }
  return 1.0 - p[y.index];
}

}  // namespace elmlab
