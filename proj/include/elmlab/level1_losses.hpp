#pragma once

#include <span>
#include <string_view>

#include "elmlab/simplex.hpp"

namespace elmlab {

/// Level-1 losses L1(theta, y).
///   Brier       : sum_k (theta_k - [y == k])^2
///   LogLoss     : -log theta_y, theta_y clamped at 1e-12 (natural log)
///   BinaryBrier : (theta_1 - [y == 1])^2, K = 2 only; half the two-class Brier sum.
enum class Level1LossKind { Brier, LogLoss, BinaryBrier };

/// Lower clamp on theta_y inside the log-loss.
inline constexpr double kLogLossClamp = 1e-12;

std::string_view to_string(Level1LossKind kind);
/// Inverse of to_string; throws std::invalid_argument on unknown names.
Level1LossKind level1_loss_from_string(std::string_view name);

double level1_loss(Level1LossKind kind, const SimplexPoint& theta, Label y);

/// Mean per-example loss. Throws std::invalid_argument on empty or
/// mismatched inputs.
double empirical_risk(Level1LossKind kind, std::span<const SimplexPoint> predictions, std::span<const Label> labels);

/// sum_y theta*(y) L1(theta, y).
double expected_loss_under_truth(Level1LossKind kind, const SimplexPoint& theta, const SimplexPoint& theta_star);

/// Level-1 loss obtained by averaging the 0/1 level-0 loss under p: 1 - p(y).
double expected_level0_loss(const SimplexPoint& p, Label y);

}  // namespace elmlab
