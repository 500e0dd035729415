#pragma once

#include "svmscreen/dataset.hpp"

#include <optional>
#include <vector>

namespace svmscreen {

/// Gradient of h(w, b) = ½ Σᵢ max(1 − yᵢ(wᵀxᵢ + b), 0)².
struct SmoothGradient {
  Vector w;
  double b = 0.0;
};

struct SolverOptions {
  /// Stop once the largest KKT residual (see KktReport) is at most this.
  double tol = 1e-9;
  int max_iter = 100000;
  /// Accepted iterations between KKT checks.
  int check_every = 10;
  /// Keep the objective after every accepted iteration.
  bool record_trace = false;
};

struct WarmStart {
  Vector weights;
  double bias = 0.0;
};

struct PrimalModel {
  double lambda = 0.0;
  Vector weights;
  double bias = 0.0;
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
  /// Largest KKT residual at the returned point.
  double kkt_residual = 0.0;
  std::vector<double> objective_trace;
};

/// Scaled dual point θ = α/λ.
struct ThetaVector {
  Vector values;
  double lambda = 0.0;
};

/// Optimality diagnostics in the scaled dual: θ ≥ 0, θᵀy = 0, |θᵀf̂_j| ≤ 1,
/// and θᵀf̂_j = sign(w_j) on the support.
struct KktReport {
  Vector correlation;          // θᵀf̂_j for every feature
  double bound_violation = 0;  // max_j (|θᵀf̂_j| − 1)₊
  double sign_mismatch = 0;    // max over w_j ≠ 0 of |θᵀf̂_j − sign(w_j)|
  double y_residual = 0;       // |θᵀy|
  double negativity = 0;       // (−min θᵢ)₊

  double max_residual() const;
};

struct LambdaMax {
  double value = 0.0;
  double bias = 0.0;
  /// Σᵢ (yᵢ − b*) xᵢ; its largest entries mark the first features to enter.
  Vector direction;
};

double smooth_loss(const Dataset& data, const Vector& w, double b);
double primal_objective(const Dataset& data, double lambda, const Vector& w, double b);
SmoothGradient grad_h(const Dataset& data, const Vector& w, double b);

/// Accelerated proximal gradient on h(w, b) + λ‖w‖₁ with backtracking and
/// function-value restarts. The bias is an unpenalized coordinate. A cold
/// start begins at w = 0, b = (n₊ − n₋)/n.
PrimalModel solve_primal(const Dataset& data, double lambda, const SolverOptions& options = {},
                         const std::optional<WarmStart>& warm = std::nullopt);

/// θᵢ = max(0, 1 − yᵢ(wᵀxᵢ + b)) / λ.
ThetaVector theta_from_primal(const Dataset& data, const Vector& w, double b, double lambda);

KktReport kkt_report(const Dataset& data, const Vector& w, double b, double lambda);
KktReport kkt_report(const Dataset& data, const PrimalModel& model);

LambdaMax lambda_max(const Dataset& data);

/// Indices (0-based) whose |direction_j| ties the maximum within a relative
/// 1e-12. Empty for a zero direction.
std::vector<Index> first_features(const Vector& direction);

}  // namespace svmscreen
