#pragma once

#include "svmscreen/screening.hpp"
#include "svmscreen/solver.hpp"

#include <vector>

namespace svmscreen {

struct PathConfig {
  int grid_size = 10;
  double ratio = 0.8;
  /// When nonempty, used instead of the geometric grid. Must be strictly
  /// decreasing, positive, and below λ_max.
  std::vector<double> lambdas;
  SolverOptions solver;
  /// Also solve the full problem at each step and count discarded features
  /// that are active there.
  bool verify = false;
  bool screen = true;
  int threads = 1;
};

struct PathStep {
  double lambda = 0.0;
  Index kept = 0;
  Index active = 0;
  Index violations = 0;
  double screen_ms = 0.0;
  double solve_ms = 0.0;
  double objective = 0.0;
  bool converged = false;
  /// False when the screening input (previous step) did not converge or its
  /// θ failed the feasibility check; nothing is screened in the latter case.
  bool trusted = true;
  /// Filled in verify mode.
  bool verified = false;
  double full_objective = 0.0;
  double max_weight_gap = 0.0;
  PrimalModel model;
};

struct PathReport {
  double lambda_max = 0.0;
  std::vector<PathStep> steps;
};

/// [λ_max·ratio, λ_max·ratio², …, λ_max·ratioᵏ].
std::vector<double> lambda_grid(double lambda_max, int k, double ratio);

/// Runs the regularization path. Each step screens with the previous model
/// through screen_from_model (λ_max and its closed-form θ for the first
/// step), solves
/// over the kept features warm-started from the previous weights, and
/// rebuilds the full model. Throws std::domain_error when λ_max = 0.
PathReport run_path(const Dataset& data, const PathConfig& config);

}  // namespace svmscreen
