#include "svmscreen/path.hpp"

#include <chrono>
#include <cmath>
#include <optional>
#include <stdexcept>

namespace svmscreen {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// All features screened out: w = 0 and the bias minimizes h(0, b) in closed form.
PrimalModel bias_only_model(const Dataset& data, double lambda, const SolverOptions& options) {
  PrimalModel model;
  model.lambda = lambda;
  model.weights = Vector::Zero(data.n_features());
  model.bias = static_cast<double>(data.n_pos() - data.n_neg()) / static_cast<double>(data.n_samples());
  model.objective = primal_objective(data, lambda, model.weights, model.bias);
  model.kkt_residual = kkt_report(data, model).max_residual();
  model.converged = model.kkt_residual <= options.tol;
  return model;
}

}  // namespace

std::vector<double> lambda_grid(double lambda_max, int k, double ratio) {
  if (k < 1) throw std::invalid_argument("grid size must be at least 1");
  if (!(ratio > 0.0 && ratio < 1.0)) throw std::invalid_argument("ratio must be in (0, 1)");
  if (!(lambda_max > 0.0)) throw std::invalid_argument("lambda_max must be positive");
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(k));
  double value = lambda_max;
  for (int i = 0; i < k; ++i) {
    value *= ratio;
    grid.push_back(value);
  }
  return grid;
}

PathReport run_path(const Dataset& data, const PathConfig& config) {
  const LambdaMax lm = lambda_max(data);
  if (lm.value == 0.0)
    throw std::domain_error("lambda_max is zero (all labels equal or all features orthogonal); the path is empty");

  std::vector<double> grid = config.lambdas;
  if (grid.empty()) {
    grid = lambda_grid(lm.value, config.grid_size, config.ratio);
  } else {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (!(grid[i] > 0.0)) throw std::invalid_argument("path lambdas must be positive");
      if (!(grid[i] < (i == 0 ? lm.value : grid[i - 1])))
        throw std::invalid_argument("path lambdas must be strictly decreasing and below lambda_max");
    }
  }

  const FeatureStats stats = compute_feature_stats(data);
  const Index m = data.n_features();

  PathReport report;
  report.lambda_max = lm.value;

  const ThetaVector theta_max = theta_at_lambda_max(data);
  std::optional<PrimalModel> previous;
  bool previous_converged = true;
  Vector weights = Vector::Zero(m);
  double bias = lm.bias;
  WarmStart full_warm{Vector::Zero(m), lm.bias};

  for (double lambda : grid) {
    PathStep step;
    step.lambda = lambda;
    step.trusted = previous_converged;

    std::vector<Index> kept;
    bool screened = false;
    if (config.screen) {
      // A loosely converged θ may miss the feasibility tolerance; then nothing
      // is screened and the step is not trusted.
      try {
        const ScreenReport screen = previous.has_value()
                                        ? screen_from_model(data, stats, *previous, lambda, config.threads)
                                        : screen_all(ScreeningContext::build(theta_max, lambda, data), data,
                                                     stats, config.threads);
        kept = screen.kept;
        step.screen_ms = screen.elapsed_seconds * 1e3;
        screened = true;
      } catch (const std::invalid_argument&) {
        step.trusted = false;
      }
    }
    if (!screened) {
      kept.resize(static_cast<std::size_t>(m));
      for (Index j = 0; j < m; ++j) kept[static_cast<std::size_t>(j)] = j;
    }
    step.kept = static_cast<Index>(kept.size());

    const auto solve_start = Clock::now();
    PrimalModel model;
    if (kept.empty()) {
      model = bias_only_model(data, lambda, config.solver);
    } else if (static_cast<Index>(kept.size()) == m) {
      model = solve_primal(data, lambda, config.solver, WarmStart{weights, bias});
    } else {
      const Dataset reduced = data.select_features(kept);
      Vector warm(static_cast<Index>(kept.size()));
      for (std::size_t k = 0; k < kept.size(); ++k) warm[static_cast<Index>(k)] = weights[kept[k]];
      const PrimalModel sub = solve_primal(reduced, lambda, config.solver, WarmStart{warm, bias});
      model = sub;
      model.weights = Vector::Zero(m);
      for (std::size_t k = 0; k < kept.size(); ++k) model.weights[kept[k]] = sub.weights[static_cast<Index>(k)];
      model.objective = primal_objective(data, lambda, model.weights, model.bias);
      model.kkt_residual = kkt_report(data, model).max_residual();
    }
    step.solve_ms = ms_since(solve_start);
    step.objective = model.objective;
    step.converged = model.converged;
    for (Index j = 0; j < m; ++j) step.active += model.weights[j] != 0.0 ? 1 : 0;

    if (config.verify && step.trusted && step.converged) {
      const PrimalModel full = solve_primal(data, lambda, config.solver, full_warm);
      step.full_objective = full.objective;
      if (full.converged) {
        step.verified = true;
        std::vector<bool> is_kept(static_cast<std::size_t>(m), false);
        for (Index j : kept) is_kept[static_cast<std::size_t>(j)] = true;
        for (Index j = 0; j < m; ++j) {
          if (!is_kept[static_cast<std::size_t>(j)] && std::abs(full.weights[j]) > 1e-8) ++step.violations;
        }
        step.max_weight_gap = (full.weights - model.weights).lpNorm<Eigen::Infinity>();
      }
      full_warm = WarmStart{full.weights, full.bias};
    }

    weights = model.weights;
    bias = model.bias;
    previous_converged = model.converged;
    step.model = std::move(model);
    previous = step.model;
    report.steps.push_back(std::move(step));
  }
  return report;
}

}  // namespace svmscreen
