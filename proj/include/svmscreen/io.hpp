#pragma once

#include "svmscreen/path.hpp"
#include "svmscreen/screening.hpp"
#include "svmscreen/solver.hpp"

#include <json.hpp>

#include <string>

namespace svmscreen {

// Feature indices in every serialized form are 1-based, as in the input files.

/// {lambda, bias, weights: [[index, value], ...], objective, iterations, converged}
/// with only the nonzero weights listed.
nlohmann::json model_to_json(const PrimalModel& model);
PrimalModel model_from_json(const nlohmann::json& j, Index n_features);

/// {lambda1, lambda2, kept, bounds, branches: {name: count}, elapsed_seconds}
nlohmann::json screen_report_to_json(const ScreenReport& report);

/// `lambda,kept,active,violations,screen_ms,solve_ms,objective`, one row per step.
std::string path_to_csv(const PathReport& report);
nlohmann::json path_to_json(const PathReport& report);

/// A JSON array of n reals.
Vector vector_from_json(const nlohmann::json& j);

}  // namespace svmscreen
