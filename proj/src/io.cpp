#include "svmscreen/io.hpp"

#include <charconv>
#include <sstream>
#include <stdexcept>

namespace svmscreen {

using nlohmann::json;

namespace {

// Shortest text that reads back to the same double.
std::string shortest(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

json model_to_json(const PrimalModel& model) {
  json weights = json::array();
  for (Index j = 0; j < model.weights.size(); ++j) {
    if (model.weights[j] != 0.0) weights.push_back(json::array({j + 1, model.weights[j]}));
  }
  return json{{"lambda", model.lambda},
              {"bias", model.bias},
              {"weights", std::move(weights)},
              {"objective", model.objective},
              {"iterations", model.iterations},
              {"converged", model.converged}};
}

PrimalModel model_from_json(const json& j, Index n_features) {
  PrimalModel model;
  model.lambda = j.at("lambda").get<double>();
  model.bias = j.at("bias").get<double>();
  model.objective = j.value("objective", 0.0);
  model.iterations = j.value("iterations", 0);
  model.converged = j.value("converged", false);
  model.weights = Vector::Zero(n_features);
  for (const auto& entry : j.at("weights")) {
    const auto index = entry.at(0).get<long long>();
    if (index < 1 || index > n_features) throw std::out_of_range("weight index out of range");
    model.weights[static_cast<Index>(index - 1)] = entry.at(1).get<double>();
  }
  return model;
}

json screen_report_to_json(const ScreenReport& report) {
  json kept = json::array();
  for (Index j : report.kept) kept.push_back(j + 1);
  json bounds = json::array();
  for (const auto& fb : report.bounds) bounds.push_back(fb.bound);
  json branches = json::object();
  for (std::size_t b = 0; b < kBranchCount; ++b) {
    branches[std::string(branch_name(static_cast<Branch>(b)))] = report.branch_counts[b];
  }
  return json{{"lambda1", report.lambda1},
              {"lambda2", report.lambda2},
              {"kept", std::move(kept)},
              {"bounds", std::move(bounds)},
              {"branches", std::move(branches)},
              {"elapsed_seconds", report.elapsed_seconds}};
}

std::string path_to_csv(const PathReport& report) {
  std::ostringstream out;
  out << "lambda,kept,active,violations,screen_ms,solve_ms,objective\n";
  for (const auto& s : report.steps) {
    out << shortest(s.lambda) << ',' << s.kept << ',' << s.active << ',' << s.violations << ','
        << shortest(s.screen_ms) << ',' << shortest(s.solve_ms) << ',' << shortest(s.objective) << '\n';
  }
  return out.str();
}

json path_to_json(const PathReport& report) {
  json steps = json::array();
  for (const auto& s : report.steps) {
    steps.push_back(json{{"lambda", s.lambda},
                         {"kept", s.kept},
                         {"active", s.active},
                         {"violations", s.violations},
                         {"screen_ms", s.screen_ms},
                         {"solve_ms", s.solve_ms},
                         {"objective", s.objective},
                         {"converged", s.converged},
                         {"trusted", s.trusted},
                         {"verified", s.verified}});
  }
  return json{{"lambda_max", report.lambda_max}, {"steps", std::move(steps)}};
}

Vector vector_from_json(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("expected a JSON array of numbers");
  Vector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw std::invalid_argument("expected a JSON array of numbers");
    v[static_cast<Index>(i)] = j[i].get<double>();
  }
  return v;
}

}  // namespace svmscreen
