#include "svmscreen/dataset.hpp"
#include "svmscreen/oracle.hpp"
#include "svmscreen/path.hpp"
#include "svmscreen/screening.hpp"
#include "svmscreen/solver.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>

namespace py = pybind11;
using namespace svmscreen;

namespace {

Dataset from_dense(const Eigen::MatrixXd& X, const Vector& y) { return Dataset(X.sparseView(), y); }

SolverOptions options(double tol, int max_iter) {
  SolverOptions o;
  o.tol = tol;
  o.max_iter = max_iter;
  return o;
}

py::dict branch_counts(const ScreenReport& r) {
  py::dict d;
  for (std::size_t b = 0; b < kBranchCount; ++b)
    d[py::str(std::string(branch_name(static_cast<Branch>(b))))] = r.branch_counts[b];
  return d;
}

// λ₁ defaults to λ_max. Below it θ₁ comes from `theta1` if given, otherwise
// from a solve at λ₁ screened through screen_from_model.
ScreenReport screen(const Dataset& data, double lambda2, std::optional<double> lambda1,
                    std::optional<Vector> theta1, int threads, double tol, int max_iter) {
  const LambdaMax lm = lambda_max(data);
  const double l1 = lambda1.value_or(lm.value);
  if (!(lambda2 < l1)) throw std::invalid_argument("lambda2 must be < lambda1");
  const FeatureStats stats = compute_feature_stats(data);
  if (theta1) return screen_all(ScreeningContext::build(ThetaVector{*theta1, l1}, lambda2, data), data, stats, threads);
  if (l1 == lm.value)
    return screen_all(ScreeningContext::build(theta_at_lambda_max(data), lambda2, data), data, stats, threads);
  const PrimalModel model = solve_primal(data, l1, options(tol, max_iter));
  return screen_from_model(data, stats, model, lambda2, threads);
}

}  // namespace

PYBIND11_MODULE(_svmscreen, m) {
  m.doc() = "Safe feature screening for the L1-regularized squared-hinge SVM";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  py::class_<Dataset>(m, "Dataset")
      .def(py::init<SparseMatrix, Vector>(), py::arg("features"), py::arg("labels"))
      .def_static("from_dense", &from_dense, py::arg("features"), py::arg("labels"))
      .def_property_readonly("n_samples", &Dataset::n_samples)
      .def_property_readonly("n_features", &Dataset::n_features)
      .def_property_readonly("n_pos", &Dataset::n_pos)
      .def_property_readonly("n_neg", &Dataset::n_neg)
      .def_property_readonly("features", &Dataset::features)
      .def_property_readonly("labels", &Dataset::labels)
      .def("select_features", &Dataset::select_features, py::arg("columns"))
      .def("to_text", &serialize_sparse_text)
      .def("__repr__", [](const Dataset& d) {
        return "<Dataset n_samples=" + std::to_string(d.n_samples()) +
               " n_features=" + std::to_string(d.n_features()) + ">";
      });

  m.def("read_sparse_file", [](const std::string& path, bool strict) {
    return read_sparse_file(path, ParseOptions{strict});
  }, py::arg("path"), py::arg("strict_labels") = false);
  m.def("parse_sparse_text", [](const std::string& text, bool strict) {
    return parse_sparse_text(text, ParseOptions{strict});
  }, py::arg("text"), py::arg("strict_labels") = false);

  py::class_<LambdaMax>(m, "LambdaMax")
      .def_readonly("value", &LambdaMax::value)
      .def_readonly("bias", &LambdaMax::bias)
      .def_readonly("direction", &LambdaMax::direction)
      .def_property_readonly("first_features", [](const LambdaMax& lm) { return first_features(lm.direction); });
  m.def("lambda_max", &lambda_max, py::arg("data"));

  py::class_<PrimalModel>(m, "PrimalModel")
      .def_readonly("lambda_", &PrimalModel::lambda)
      .def_readonly("weights", &PrimalModel::weights)
      .def_readonly("bias", &PrimalModel::bias)
      .def_readonly("objective", &PrimalModel::objective)
      .def_readonly("iterations", &PrimalModel::iterations)
      .def_readonly("converged", &PrimalModel::converged)
      .def_readonly("kkt_residual", &PrimalModel::kkt_residual)
      .def_readonly("objective_trace", &PrimalModel::objective_trace);

  m.def(
      "solve",
      [](const Dataset& data, double lambda, double tol, int max_iter, std::optional<Vector> warm_weights,
         double warm_bias, bool record_trace) {
        SolverOptions o = options(tol, max_iter);
        o.record_trace = record_trace;
        std::optional<WarmStart> warm;
        if (warm_weights) warm = WarmStart{*warm_weights, warm_bias};
        return solve_primal(data, lambda, o, warm);
      },
      py::arg("data"), py::arg("lam"), py::arg("tol") = 1e-9, py::arg("max_iter") = 100000,
      py::arg("warm_weights") = py::none(), py::arg("warm_bias") = 0.0, py::arg("record_trace") = false);

  m.def("objective", &primal_objective, py::arg("data"), py::arg("lam"), py::arg("weights"), py::arg("bias"));
  m.def("theta", [](const Dataset& d, const Vector& w, double b, double lambda) {
    return theta_from_primal(d, w, b, lambda).values;
  }, py::arg("data"), py::arg("weights"), py::arg("bias"), py::arg("lam"));
  m.def("kkt_residual", [](const Dataset& d, const Vector& w, double b, double lambda) {
    return kkt_report(d, w, b, lambda).max_residual();
  }, py::arg("data"), py::arg("weights"), py::arg("bias"), py::arg("lam"));

  py::class_<ScreenReport>(m, "ScreenReport")
      .def_readonly("lambda1", &ScreenReport::lambda1)
      .def_readonly("lambda2", &ScreenReport::lambda2)
      .def_readonly("kept", &ScreenReport::kept)
      .def_property_readonly("bounds",
                             [](const ScreenReport& r) {
                               Vector b(static_cast<Index>(r.bounds.size()));
                               for (std::size_t j = 0; j < r.bounds.size(); ++j) b[static_cast<Index>(j)] = r.bounds[j].bound;
                               return b;
                             })
      .def_property_readonly("branch_counts", &branch_counts)
      .def_readonly("elapsed_seconds", &ScreenReport::elapsed_seconds)
      .def("rejection_rate", &ScreenReport::rejection_rate);

  m.def("screen", &screen, py::arg("data"), py::arg("lambda2"), py::arg("lambda1") = py::none(),
        py::arg("theta1") = py::none(), py::arg("threads") = 1, py::arg("tol") = 1e-9,
        py::arg("max_iter") = 100000);

  m.def(
      "oracle_bound",
      [](const Dataset& data, const Vector& theta1, double lambda1, double lambda2, Index j) {
        const auto ctx = ScreeningContext::build(ThetaVector{theta1, lambda1}, lambda2, data);
        const Vector fhat = data.labels().cwiseProduct(Vector(data.features().col(j)));
        return std::max(oracle_neg_min(ctx, fhat), oracle_neg_min(ctx, -fhat));
      },
      py::arg("data"), py::arg("theta1"), py::arg("lambda1"), py::arg("lambda2"), py::arg("feature"),
      "Brute-force max |θᵀf̂_j| over the screening set (n ≤ 10).");

  py::class_<PathStep>(m, "PathStep")
      .def_readonly("lambda_", &PathStep::lambda)
      .def_readonly("kept", &PathStep::kept)
      .def_readonly("active", &PathStep::active)
      .def_readonly("violations", &PathStep::violations)
      .def_readonly("screen_ms", &PathStep::screen_ms)
      .def_readonly("solve_ms", &PathStep::solve_ms)
      .def_readonly("objective", &PathStep::objective)
      .def_readonly("converged", &PathStep::converged)
      .def_readonly("trusted", &PathStep::trusted)
      .def_readonly("verified", &PathStep::verified)
      .def_readonly("model", &PathStep::model);

  m.def(
      "path",
      [](const Dataset& data, int grid_size, double ratio, std::vector<double> lambdas, bool verify, bool screen,
         double tol, int max_iter, int threads) {
        PathConfig cfg;
        cfg.grid_size = grid_size;
        cfg.ratio = ratio;
        cfg.lambdas = std::move(lambdas);
        cfg.verify = verify;
        cfg.screen = screen;
        cfg.solver = options(tol, max_iter);
        cfg.threads = threads;
        return run_path(data, cfg).steps;
      },
      py::arg("data"), py::arg("grid_size") = 10, py::arg("ratio") = 0.8, py::arg("lambdas") = std::vector<double>{},
      py::arg("verify") = false, py::arg("screen") = true, py::arg("tol") = 1e-9, py::arg("max_iter") = 100000,
      py::arg("threads") = 1);
}
