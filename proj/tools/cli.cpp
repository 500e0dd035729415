#include "cli.hpp"

#include "svmscreen/dataset.hpp"
#include "svmscreen/io.hpp"
#include "svmscreen/oracle.hpp"
#include "svmscreen/path.hpp"
#include "svmscreen/screening.hpp"
#include "svmscreen/solver.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

namespace svmscreen::cli {

namespace {

using nlohmann::json;

constexpr double kVerifyTolerance = 1e-6;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string input;
  std::string lambda;
  std::string lambda1;
  std::string lambda2;
  std::string theta1;
  double tol = 1e-9;
  int max_iter = 100000;
  int grid_size = 10;
  double ratio = 0.8;
  bool verify = false;
  bool no_screen = false;
  int threads = 1;
  std::string output;
  std::string format = "json";
};

Dataset load(const std::string& path) {
  try {
    return read_sparse_file(path);
  } catch (const ParseError& e) {
    throw InputError(path + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw InputError(path + ": " + e.what());
  } catch (const std::runtime_error& e) {
    throw InputError(e.what());
  }
}

Vector load_theta(const std::string& path, Index n) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  Vector theta;
  try {
    theta = vector_from_json(json::parse(in));
  } catch (const std::exception& e) {
    throw InputError(path + ": " + e.what());
  }
  if (theta.size() != n)
    throw UsageError("theta1 has " + std::to_string(theta.size()) + " entries, expected " + std::to_string(n));
  return theta;
}

SolverOptions solver_options(const Options& o) {
  SolverOptions s;
  s.tol = o.tol;
  s.max_iter = o.max_iter;
  return s;
}

double lambda_or(const std::string& text, double lambda_max, double fallback) {
  if (text.empty()) return fallback;
  return resolve_lambda(text, lambda_max);
}

// Screening input at λ₁: a θ₁ file, the closed form at λ_max, or a model
// solved at λ₁ (screened through screen_from_model).
struct Theta1 {
  std::optional<ThetaVector> theta;
  std::optional<PrimalModel> model;
};

Theta1 theta_for(const Dataset& data, const Options& o, double lambda1, double lambda_max, std::ostream& err) {
  if (!o.theta1.empty()) return {ThetaVector{load_theta(o.theta1, data.n_samples()), lambda1}, std::nullopt};
  if (lambda1 == lambda_max) return {theta_at_lambda_max(data), std::nullopt};
  PrimalModel model = solve_primal(data, lambda1, solver_options(o));
  if (!model.converged)
    err << "warning: solve at lambda1 stopped at KKT residual " << model.kkt_residual
        << "; screening is not guaranteed safe\n";
  return {std::nullopt, std::move(model)};
}

ScreeningContext context_for(const Dataset& data, const Theta1& t1, double lambda2) {
  if (t1.theta) return ScreeningContext::build(*t1.theta, lambda2, data);
  return ScreeningContext::build(theta_from_primal(data, t1.model->weights, t1.model->bias, t1.model->lambda),
                                 lambda2, data);
}

void check_json_only(const Options& o) {
  if (o.format != "json") throw UsageError("--format csv is only available for path");
}

json cmd_lambda_max(const Dataset& data) {
  const LambdaMax lm = lambda_max(data);
  json first = json::array();
  for (Index j : first_features(lm.direction)) first.push_back(j + 1);
  return json{{"lambda_max", lm.value}, {"bias", lm.bias}, {"first_features", std::move(first)}};
}

json cmd_solve(const Dataset& data, const Options& o) {
  const double lmax = lambda_max(data).value;
  const double lambda = resolve_lambda(o.lambda, lmax);
  if (!(lambda > 0.0)) throw UsageError("lambda must be positive");
  const PrimalModel model = solve_primal(data, lambda, solver_options(o));
  json j = model_to_json(model);
  j["kkt_residual"] = model.kkt_residual;
  return j;
}

json cmd_screen(const Dataset& data, const Options& o, std::ostream& err) {
  const double lmax = lambda_max(data).value;
  const double lambda1 = lambda_or(o.lambda1, lmax, lmax);
  const double lambda2 = resolve_lambda(o.lambda2, lmax);
  if (!(lambda2 < lambda1)) throw UsageError("lambda2 must be < lambda1");
  if (!(lambda2 > 0.0)) throw UsageError("lambda2 must be positive");
  if (lmax == 0.0) throw UsageError("lambda_max is zero; nothing to screen");
  const Theta1 t1 = theta_for(data, o, lambda1, lmax, err);
  const FeatureStats stats = compute_feature_stats(data);
  const ScreenReport report = t1.model ? screen_from_model(data, stats, *t1.model, lambda2, o.threads)
                                       : screen_all(context_for(data, t1, lambda2), data, stats, o.threads);
  return screen_report_to_json(report);
}

json cmd_verify(const Dataset& data, const Options& o, std::ostream& err, bool& failed) {
  OracleOptions oracle;
  if (data.n_samples() > oracle.max_n)
    throw UsageError("verify needs n <= " + std::to_string(oracle.max_n) + " samples");
  const double lmax = lambda_max(data).value;
  if (lmax == 0.0) throw UsageError("lambda_max is zero; nothing to verify");
  const double lambda1 = lambda_or(o.lambda1, lmax, lmax);
  const double lambda2 = lambda_or(o.lambda2, lmax, 0.5 * lambda1);
  if (!(lambda2 < lambda1)) throw UsageError("lambda2 must be < lambda1");
  const auto ctx = context_for(data, theta_for(data, o, lambda1, lmax, err), lambda2);
  const FeatureStats stats = compute_feature_stats(data);

  std::array<std::size_t, kBranchCount> count{};
  std::array<double, kBranchCount> worst{};
  bool certified = true;
  for (Index j = 0; j < data.n_features(); ++j) {
    const Vector fhat = data.labels().cwiseProduct(Vector(data.features().col(j)));
    const FeatureMoments mom = ctx.moments_of(data, stats, j);
    for (int sign : {1, -1}) {
      const NegMinResult closed = neg_min(ctx, sign > 0 ? mom : mom.negated());
      const OracleResult ref = oracle_max(ctx, -static_cast<double>(sign) * fhat, oracle);
      certified = certified && ref.certified;
      const auto b = static_cast<std::size_t>(closed.branch);
      ++count[b];
      worst[b] = std::max(worst[b], std::abs(closed.value - ref.value));
    }
  }
  json branches = json::object();
  double overall = 0.0;
  for (std::size_t b = 0; b < kBranchCount; ++b) {
    branches[std::string(branch_name(static_cast<Branch>(b)))] =
        json{{"count", count[b]}, {"max_discrepancy", worst[b]}};
    overall = std::max(overall, worst[b]);
  }
  failed = !(overall <= kVerifyTolerance);
  return json{{"lambda1", lambda1},
              {"lambda2", lambda2},
              {"branches", std::move(branches)},
              {"max_discrepancy", overall},
              {"oracle_certified", certified},
              {"tolerance", kVerifyTolerance}};
}

std::string cmd_path(const Dataset& data, const Options& o, bool& failed) {
  PathConfig cfg;
  cfg.grid_size = o.grid_size;
  cfg.ratio = o.ratio;
  cfg.solver = solver_options(o);
  cfg.verify = o.verify;
  cfg.screen = !o.no_screen;
  cfg.threads = o.threads;
  PathReport report;
  try {
    report = run_path(data, cfg);
  } catch (const std::domain_error& e) {
    throw UsageError(e.what());
  }
  failed = false;
  for (const auto& s : report.steps) failed = failed || s.violations > 0;
  if (o.format == "csv") return path_to_csv(report);
  return path_to_json(report).dump(2) + "\n";
}

void emit(const Options& o, const std::string& text, std::ostream& out) {
  if (o.output.empty()) {
    out << text;
    return;
  }
  std::ofstream file(o.output);
  if (!file) throw InputError("cannot open " + o.output + " for writing");
  file << text;
  if (!file) throw InputError("failed writing " + o.output);
}

CLI::Validator lambda_validator() {
  return CLI::Validator(
      [](std::string& text) -> std::string {
        return is_lambda_spec(text) ? std::string() : "expected a positive number or <factor>xMAX, got " + text;
      },
      "LAMBDA", "lambda");
}

}  // namespace

bool is_lambda_spec(const std::string& text) {
  try {
    return resolve_lambda(text, 1.0) > 0.0;
  } catch (const std::invalid_argument&) {
    return false;
  }
}

double resolve_lambda(const std::string& text, double lambda_max) {
  std::string_view s = text;
  bool relative = false;
  if (s.size() > 4 && s.substr(s.size() - 4) == "xMAX") {
    relative = true;
    s.remove_suffix(4);
  }
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty() || !std::isfinite(value))
    throw std::invalid_argument("not a number: " + text);
  return relative ? value * lambda_max : value;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Safe feature screening for the L1-regularized squared-hinge SVM", "svmscreen"};
  app.require_subcommand(1);
  Options o;

  auto add_input = [&](CLI::App* sub) {
    sub->add_option("input", o.input, "Sparse text data file (label idx:val ...)")->required();
    sub->add_option("-o,--output", o.output, "Write the result here instead of stdout");
  };
  auto add_solver = [&](CLI::App* sub) {
    sub->add_option("--tol", o.tol, "KKT residual tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--max-iter", o.max_iter, "Iteration cap")->check(CLI::PositiveNumber);
  };
  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  };
  auto add_threads = [&](CLI::App* sub) {
    sub->add_option("--threads", o.threads, "Worker threads for screening")->check(CLI::PositiveNumber);
  };

  auto* lm = app.add_subcommand("lambda-max", "Print lambda_max, the bias there and the first features");
  add_input(lm);
  add_format(lm);

  auto* solve = app.add_subcommand("solve", "Solve the primal problem at one lambda");
  add_input(solve);
  solve->add_option("--lambda", o.lambda, "Regularization weight")->required()->check(lambda_validator());
  add_solver(solve);
  add_format(solve);

  auto* screen = app.add_subcommand("screen", "Screen features for lambda2 from a solution at lambda1");
  add_input(screen);
  screen->add_option("--lambda1", o.lambda1, "Lambda of the known solution (default lambda_max)")
      ->check(lambda_validator());
  screen->add_option("--lambda2", o.lambda2, "Target lambda")->required()->check(lambda_validator());
  screen->add_option("--theta1", o.theta1, "JSON array with the dual point at lambda1");
  add_solver(screen);
  add_threads(screen);
  add_format(screen);

  auto* path = app.add_subcommand("path", "Run a screened regularization path");
  add_input(path);
  path->add_option("--grid-size", o.grid_size, "Number of lambdas below lambda_max")->check(CLI::PositiveNumber);
  path->add_option("--ratio", o.ratio, "Geometric grid ratio in (0,1)");
  path->add_flag("--verify", o.verify, "Also solve the full problem and count unsafe discards");
  path->add_flag("--no-screen", o.no_screen, "Solve every step over all features");
  add_solver(path);
  add_threads(path);
  add_format(path);

  auto* verify = app.add_subcommand("verify", "Compare closed-form bounds with the oracle (n <= 10)");
  add_input(verify);
  verify->add_option("--lambda1", o.lambda1, "Lambda of the known solution (default lambda_max)")
      ->check(lambda_validator());
  verify->add_option("--lambda2", o.lambda2, "Target lambda (default 0.5 * lambda1)")
      ->check(lambda_validator());
  verify->add_option("--theta1", o.theta1, "JSON array with the dual point at lambda1");
  add_solver(verify);
  add_format(verify);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }

  try {
    if (!(o.ratio > 0.0 && o.ratio < 1.0)) throw UsageError("--ratio must be in (0, 1)");
    const bool is_path = app.got_subcommand(path);
    if (!is_path) check_json_only(o);

    const Dataset data = load(o.input);
    bool failed = false;
    std::string text;
    if (app.got_subcommand(lm)) {
      text = cmd_lambda_max(data).dump(2) + "\n";
    } else if (app.got_subcommand(solve)) {
      text = cmd_solve(data, o).dump(2) + "\n";
    } else if (app.got_subcommand(screen)) {
      text = cmd_screen(data, o, err).dump(2) + "\n";
    } else if (app.got_subcommand(verify)) {
      text = cmd_verify(data, o, err, failed).dump(2) + "\n";
    } else {
      text = cmd_path(data, o, failed);
    }
    emit(o, text, out);
    if (failed) {
      err << "error: verification found discrepancies\n";
      return kVerifyFailed;
    }
    return kOk;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
}

}  // namespace svmscreen::cli
