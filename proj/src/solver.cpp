#include "svmscreen/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace svmscreen {

namespace {

void check_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("lambda must be positive");
}

// z = Xw, visiting only the nonzero weights.
void apply(const SparseMatrix& X, const Vector& w, Vector& z) {
  z.setZero(X.rows());
  for (Index j = 0; j < X.cols(); ++j) {
    const double wj = w[j];
    if (wj == 0.0) continue;
    for (SparseMatrix::InnerIterator it(X, j); it; ++it) z[it.row()] += it.value() * wj;
  }
}

// Hinge residuals ξᵢ = max(1 − yᵢ(zᵢ + b), 0) from precomputed z = Xw.
void hinge_residual(const Vector& y, const Vector& z, double b, Vector& xi) {
  xi = (1.0 - y.array() * (z.array() + b)).max(0.0);
}

// v ↦ Xᵀ(y ∘ v)
Vector weighted_correlation(const Dataset& data, const Vector& v) {
  const Vector yv = data.labels().cwiseProduct(v);
  return data.features().transpose() * yv;
}

double soft_threshold(double v, double k) {
  if (v > k) return v - k;
  if (v < -k) return v + k;
  return 0.0;
}

// Largest eigenvalue of [X 1]ᵀ[X 1] by power iteration.
double estimate_lipschitz(const SparseMatrix& X) {
  const Index m = X.cols();
  Vector v = Vector::Ones(m);
  double vb = 1.0;
  double estimate = 1.0;
  Vector z(X.rows());
  for (int k = 0; k < 50; ++k) {
    const double norm = std::sqrt(v.squaredNorm() + vb * vb);
    if (norm == 0.0) break;
    v /= norm;
    vb /= norm;
    z = X * v;
    z.array() += vb;
    Vector nv = X.transpose() * z;
    const double nb = z.sum();
    estimate = std::sqrt(nv.squaredNorm() + nb * nb);
    v = std::move(nv);
    vb = nb;
  }
  return std::max(estimate, 1e-12);
}

KktReport kkt_from_residual(const Dataset& data, const Vector& w, const Vector& xi, double lambda) {
  KktReport r;
  const Vector theta = xi / lambda;
  r.correlation = weighted_correlation(data, theta);
  for (Index j = 0; j < r.correlation.size(); ++j) {
    const double c = r.correlation[j];
    r.bound_violation = std::max(r.bound_violation, std::abs(c) - 1.0);
    if (w[j] != 0.0) {
      const double s = w[j] > 0.0 ? 1.0 : -1.0;
      r.sign_mismatch = std::max(r.sign_mismatch, std::abs(c - s));
    }
  }
  r.y_residual = std::abs(theta.dot(data.labels()));
  r.negativity = std::max(0.0, -theta.minCoeff());
  return r;
}

}  // namespace

double KktReport::max_residual() const {
  return std::max({bound_violation, sign_mismatch, y_residual, negativity});
}

double smooth_loss(const Dataset& data, const Vector& w, double b) {
  Vector z, xi;
  apply(data.features(), w, z);
  hinge_residual(data.labels(), z, b, xi);
  return 0.5 * xi.squaredNorm();
}

double primal_objective(const Dataset& data, double lambda, const Vector& w, double b) {
  return smooth_loss(data, w, b) + lambda * w.lpNorm<1>();
}

SmoothGradient grad_h(const Dataset& data, const Vector& w, double b) {
  Vector z, xi;
  apply(data.features(), w, z);
  hinge_residual(data.labels(), z, b, xi);
  SmoothGradient g;
  g.w = -weighted_correlation(data, xi);
  g.b = -xi.dot(data.labels());
  return g;
}

PrimalModel solve_primal(const Dataset& data, double lambda, const SolverOptions& options,
                         const std::optional<WarmStart>& warm) {
  check_lambda(lambda);
  const auto& X = data.features();
  const auto& y = data.labels();
  const Index m = data.n_features();

  Vector w = Vector::Zero(m);
  double b = static_cast<double>(data.n_pos() - data.n_neg()) / static_cast<double>(data.n_samples());
  if (warm) {
    if (warm->weights.size() != m) throw std::invalid_argument("warm start has wrong dimension");
    w = warm->weights;
    b = warm->bias;
  }

  const double lipschitz = estimate_lipschitz(X);
  double L = lipschitz;

  Vector z, xi;
  apply(X, w, z);
  hinge_residual(y, z, b, xi);
  double objective = 0.5 * xi.squaredNorm() + lambda * w.lpNorm<1>();

  PrimalModel model;
  model.lambda = lambda;
  if (options.record_trace) model.objective_trace.push_back(objective);

  // Momentum point and scratch buffers.
  Vector mw = w, nw(m), zm, xim, zn, xin;
  double mb = b, nb = 0.0;
  double t = 1.0;
  int since_check = 0;

  auto finish = [&](bool converged, double residual) {
    model.weights = w;
    model.bias = b;
    model.objective = 0.5 * xi.squaredNorm() + lambda * w.lpNorm<1>();
    model.converged = converged;
    model.kkt_residual = residual;
    return model;
  };

  {
    const double r0 = kkt_from_residual(data, w, xi, lambda).max_residual();
    if (r0 <= options.tol) return finish(true, r0);
  }

  double last_residual = 0.0;
  for (int iter = 1; iter <= options.max_iter; ++iter) {
    model.iterations = iter;
    apply(X, mw, zm);
    hinge_residual(y, zm, mb, xim);
    const Vector gw = -weighted_correlation(data, xim);
    const double gb = -xim.dot(y);

    for (int bt = 0; bt < 60; ++bt) {
      for (Index j = 0; j < m; ++j) nw[j] = soft_threshold(mw[j] - gw[j] / L, lambda / L);
      nb = mb - gb / L;
      apply(X, nw, zn);
      hinge_residual(y, zn, nb, xin);
      // h(new) − h(mom) as ½Σ(ξ' − ξ)(ξ' + ξ): no cancellation near the optimum.
      const double dh = 0.5 * (xin - xim).dot(xin + xim);
      const double dw2 = (nw - mw).squaredNorm();
      const double db = nb - mb;
      const double linear = gw.dot(nw - mw) + gb * db;
      const double majorant = linear + 0.5 * L * (dw2 + db * db);
      // Slack for round-off in dh and the linear term once steps get tiny.
      const double slack = 1e-13 * ((xin - xim).norm() * (xin + xim).norm() + std::abs(linear));
      if (dh <= majorant + slack) break;
      // The power-iteration bound already majorizes h; past it only round-off fails.
      if (L >= 2.0 * lipschitz) break;
      L = std::min(2.0 * L, 2.0 * lipschitz);
    }
    double change = 0.5 * (xin - xi).dot(xin + xi);
    for (Index j = 0; j < m; ++j) change += lambda * (std::abs(nw[j]) - std::abs(w[j]));
    // ξ carries absolute round-off of about eps per entry, so changes below
    // this level are indistinguishable from zero.
    const double noise = 1e-13 * std::max(objective, 1e-300);

    if (change > noise && t > 1.0) {
      // Function-value restart: drop momentum and retry from the last iterate.
      t = 1.0;
      mw = w;
      mb = b;
      continue;
    }
    if (change > noise || (nw == w && nb == b)) {
      // A plain proximal step made no progress; only round-off remains.
      const double r = kkt_from_residual(data, w, xi, lambda).max_residual();
      return finish(r <= options.tol, r);
    }
    const double candidate = 0.5 * xin.squaredNorm() + lambda * nw.lpNorm<1>();

    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    const double beta = (t - 1.0) / t_next;
    mw = nw + beta * (nw - w);
    mb = nb + beta * (nb - b);
    t = t_next;
    w.swap(nw);
    b = nb;
    xi.swap(xin);
    objective = candidate;
    if (options.record_trace) model.objective_trace.push_back(objective);

    // Let the step grow back when the local curvature is smaller.
    L = std::max(0.9 * L, 1e-3 * lipschitz);

    if (++since_check >= options.check_every) {
      since_check = 0;
      last_residual = kkt_from_residual(data, w, xi, lambda).max_residual();
      if (last_residual <= options.tol) return finish(true, last_residual);
    }
  }
  last_residual = kkt_from_residual(data, w, xi, lambda).max_residual();
  return finish(last_residual <= options.tol, last_residual);
}

ThetaVector theta_from_primal(const Dataset& data, const Vector& w, double b, double lambda) {
  check_lambda(lambda);
  if (w.size() != data.n_features()) throw std::invalid_argument("weight vector has wrong dimension");
  Vector z, xi;
  apply(data.features(), w, z);
  hinge_residual(data.labels(), z, b, xi);
  return ThetaVector{xi / lambda, lambda};
}

KktReport kkt_report(const Dataset& data, const Vector& w, double b, double lambda) {
  check_lambda(lambda);
  if (w.size() != data.n_features()) throw std::invalid_argument("weight vector has wrong dimension");
  Vector z, xi;
  apply(data.features(), w, z);
  hinge_residual(data.labels(), z, b, xi);
  return kkt_from_residual(data, w, xi, lambda);
}

KktReport kkt_report(const Dataset& data, const PrimalModel& model) {
  return kkt_report(data, model.weights, model.bias, model.lambda);
}

LambdaMax lambda_max(const Dataset& data) {
  LambdaMax out;
  out.bias = static_cast<double>(data.n_pos() - data.n_neg()) / static_cast<double>(data.n_samples());
  const Vector coef = data.labels().array() - out.bias;
  out.direction = data.features().transpose() * coef;
  out.value = out.direction.lpNorm<Eigen::Infinity>();
  return out;
}

std::vector<Index> first_features(const Vector& direction) {
  std::vector<Index> out;
  if (direction.size() == 0) return out;
  const double top = direction.lpNorm<Eigen::Infinity>();
  if (top == 0.0) return out;
  for (Index j = 0; j < direction.size(); ++j) {
    if (std::abs(direction[j]) >= top * (1.0 - 1e-12)) out.push_back(j);
  }
  return out;
}

}  // namespace svmscreen
