#include "svmscreen/oracle.hpp"

#include <Eigen/QR>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

namespace svmscreen {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// The problem in coordinates z of y⊥: θ = origin + V z with ‖z‖ ≤ radius and
// hᵀz ≤ beta (or = beta).
struct Reduced {
  Vector origin;
  Eigen::MatrixXd basis;
  double radius = 0.0;
  bool degenerate = false;
  bool has_cut = false;
  Vector h;
  double beta = 0.0;
  Vector gz;
  double base = 0.0;
};

Eigen::MatrixXd orthonormal_complement(const Vector& y, std::uint64_t seed) {
  const Index n = y.size();
  const Eigen::MatrixXd column = y;
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(column);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd basis = q.rightCols(n - 1);
  if (seed != 0 && n > 1) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    Eigen::MatrixXd g(n - 1, n - 1);
    for (Index i = 0; i < g.size(); ++i) g.data()[i] = normal(rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> rot(g);
    Eigen::MatrixXd r = rot.householderQ() * Eigen::MatrixXd::Identity(n - 1, n - 1);
    basis = basis * r;
  }
  return basis;
}

Reduced reduce(const Vector& g, const Ball& ball, const std::optional<Halfspace>& hs,
               const Vector& y, std::uint64_t seed) {
  Reduced red;
  const double yy = y.squaredNorm();
  if (yy == 0.0) throw std::invalid_argument("labels must be nonzero");
  const double cy = ball.center.dot(y);
  red.origin = ball.center - (cy / yy) * y;
  const double r2 = ball.radius * ball.radius - cy * cy / yy;
  if (r2 < -1e-12 * std::max(1.0, ball.radius * ball.radius))
    throw std::domain_error("ball does not meet the hyperplane theta^T y = 0");
  red.radius = std::sqrt(std::max(0.0, r2));
  red.degenerate = red.radius < 1e-14;
  red.basis = orthonormal_complement(y, seed);
  red.gz = red.basis.transpose() * g;
  red.base = g.dot(red.origin);
  if (hs) {
    red.has_cut = true;
    red.h = red.basis.transpose() * hs->unit_normal;
    red.beta = hs->unit_normal.dot(hs->anchor - red.origin);
  }
  return red;
}

bool feasible(const Reduced& red, const Vector& z, HalfspaceMode mode) {
  const double scale = std::max(1.0, red.radius);
  if (z.squaredNorm() > red.radius * red.radius + 1e-12 * scale * scale) return false;
  if (!red.has_cut) return true;
  const double s = red.h.dot(z) - red.beta;
  if (mode == HalfspaceMode::Boundary) return std::abs(s) <= 1e-10 * scale;
  return s <= 1e-10 * scale;
}

}  // namespace

OracleResult maximize_linear(const Vector& g, const Ball& ball, const std::optional<Halfspace>& halfspace,
                             const Vector& labels, HalfspaceMode mode, const OracleOptions& options) {
  if (g.size() != labels.size() || ball.center.size() != labels.size())
    throw std::invalid_argument("dimension mismatch");
  const Reduced red = reduce(g, ball, halfspace, labels, options.basis_seed);
  const Index d = red.basis.cols();

  std::vector<Vector> candidates;
  if (mode == HalfspaceMode::Inequality) {
    const double gn = red.gz.norm();
    candidates.push_back(gn > 0.0 ? Vector(red.radius / gn * red.gz) : Vector::Zero(d));
  }
  if (red.has_cut) {
    const double hh = red.h.squaredNorm();
    if (hh > 0.0) {
      const Vector zh = (red.beta / hh) * red.h;
      const double rho2 = red.radius * red.radius - zh.squaredNorm();
      if (rho2 >= -1e-12 * std::max(1.0, red.radius * red.radius)) {
        const Vector dir = red.gz - (red.gz.dot(red.h) / hh) * red.h;
        const double dn = dir.norm();
        // g ∥ h leaves only round-off in dir; g is then constant on the cap.
        const bool flat = dn <= 1e-12 * red.gz.norm();
        candidates.push_back(flat ? zh : Vector(zh + std::sqrt(std::max(0.0, rho2)) / dn * dir));
      }
    } else if (mode == HalfspaceMode::Boundary) {
      // normal ∥ y: the boundary either contains the whole slice or misses it.
      candidates.push_back(red.gz.norm() > 0.0 ? Vector(red.radius / red.gz.norm() * red.gz)
                                               : Vector::Zero(d));
    }
  }

  OracleResult out;
  out.value = -kInf;
  out.sampled_value = std::numeric_limits<double>::quiet_NaN();
  const Vector* best = nullptr;
  for (const auto& z : candidates) {
    if (!feasible(red, z, mode)) continue;
    const double v = red.base + red.gz.dot(z);
    if (v > out.value) {
      out.value = v;
      best = &z;
    }
  }
  if (best == nullptr) return out;
  out.argmax = red.origin + red.basis * (*best);

  const double scale = std::max(1.0, ball.radius);
  bool ok = (out.argmax - ball.center).norm() <= ball.radius + 1e-8 * scale &&
            std::abs(out.argmax.dot(labels)) <= 1e-8 * scale;
  if (halfspace) {
    const double s = halfspace->signed_distance(out.argmax);
    ok = ok && (mode == HalfspaceMode::Boundary ? std::abs(s) <= 1e-8 * scale : s <= 1e-8 * scale);
  }
  out.certified = ok;
  return out;
}

double dense_sample_max(const Vector& g, const Ball& ball, const std::optional<Halfspace>& halfspace,
                        const Vector& labels, std::size_t samples) {
  const Reduced red = reduce(g, ball, halfspace, labels, 0);
  const Index d = red.basis.cols();
  if (d > 2) throw std::invalid_argument("dense sampling supports n <= 3");
  if (samples < 16) samples = 16;
  auto value_at = [&](const Vector& z) {
    return feasible(red, z, HalfspaceMode::Inequality) ? red.base + red.gz.dot(z) : -kInf;
  };

  if (d == 0) return red.base;
  if (d == 1) {
    // Segment [−r, r] cut by h z ≤ beta.
    double best = -kInf, best_z = 0.0;
    const double step = 2.0 * red.radius / static_cast<double>(samples - 1);
    for (std::size_t k = 0; k < samples; ++k) {
      const double z = -red.radius + step * static_cast<double>(k);
      const double v = value_at(Vector::Constant(1, z));
      if (v > best) { best = v; best_z = z; }
    }
    if (best == -kInf) return best;
    // Push toward the improving direction until the boundary.
    const double dir = red.gz[0] >= 0.0 ? 1.0 : -1.0;
    double lo = best_z, hi = best_z + dir * step;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (value_at(Vector::Constant(1, mid)) > -kInf) lo = mid; else hi = mid;
    }
    return std::max(best, value_at(Vector::Constant(1, lo)));
  }

  // d == 2: circle of radius r plus the chord cut out by the halfspace.
  const std::size_t on_circle = samples / 2;
  const std::size_t on_chord = samples - on_circle;
  const double two_pi = 2.0 * std::numbers::pi;
  auto circle = [&](double phi) {
    Vector z(2);
    z << red.radius * std::cos(phi), red.radius * std::sin(phi);
    return z;
  };
  double best = -kInf, best_phi = 0.0;
  bool best_on_circle = false;
  const double dphi = two_pi / static_cast<double>(on_circle);
  for (std::size_t k = 0; k < on_circle; ++k) {
    const double phi = dphi * static_cast<double>(k);
    const double v = value_at(circle(phi));
    if (v > best) { best = v; best_phi = phi; best_on_circle = true; }
  }
  if (red.has_cut && red.h.squaredNorm() > 0.0) {
    const double hh = red.h.squaredNorm();
    const Vector zh = (red.beta / hh) * red.h;
    const double rho2 = red.radius * red.radius - zh.squaredNorm();
    if (rho2 >= 0.0) {
      Vector e(2);
      e << -red.h[1], red.h[0];
      e /= e.norm();
      const double rho = std::sqrt(rho2);
      for (std::size_t k = 0; k < on_chord; ++k) {
        const double s = -1.0 + 2.0 * static_cast<double>(k) / static_cast<double>(on_chord - 1);
        // Nudge inward so round-off cannot reject the chord endpoints.
        const Vector z = zh + (s * rho * (1.0 - 1e-15)) * e;
        const double v = value_at(z);
        if (v > best) { best = v; best_on_circle = false; }
      }
    }
  }
  if (best_on_circle) {
    // Golden-section on the arc around the best sample.
    double a = best_phi - dphi, b = best_phi + dphi;
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
    double f1 = value_at(circle(x1)), f2 = value_at(circle(x2));
    for (int it = 0; it < 80; ++it) {
      if (f1 < f2) {
        a = x1; x1 = x2; f1 = f2; x2 = a + inv_phi * (b - a); f2 = value_at(circle(x2));
      } else {
        b = x2; x2 = x1; f2 = f1; x1 = b - inv_phi * (b - a); f1 = value_at(circle(x1));
      }
    }
    best = std::max({best, f1, f2});
  }
  return best;
}

OracleResult oracle_max(const ScreeningContext& ctx, const Vector& g, const OracleOptions& options) {
  return oracle_max_with_ball(ctx, g, ctx.ball(), options);
}

double oracle_neg_min(const ScreeningContext& ctx, const Vector& fhat, const OracleOptions& options) {
  return oracle_max(ctx, -fhat, options).value;
}

OracleResult oracle_max_with_ball(const ScreeningContext& ctx, const Vector& g, const Ball& ball,
                                  const OracleOptions& options) {
  if (ctx.n() > options.max_n) throw std::invalid_argument("oracle is limited to small n");
  if (g.size() != ctx.n()) throw std::invalid_argument("direction length mismatch");
  const auto hs = ctx.halfspace();
  if (ball.radius < 1e-14) {
    OracleResult out;
    out.value = g.dot(ctx.theta1());
    out.argmax = ctx.theta1();
    out.certified = true;
    out.sampled_value = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  OracleResult out = maximize_linear(g, ball, hs, ctx.labels(), HalfspaceMode::Inequality, options);
  if (options.dense_check && ctx.n() <= 3) {
    out.sampled_value = dense_sample_max(g, ball, hs, ctx.labels(), options.samples);
    const double tol = 1e-7 * std::max(1.0, std::abs(out.value));
    out.certified = out.certified && std::abs(out.sampled_value - out.value) <= tol;
  }
  return out;
}

OracleResult oracle_max_on_slice(const ScreeningContext& ctx, const Vector& g, const Ball& ball,
                                 const OracleOptions& options) {
  if (ctx.n() > options.max_n) throw std::invalid_argument("oracle is limited to small n");
  const auto hs = ctx.halfspace();
  if (!hs) throw std::invalid_argument("context has no halfspace");
  return maximize_linear(g, ball, hs, ctx.labels(), HalfspaceMode::Boundary, options);
}

}  // namespace svmscreen
