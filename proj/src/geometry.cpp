#include "svmscreen/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace svmscreen {

namespace {

void check_lambdas(double lambda1, double lambda2) {
  if (!(lambda1 > 0.0) || !(lambda2 > 0.0)) throw std::invalid_argument("lambda must be positive");
  if (lambda1 < lambda2) throw std::invalid_argument("lambda1 must be >= lambda2");
}

}  // namespace

bool Ball::contains(const Vector& p, double tol) const {
  return (p - center).squaredNorm() <= radius * radius + tol;
}

Vector project_null(const Vector& u, const Vector& v) {
  const double uu = u.squaredNorm();
  if (uu == 0.0) throw std::domain_error("undefined projection");
  return v - (v.dot(u) / uu) * u;
}

Ball ball_at_t(const Vector& theta1, double lambda1, double lambda2, double t) {
  check_lambdas(lambda1, lambda2);
  if (!std::isfinite(t)) throw std::invalid_argument("t must be finite");
  const Vector shift = (t * theta1).array() - t / lambda1 + 1.0 / lambda2;
  Ball ball;
  ball.center = 0.5 * (shift + theta1);
  ball.radius = 0.5 * (shift - theta1).norm();
  return ball;
}

MinRadiusBall min_radius_ball(const Vector& theta1, double lambda1, double lambda2,
                              const Vector& normal) {
  check_lambdas(lambda1, lambda2);
  const double delta = 1.0 / lambda2 - 1.0 / lambda1;
  const Vector gap = theta1.array() - 1.0 / lambda1;  // θ₁ − 1/λ₁·1
  const double gap_norm = gap.norm();

  MinRadiusBall out;
  if (gap_norm == 0.0) {
    // Every family member is the same ball; it only matches the projected
    // form when it has zero radius.
    if (delta != 0.0) throw std::invalid_argument("inconsistent inputs");
    out.t = 1.0;
    out.ball = Ball{theta1, 0.0};
    return out;
  }
  if (std::abs(std::abs(normal.dot(gap)) / gap_norm - 1.0) > 1e-9 ||
      std::abs(normal.norm() - 1.0) > 1e-9) {
    throw std::invalid_argument("inconsistent inputs");
  }

  const Vector ones = Vector::Ones(theta1.size());
  const Vector p_ones = ones - normal.dot(ones) * normal;
  out.t = 1.0 - delta * gap.sum() / (gap_norm * gap_norm);
  out.ball.center = 0.5 * delta * p_ones + theta1;
  out.ball.radius = 0.5 * delta * p_ones.norm();
  return out;
}

}  // namespace svmscreen
