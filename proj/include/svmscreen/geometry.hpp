#pragma once

#include "svmscreen/dataset.hpp"

namespace svmscreen {

/// Closed Euclidean ball {p : ‖p − center‖ ≤ radius}.
struct Ball {
  Vector center;
  double radius = 0.0;

  /// Membership on squared distances with an absolute slack.
  bool contains(const Vector& p, double tol = 1e-9) const;
};

/// Closed halfspace {p : normalᵀ(p − anchor) ≤ 0}. The normal points out of
/// the set.
struct Halfspace {
  Vector unit_normal;
  Vector anchor;

  double signed_distance(const Vector& p) const { return unit_normal.dot(p - anchor); }
  bool contains(const Vector& p, double tol = 1e-9) const { return signed_distance(p) <= tol; }
};

/// P_u(v) = v − (vᵀu / ‖u‖²) u. Throws std::domain_error for u = 0.
Vector project_null(const Vector& u, const Vector& v);

/// Member of the one-parameter ball family containing the dual optimum at
/// lambda2, built from the optimum theta1 at lambda1:
///   center = ½(tθ₁ − t/λ₁·1 + 1/λ₂·1 + θ₁),
///   radius = ½‖tθ₁ − t/λ₁·1 + 1/λ₂·1 − θ₁‖.
/// t = 0 gives the plain variational-inequality ball. The formula is
/// evaluated for any real t; containment of the optimum is only guaranteed
/// for t ≥ 0. Throws std::invalid_argument unless lambda1 ≥ lambda2 > 0.
Ball ball_at_t(const Vector& theta1, double lambda1, double lambda2, double t);

struct MinRadiusBall {
  double t = 0.0;
  Ball ball;
};

/// Smallest member of the ball_at_t family. `normal` must be the unit vector
/// along ±(θ₁ − 1/λ₁·1); the returned ball is
///   ĉ = ½(1/λ₂ − 1/λ₁) P_a(1) + θ₁,  l = ½(1/λ₂ − 1/λ₁) ‖P_a(1)‖
/// and t is the family parameter reproducing it. Throws std::invalid_argument
/// ("inconsistent inputs") when the normal is not parallel to θ₁ − 1/λ₁·1,
/// or when θ₁ = 1/λ₁·1 while lambda1 > lambda2.
MinRadiusBall min_radius_ball(const Vector& theta1, double lambda1, double lambda2,
                              const Vector& normal);

}  // namespace svmscreen
