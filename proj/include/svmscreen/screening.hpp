#pragma once

#include "svmscreen/dataset.hpp"
#include "svmscreen/geometry.hpp"
#include "svmscreen/solver.hpp"

#include <array>
#include <optional>
#include <string_view>
#include <vector>

namespace svmscreen {

/// Which closed form produced a −min θᵀf̂ value.
enum class Branch : int {
  DegenerateF = 0,     // P_y(f̂) = 0: θᵀf̂ vanishes on θᵀy = 0
  BetaZero = 1,        // P_y(f̂) anti-parallel to P_y(â): ball inactive
  AlphaZero = 2,       // optimum on the ball, halfspace inactive
  InteriorCorner = 3,  // optimum on ball boundary ∩ halfspace boundary
};
inline constexpr std::size_t kBranchCount = 4;
std::string_view branch_name(Branch b);

inline constexpr double kCosTolerance = 1e-9;
inline constexpr double kKeepTolerance = 1e-9;

/// Data-dependent moments of one weighted feature f̂ (or of −f̂). The first
/// four come from FeatureStats; dot_theta1 = f̂ᵀθ₁ is the only per-context
/// sparse product.
struct FeatureMoments {
  double dot_y = 0.0;
  double dot_one = 0.0;
  double sq_norm = 0.0;
  double proj_y_norm = 0.0;
  double dot_theta1 = 0.0;

  FeatureMoments negated() const {
    return {-dot_y, -dot_one, sq_norm, proj_y_norm, -dot_theta1};
  }
};

struct NegMinResult {
  double value = 0.0;
  Branch branch = Branch::DegenerateF;
};

class ScreeningContext;
/// −min over K of θᵀf̂, in closed form from the moments of f̂.
NegMinResult neg_min(const ScreeningContext& ctx, const FeatureMoments& f);

/// Everything derived from (λ₁, θ₁, λ₂) that the bound needs, computed once
/// and shared by all features. The screening set is
///
///   K = {θ : ‖θ − c‖ ≤ ‖b‖,  âᵀ(θ − θ₁) ≤ 0,  θᵀy = 0}
///
/// with b = ½(1/λ₂·1 − θ₁), c = ½(1/λ₂·1 + θ₁) and the outward normal
/// â = (1/λ₁·1 − θ₁)/‖1/λ₁·1 − θ₁‖. The halfspace is dropped when that
/// direction is zero or parallel to y.
class ScreeningContext {
public:
  /// Validates λ_max ≥ λ₁ > λ₂ > 0 against the data and the dual feasibility
  /// of θ₁ (θ₁ ≥ −1e−10, |θ₁ᵀy| ≤ 1e−6). Throws std::invalid_argument.
  static ScreeningContext build(const ThetaVector& theta1, double lambda2, const Dataset& data);

  /// Same construction from the labels alone; the λ_max bound is not checked.
  static ScreeningContext build(const ThetaVector& theta1, double lambda2, const Vector& labels);

  double lambda1() const noexcept { return lambda1_; }
  double lambda2() const noexcept { return lambda2_; }
  Index n() const noexcept { return labels_.size(); }
  const Vector& labels() const noexcept { return labels_; }
  const Vector& theta1() const noexcept { return theta1_; }
  const Vector& b_vec() const noexcept { return b_vec_; }
  const Vector& c_vec() const noexcept { return c_vec_; }

  /// Unit normal â. Defined whenever θ₁ ≠ 1/λ₁·1, even if the halfspace is
  /// dropped because â is parallel to y.
  const std::optional<Vector>& unit_normal() const noexcept { return normal_; }
  bool has_halfspace() const noexcept { return has_halfspace_; }
  std::optional<Halfspace> halfspace() const;
  Ball ball() const { return Ball{c_vec_, b_norm_}; }
  /// Minimal-radius member of the ball family (only with a halfspace).
  const std::optional<MinRadiusBall>& min_ball() const noexcept { return min_ball_; }

  /// Moments of ±f̂ for a dense weighted feature vector.
  FeatureMoments moments_of(const Vector& fhat) const;
  /// Moments of feature j from cached stats plus one sparse product with θ₁.
  FeatureMoments moments_of(const Dataset& data, const FeatureStats& stats, Index j) const;

  // Shared scalars.
  double delta() const noexcept { return inv_l2_ - inv_l1_; }
  double a_dot_one() const noexcept { return a_one_; }
  double a_dot_y() const noexcept { return a_y_; }
  double a_dot_theta1() const noexcept { return a_theta_; }
  double proj_y_a_norm() const noexcept { return pa_norm_; }
  double proj_y_b_norm() const noexcept { return pb_norm_; }
  double b_dot_y() const noexcept { return b_y_; }
  double y_dot_one() const noexcept { return y_one_; }
  double theta1_dot_y() const noexcept { return theta1_y_; }
  double proj_a_one_nested_norm() const noexcept { return puq_norm_; }
  const Vector& proj_a_one() const noexcept { return pa_one_; }
  const Vector& proj_a_one_nested() const noexcept { return puq_; }

private:
  friend NegMinResult neg_min(const ScreeningContext& ctx, const FeatureMoments& f);
  ScreeningContext() = default;

  double lambda1_ = 0, lambda2_ = 0, inv_l1_ = 0, inv_l2_ = 0;
  Vector labels_, theta1_, b_vec_, c_vec_;
  std::optional<Vector> normal_;
  bool has_halfspace_ = false;
  double gap_norm_ = 0;  // ‖1/λ₁·1 − θ₁‖
  double n_ = 0, y_one_ = 0, theta1_y_ = 0;
  double a_one_ = 0, a_y_ = 0, a_theta_ = 0, pa_norm_ = 0;
  double b_y_ = 0, b_norm_ = 0, pb_norm_ = 0, pa_pb_ = 0;
  // u = P_a(y), q = P_a(1)
  double uu_ = 0, qu_ = 0, qq_ = 0, puq_norm_ = 0;
  Vector pa_one_, puq_;
  std::optional<MinRadiusBall> min_ball_;
};

/// Dense convenience overload; moments are taken directly from f̂.
NegMinResult neg_min(const ScreeningContext& ctx, const Vector& fhat);

struct FeatureBound {
  Index feature = 0;
  double m1 = 0.0;  // −min θᵀf̂
  double m2 = 0.0;  // −min θᵀ(−f̂) = max θᵀf̂
  double bound = 0.0;
  Branch branch_pos = Branch::DegenerateF;
  Branch branch_neg = Branch::DegenerateF;
  bool keep = false;
};

/// Upper bound on |θ₂ᵀf̂_j|; keep iff bound ≥ 1 − keep_tolerance.
///
/// θ₁ ∈ K, so a feature with θ₁ᵀf̂ = ±1 can have a bound of exactly 1. When
/// θ₁ comes from an iterative solve, pass kKeepTolerance plus its KKT
/// residual so such features are not lost to the solver's error.
FeatureBound screen_feature(const ScreeningContext& ctx, const Dataset& data,
                            const FeatureStats& stats, Index j, double keep_tolerance = kKeepTolerance);

struct ScreenReport {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  std::vector<Index> kept;  // 0-based, increasing
  std::vector<FeatureBound> bounds;
  std::array<std::size_t, kBranchCount> branch_counts{};
  double elapsed_seconds = 0.0;

  double rejection_rate() const;
};

/// Screens every feature. `threads` > 1 splits the features into contiguous
/// blocks; results are ordered by feature index either way.
ScreenReport screen_all(const ScreeningContext& ctx, const Dataset& data, const FeatureStats& stats,
                        int threads = 1, double keep_tolerance = kKeepTolerance);

/// Screening from a solved model at λ₁ instead of an exact θ₁. The keep
/// tolerance grows by the model's KKT residual and every feature with a
/// nonzero weight at λ₁ is kept regardless of its bound.
/// Throws std::invalid_argument if θ₁ fails the feasibility check.
ScreenReport screen_from_model(const Dataset& data, const FeatureStats& stats, const PrimalModel& model,
                               double lambda2, int threads = 1);

/// Dual optimum at λ_max, θ = (1 − y b*)/λ_max, from the zero-weight model.
ThetaVector theta_at_lambda_max(const Dataset& data);

}  // namespace svmscreen
