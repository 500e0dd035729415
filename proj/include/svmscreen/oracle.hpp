#pragma once

#include "svmscreen/screening.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>

namespace svmscreen {

// Independent numerical maximizer of gᵀθ over ball ∩ halfspace ∩ {θᵀy = 0}.
// It eliminates the equality with an explicit orthonormal basis of y⊥ and
// enumerates the candidate maximizers of a linear function over a ball cut by
// a halfspace. None of the screening closed forms are used.

struct OracleOptions {
  Index max_n = 10;
  /// For n ≤ 3, also maximize by dense boundary sampling plus local
  /// refinement, and certify only if both agree within 1e−7.
  bool dense_check = true;
  std::size_t samples = 1000000;
  /// Nonzero: rotate the basis of y⊥ by a random orthogonal matrix drawn
  /// from this seed. The optimum must not depend on it.
  std::uint64_t basis_seed = 0;
};

struct OracleResult {
  double value = 0.0;
  Vector argmax;
  bool certified = false;
  /// Dense-sampling estimate when it was computed, NaN otherwise.
  double sampled_value = 0.0;
};

enum class HalfspaceMode {
  Inequality,  // normalᵀ(θ − anchor) ≤ 0
  Boundary,    // normalᵀ(θ − anchor) = 0
};

/// Maximizes gᵀθ over {‖θ − center‖ ≤ radius} ∩ halfspace ∩ {θᵀy = 0}.
OracleResult maximize_linear(const Vector& g, const Ball& ball, const std::optional<Halfspace>& halfspace,
                             const Vector& labels, HalfspaceMode mode = HalfspaceMode::Inequality,
                             const OracleOptions& options = {});

/// Dense boundary sampling of the same problem for n ≤ 3 (at most a 2-D
/// reduced space), refined by golden-section search around the best sample.
double dense_sample_max(const Vector& g, const Ball& ball, const std::optional<Halfspace>& halfspace,
                        const Vector& labels, std::size_t samples);

/// max over K of gᵀθ for the context's K. Throws std::invalid_argument when
/// n exceeds options.max_n.
OracleResult oracle_max(const ScreeningContext& ctx, const Vector& g, const OracleOptions& options = {});

/// −min over K of θᵀf̂ = oracle_max(ctx, −f̂).value; mirrors neg_min.
double oracle_neg_min(const ScreeningContext& ctx, const Vector& fhat, const OracleOptions& options = {});

/// max over K with the ball replaced by `ball` (e.g. another family member).
OracleResult oracle_max_with_ball(const ScreeningContext& ctx, const Vector& g, const Ball& ball,
                                  const OracleOptions& options = {});

/// max of gᵀθ over ball ∩ {âᵀ(θ − θ₁) = 0} ∩ {θᵀy = 0}. Needs a halfspace.
OracleResult oracle_max_on_slice(const ScreeningContext& ctx, const Vector& g, const Ball& ball,
                                 const OracleOptions& options = {});

}  // namespace svmscreen
