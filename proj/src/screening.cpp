#include "svmscreen/screening.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace svmscreen {

std::string_view branch_name(Branch b) {
  switch (b) {
    case Branch::DegenerateF: return "degenerate_f";
    case Branch::BetaZero: return "beta_zero";
    case Branch::AlphaZero: return "alpha_zero";
    case Branch::InteriorCorner: return "interior_corner";
  }
  return "unknown";
}

ScreeningContext ScreeningContext::build(const ThetaVector& theta1, double lambda2,
                                         const Dataset& data) {
  const double lmax = lambda_max(data).value;
  if (theta1.lambda > lmax * (1.0 + 1e-12))
    throw std::invalid_argument("lambda1 must not exceed lambda_max");
  return build(theta1, lambda2, data.labels());
}

ScreeningContext ScreeningContext::build(const ThetaVector& theta1, double lambda2,
                                         const Vector& labels) {
  const double lambda1 = theta1.lambda;
  if (!(lambda2 > 0.0) || !std::isfinite(lambda1)) throw std::invalid_argument("lambda must be positive");
  if (!(lambda2 < lambda1)) throw std::invalid_argument("lambda2 must be < lambda1");
  if (theta1.values.size() != labels.size())
    throw std::invalid_argument("theta1 length does not match the number of samples");
  if (theta1.values.size() == 0 || !theta1.values.allFinite())
    throw std::invalid_argument("theta1 must be finite and nonempty");
  if (theta1.values.minCoeff() < -1e-10) throw std::invalid_argument("theta1 has negative entries");
  if (std::abs(theta1.values.dot(labels)) > 1e-6)
    throw std::invalid_argument("theta1 violates theta^T y = 0");

  ScreeningContext ctx;
  ctx.lambda1_ = lambda1;
  ctx.lambda2_ = lambda2;
  ctx.inv_l1_ = 1.0 / lambda1;
  ctx.inv_l2_ = 1.0 / lambda2;
  ctx.labels_ = labels;
  ctx.theta1_ = theta1.values;
  const Index n = labels.size();
  ctx.n_ = static_cast<double>(n);
  ctx.theta1_y_ = theta1.values.dot(labels);
  ctx.y_one_ = labels.sum();

  ctx.b_vec_ = 0.5 * (ctx.inv_l2_ - ctx.theta1_.array()).matrix();
  ctx.c_vec_ = ctx.theta1_ + ctx.b_vec_;
  ctx.b_y_ = ctx.b_vec_.dot(labels);
  ctx.b_norm_ = ctx.b_vec_.norm();
  ctx.pb_norm_ = project_null(labels, ctx.b_vec_).norm();

  const Vector gap = (ctx.inv_l1_ - ctx.theta1_.array()).matrix();
  ctx.gap_norm_ = gap.norm();
  if (ctx.gap_norm_ <= 1e-12 * ctx.inv_l1_ * std::sqrt(ctx.n_)) return ctx;

  const Vector a = gap / ctx.gap_norm_;
  ctx.normal_ = a;
  ctx.a_one_ = a.sum();
  ctx.a_y_ = a.dot(labels);
  ctx.a_theta_ = a.dot(ctx.theta1_);
  const Vector pa = project_null(labels, a);
  ctx.pa_norm_ = pa.norm();
  if (ctx.pa_norm_ <= 1e-12) return ctx;

  ctx.has_halfspace_ = true;
  ctx.pa_pb_ = pa.dot(project_null(labels, ctx.b_vec_));

  const Vector ones = Vector::Ones(n);
  const Vector u = project_null(a, labels);
  ctx.pa_one_ = project_null(a, ones);
  ctx.uu_ = u.squaredNorm();
  ctx.qu_ = ctx.pa_one_.dot(u);
  ctx.qq_ = ctx.pa_one_.squaredNorm();
  ctx.puq_ = project_null(u, ctx.pa_one_);
  ctx.puq_norm_ = ctx.puq_.norm();
  ctx.min_ball_ = min_radius_ball(ctx.theta1_, lambda1, lambda2, a);
  return ctx;
}

std::optional<Halfspace> ScreeningContext::halfspace() const {
  if (!has_halfspace_) return std::nullopt;
  return Halfspace{*normal_, theta1_};
}

FeatureMoments ScreeningContext::moments_of(const Vector& fhat) const {
  if (fhat.size() != labels_.size()) throw std::invalid_argument("feature length mismatch");
  FeatureMoments f;
  f.dot_y = fhat.dot(labels_);
  f.dot_one = fhat.sum();
  f.sq_norm = fhat.squaredNorm();
  f.proj_y_norm = std::sqrt(std::max(0.0, f.sq_norm - f.dot_y * f.dot_y / n_));
  f.dot_theta1 = fhat.dot(theta1_);
  return f;
}

FeatureMoments ScreeningContext::moments_of(const Dataset& data, const FeatureStats& stats,
                                            Index j) const {
  FeatureMoments f;
  f.dot_y = stats.dot_y[j];
  f.dot_one = stats.dot_one[j];
  f.sq_norm = stats.sq_norm[j];
  f.proj_y_norm = stats.proj_y_norm[j];
  const auto& y = data.labels();
  double dot = 0.0;
  for (SparseMatrix::InnerIterator it(data.features(), j); it; ++it) {
    dot += theta1_[it.row()] * y[it.row()] * it.value();
  }
  f.dot_theta1 = dot;
  return f;
}

NegMinResult neg_min(const ScreeningContext& ctx, const FeatureMoments& f) {
  const double pf = f.proj_y_norm;
  if (f.sq_norm == 0.0 || pf <= 1e-12 * std::sqrt(f.sq_norm)) return {0.0, Branch::DegenerateF};

  const double n = ctx.n_;
  auto alpha_zero = [&]() -> NegMinResult {
    const double b_f = 0.5 * (f.dot_one * ctx.inv_l2_ - f.dot_theta1);
    const double pb_pf = b_f - ctx.b_y_ * f.dot_y / n;
    return {ctx.pb_norm_ * pf - pb_pf - f.dot_theta1, Branch::AlphaZero};
  };

  if (!ctx.has_halfspace_) {
    if (ctx.pb_norm_ == 0.0) return {-f.dot_theta1, Branch::AlphaZero};
    return alpha_zero();
  }

  // âᵀf̂ without touching â: â = (1/λ₁·1 − θ₁)/‖·‖.
  const double s_a = (f.dot_one * ctx.inv_l1_ - f.dot_theta1) / ctx.gap_norm_;
  const double pa_pf = s_a - ctx.a_y_ * f.dot_y / n;
  if (pa_pf / (ctx.pa_norm_ * pf) <= -1.0 + kCosTolerance) {
    return {pf / ctx.pa_norm_ * ctx.a_theta_, Branch::BetaZero};
  }
  if (ctx.pb_norm_ > 0.0 && ctx.pa_pb_ / ctx.pb_norm_ - pa_pf / pf <= 0.0) return alpha_zero();

  // Optimum on the slice âᵀ(θ − θ₁) = 0, evaluated with the minimal ball.
  // g = P_a(f̂), u = P_a(y), q = P_a(1).
  const double gu = f.dot_y - s_a * ctx.a_y_;
  const double gq = f.dot_one - s_a * ctx.a_one_;
  const double gg = f.sq_norm - s_a * s_a;
  const double pug = std::sqrt(std::max(0.0, gg - gu * gu / ctx.uu_));
  const double puq_pug = gq - ctx.qu_ * gu / ctx.uu_;
  const double value = 0.5 * (ctx.inv_l2_ - ctx.inv_l1_) * (ctx.puq_norm_ * pug - puq_pug) - f.dot_theta1;
  return {value, Branch::InteriorCorner};
}

NegMinResult neg_min(const ScreeningContext& ctx, const Vector& fhat) {
  return neg_min(ctx, ctx.moments_of(fhat));
}

FeatureBound screen_feature(const ScreeningContext& ctx, const Dataset& data,
                            const FeatureStats& stats, Index j, double keep_tolerance) {
  const FeatureMoments f = ctx.moments_of(data, stats, j);
  const NegMinResult pos = neg_min(ctx, f);
  const NegMinResult neg = neg_min(ctx, f.negated());
  FeatureBound out;
  out.feature = j;
  out.m1 = pos.value;
  out.m2 = neg.value;
  out.bound = std::max(pos.value, neg.value);
  out.branch_pos = pos.branch;
  out.branch_neg = neg.branch;
  // θ₁ sits |θ₁ᵀy|/‖y‖ off the plane θᵀy = 0 that K lives on; moving it
  // there shifts θ₁ᵀf̂ by that much times |f̂ᵀy|/‖y‖.
  const double off_plane = std::abs(ctx.theta1_dot_y()) * std::abs(f.dot_y) / static_cast<double>(ctx.n());
  out.keep = out.bound >= 1.0 - keep_tolerance - off_plane;
  return out;
}

double ScreenReport::rejection_rate() const {
  if (bounds.empty()) return 0.0;
  return 1.0 - static_cast<double>(kept.size()) / static_cast<double>(bounds.size());
}

ScreenReport screen_all(const ScreeningContext& ctx, const Dataset& data, const FeatureStats& stats,
                        int threads, double keep_tolerance) {
  const auto start = std::chrono::steady_clock::now();
  const Index m = data.n_features();
  if (data.n_samples() != ctx.n()) throw std::invalid_argument("context and data disagree on n");
  if (stats.size() != m) throw std::invalid_argument("stats and data disagree on m");

  ScreenReport report;
  report.lambda1 = ctx.lambda1();
  report.lambda2 = ctx.lambda2();
  report.bounds.resize(static_cast<std::size_t>(m));

  auto run_block = [&](Index begin, Index end) {
    for (Index j = begin; j < end; ++j) {
      report.bounds[static_cast<std::size_t>(j)] = screen_feature(ctx, data, stats, j, keep_tolerance);
    }
  };
  const Index workers = std::clamp<Index>(threads, 1, std::max<Index>(m, 1));
  if (workers == 1) {
    run_block(0, m);
  } else {
    std::vector<std::jthread> pool;
    const Index chunk = (m + workers - 1) / workers;
    for (Index w = 0; w < workers; ++w) {
      const Index begin = w * chunk;
      const Index end = std::min(m, begin + chunk);
      if (begin < end) pool.emplace_back(run_block, begin, end);
    }
  }

  for (const auto& fb : report.bounds) {
    if (fb.keep) report.kept.push_back(fb.feature);
    ++report.branch_counts[static_cast<std::size_t>(fb.branch_pos)];
    ++report.branch_counts[static_cast<std::size_t>(fb.branch_neg)];
  }
  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

ScreenReport screen_from_model(const Dataset& data, const FeatureStats& stats, const PrimalModel& model,
                               double lambda2, int threads) {
  const auto start = std::chrono::steady_clock::now();
  const ThetaVector theta = theta_from_primal(data, model.weights, model.bias, model.lambda);
  const auto ctx = ScreeningContext::build(theta, lambda2, data);
  ScreenReport report = screen_all(ctx, data, stats, threads, kKeepTolerance + model.kkt_residual);
  // An active feature has |θ₁ᵀf̂| = 1, so its bound is 1 up to θ₁'s error
  // scaled by ‖f̂‖; the flat slack above does not cover large columns.
  bool added = false;
  for (Index j = 0; j < data.n_features(); ++j) {
    auto& fb = report.bounds[static_cast<std::size_t>(j)];
    if (model.weights[j] != 0.0 && !fb.keep) {
      fb.keep = true;
      added = true;
    }
  }
  if (added) {
    report.kept.clear();
    for (const auto& fb : report.bounds)
      if (fb.keep) report.kept.push_back(fb.feature);
  }
  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

ThetaVector theta_at_lambda_max(const Dataset& data) {
  const LambdaMax lm = lambda_max(data);
  if (lm.value == 0.0) throw std::domain_error("lambda_max is zero; the zero model is optimal for every lambda");
  return theta_from_primal(data, Vector::Zero(data.n_features()), lm.bias, lm.value);
}

}  // namespace svmscreen
