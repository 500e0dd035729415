#include "contexts.hpp"

#include "svmscreen/oracle.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace svmscreen;

TEST_SUITE("oracle") {

TEST_CASE("unconstrained ball maximum in the reduced space") {
  // n = 3 without a halfspace: max gᵀθ = gᵀc' + r'‖P_y g‖.
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const Vector y = testing::random_labels(rng, 3);
    const Ball ball{testing::random_vector(rng, 3), testing::uniform(rng, 1.0, 2.0)};
    const Vector g = testing::random_vector(rng, 3);
    const double cy = ball.center.dot(y) / y.squaredNorm();
    const Vector c_red = ball.center - cy * y;
    const double r_red = std::sqrt(ball.radius * ball.radius - cy * cy * y.squaredNorm());
    if (!std::isfinite(r_red)) continue;
    const Vector pg = project_null(y, g);
    const OracleResult r = maximize_linear(g, ball, std::nullopt, y);
    CHECK(r.value == doctest::Approx(g.dot(c_red) + r_red * pg.norm()).epsilon(1e-12));
    CHECK(r.certified);
  }
}

TEST_CASE("feature proportional to y gives zero") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    const auto ctx = testing::random_context(rng, 3);
    const OracleResult r = oracle_max(ctx, 1.7 * ctx.labels());
    CHECK(std::abs(r.value) <= 1e-12);
  }
}

TEST_CASE("candidates agree with dense sampling at n = 3") {
  std::mt19937_64 rng(3);
  int compared = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto ctx = testing::random_context(rng, 3);
    const Vector g = testing::random_vector(rng, 3);
    OracleOptions opts;
    opts.samples = 200000;
    const OracleResult r = oracle_max(ctx, g, opts);
    REQUIRE(std::isfinite(r.sampled_value));
    CHECK(std::abs(r.value - r.sampled_value) <= 1e-7 * std::max(1.0, std::abs(r.value)));
    CHECK(r.certified);
    ++compared;
  }
  CHECK(compared == 100);
}

TEST_CASE("argmax is feasible and the basis does not matter") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 60; ++trial) {
    const Index n = 2 + trial % 9;
    const auto ctx = testing::random_context(rng, n);
    const Vector g = testing::random_vector(rng, n);
    OracleOptions plain;
    plain.dense_check = false;
    const OracleResult r = oracle_max(ctx, g, plain);
    CHECK((r.argmax - ctx.c_vec()).norm() <= ctx.ball().radius + 1e-8);
    CHECK(std::abs(r.argmax.dot(ctx.labels())) <= 1e-8);
    if (ctx.has_halfspace()) CHECK(ctx.halfspace()->signed_distance(r.argmax) <= 1e-8);
    for (std::uint64_t seed : {7u, 99u, 12345u}) {
      OracleOptions rotated = plain;
      rotated.basis_seed = seed;
      CHECK(std::abs(oracle_max(ctx, g, rotated).value - r.value) <= 1e-9 * std::max(1.0, std::abs(r.value)));
    }
  }
}

TEST_CASE("the minimal ball gives the same optimum when it sits on the hyperplane") {
  std::mt19937_64 rng(5);
  int on_plane = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const Index n = 2 + trial % 6;
    const auto ctx = testing::random_context(rng, n);
    if (!ctx.has_halfspace() || !ctx.min_ball()) continue;
    const Vector g = testing::random_vector(rng, n);
    OracleOptions opts;
    opts.dense_check = false;
    const OracleResult plain = oracle_max(ctx, g, opts);
    if (std::abs(ctx.halfspace()->signed_distance(plain.argmax)) > 1e-9) continue;
    const OracleResult small = oracle_max_on_slice(ctx, g, ctx.min_ball()->ball, opts);
    CHECK(std::abs(small.value - plain.value) <= 1e-8 * std::max(1.0, std::abs(plain.value)));
    ++on_plane;
  }
  CHECK(on_plane >= 20);
}

TEST_CASE("closed form matches the oracle on each branch") {
  std::mt19937_64 rng(6);
  std::array<int, kBranchCount> hits{};
  for (int trial = 0; trial < 60; ++trial) {
    const Index n = 2 + trial % 2;
    const auto ctx = testing::random_context(rng, n);
    REQUIRE(ctx.has_halfspace());
    for (auto steer : {testing::Steer::Degenerate, testing::Steer::AntiNormal, testing::Steer::Random,
                       testing::Steer::Random}) {
      const Vector f = testing::steered_feature(rng, ctx, steer);
      for (double s : {1.0, -1.0}) {
        const Vector fs = s * f;
        const NegMinResult closed = neg_min(ctx, fs);
        OracleOptions opts;
        opts.samples = 100000;
        const double ref = oracle_neg_min(ctx, fs, opts);
        CHECK(std::abs(closed.value - ref) <= 1e-6);
        ++hits[static_cast<std::size_t>(closed.branch)];
      }
    }
  }
  for (std::size_t b = 0; b < kBranchCount; ++b) {
    INFO("branch " << branch_name(static_cast<Branch>(b)));
    CHECK(hits[b] >= 10);
  }
}

TEST_CASE("closed form matches the oracle for larger n") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 4 + trial % 7;
    const auto ctx = testing::random_context(rng, n);
    const Vector f = testing::random_vector(rng, n);
    OracleOptions opts;
    const OracleResult ref = oracle_max(ctx, -f, opts);
    if (!ref.certified) continue;
    CHECK(std::abs(neg_min(ctx, f).value - ref.value) <= 1e-6);
  }
}

TEST_CASE("oracle limits") {
  std::mt19937_64 rng(8);
  const auto ctx = testing::random_context(rng, 11);
  CHECK_THROWS_AS(oracle_max(ctx, Vector::Ones(11)), std::invalid_argument);
  const auto small = testing::random_context(rng, 4);
  CHECK_THROWS_AS(oracle_max(small, Vector::Ones(3)), std::invalid_argument);
  CHECK_THROWS_AS(dense_sample_max(Vector::Ones(4), small.ball(), std::nullopt, small.labels(), 100),
                  std::invalid_argument);
}

TEST_CASE("zero radius returns the centre value") {
  const Vector y = (Vector(2) << 1, -1).finished();
  const Vector theta1 = Vector::Constant(2, 0.5);
  // θ₁ = 1/λ₂·1 collapses the ball onto θ₁.
  const auto ctx = ScreeningContext::build(ThetaVector{theta1, 4.0}, 2.0, y);
  CHECK(ctx.ball().radius == 0.0);
  const Vector g = (Vector(2) << 3, 1).finished();
  const OracleResult r = oracle_max(ctx, g);
  CHECK(r.value == doctest::Approx(g.dot(theta1)));
  CHECK(r.certified);
}

}
