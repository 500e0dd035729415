#include "support.hpp"

#include "svmscreen/dataset.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace svmscreen;

namespace {

std::size_t error_line(const std::string& text) {
  try {
    parse_sparse_text(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  FAIL("expected a parse error");
  return 0;
}

}  // namespace

TEST_SUITE("data_io") {

TEST_CASE("two records transcribe directly") {
  const Dataset d = parse_sparse_text("+1 1:2\n-1 2:1\n");
  CHECK(d.n_samples() == 2);
  CHECK(d.n_features() == 2);
  CHECK(d.features().coeff(0, 0) == 2.0);
  CHECK(d.features().coeff(1, 1) == 1.0);
  CHECK(d.features().col(0).nonZeros() == 1);
  CHECK(d.features().col(1).nonZeros() == 1);
  CHECK(d.labels()[0] == 1.0);
  CHECK(d.labels()[1] == -1.0);
  CHECK(d.n_pos() == 1);
  CHECK(d.n_neg() == 1);
}

TEST_CASE("feature count is the largest index") {
  const Dataset d = parse_sparse_text("1 3:5\n");
  CHECK(d.n_samples() == 1);
  CHECK(d.n_features() == 3);
  CHECK(d.features().col(0).nonZeros() == 0);
  CHECK(d.features().col(1).nonZeros() == 0);
  CHECK(d.features().coeff(0, 2) == 5.0);
}

TEST_CASE("label mapping") {
  CHECK(parse_sparse_text("0 1:1\n").labels()[0] == -1.0);
  CHECK(parse_sparse_text("-1 1:1\n").labels()[0] == -1.0);
  CHECK(parse_sparse_text("-0.3 1:1\n").labels()[0] == -1.0);
  CHECK(parse_sparse_text("2.5 1:1\n").labels()[0] == 1.0);
  CHECK(parse_sparse_text("1 1:1\n").labels()[0] == 1.0);

  ParseOptions strict;
  strict.strict_labels = true;
  CHECK(parse_sparse_text("-1 1:1\n+1 1:2\n", strict).n_pos() == 1);
  CHECK_THROWS_AS(parse_sparse_text("0 1:1\n", strict), ParseError);
  CHECK_THROWS_AS(parse_sparse_text("2 1:1\n", strict), ParseError);
}

TEST_CASE("comments, blank lines and CRLF") {
  const Dataset d = parse_sparse_text("# header\r\n\r\n+1 1:1 2:3.5\r\n# mid\n-1 2:-1\n\n");
  CHECK(d.n_samples() == 2);
  CHECK(d.features().coeff(0, 1) == 3.5);
  CHECK(d.features().coeff(1, 1) == -1.0);
}

TEST_CASE("samples without features are allowed") {
  const Dataset d = parse_sparse_text("+1\n-1 2:1\n");
  CHECK(d.n_samples() == 2);
  CHECK(d.n_features() == 2);
}

TEST_CASE("errors carry the line number") {
  CHECK(error_line("+1 1:1\n-1 0:1\n") == 2);
  CHECK(error_line("+1 2:1 2:3\n") == 1);
  CHECK(error_line("+1 3:1 2:3\n") == 1);
  CHECK(error_line("# c\n+1 1:1\nabc 1:1\n") == 3);
  CHECK(error_line("+1 1:x\n") == 1);
  CHECK(error_line("+1 1\n") == 1);
  CHECK(error_line("+1 a:1\n") == 1);
  CHECK(error_line("+1 -2:1\n") == 1);
  CHECK_THROWS_AS(parse_sparse_text(""), ParseError);
  CHECK_THROWS_AS(parse_sparse_text("# nothing\n\n"), ParseError);
  CHECK_THROWS_AS(parse_sparse_text("+1\n-1\n"), ParseError);
}

TEST_CASE("missing file") {
  CHECK_THROWS(read_sparse_file("/nonexistent/data.txt"));
}

TEST_CASE("dataset invariants") {
  SparseMatrix X(2, 1);
  X.insert(0, 0) = 1.0;
  Vector bad(2);
  bad << 1.0, 0.5;
  CHECK_THROWS_AS(Dataset(X, bad), std::invalid_argument);
  Vector short_y(1);
  short_y << 1.0;
  CHECK_THROWS_AS(Dataset(X, short_y), std::invalid_argument);
  Vector y(2);
  y << 1.0, -1.0;
  SparseMatrix inf(2, 1);
  inf.insert(1, 0) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(Dataset(inf, y), std::invalid_argument);
}

TEST_CASE("parse of serialize is the identity") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Dataset d = testing::random_dataset(rng, 7, 9, trial % 2 ? 0.3 : 1.0);
    // The last feature must carry an entry for the feature count to survive.
    SparseMatrix X = d.features();
    X.coeffRef(0, 8) = 0.25;
    const Dataset canon(X, d.labels());
    const std::string text = serialize_sparse_text(canon);
    const Dataset back = parse_sparse_text(text);
    CHECK(back.labels() == canon.labels());
    CHECK(Eigen::MatrixXd(back.features()) == Eigen::MatrixXd(canon.features()));
    CHECK(serialize_sparse_text(back) == text);
  }
}

TEST_CASE("select_features keeps columns in order") {
  const Dataset d = parse_sparse_text("+1 1:1 2:2 3:3\n-1 1:4 3:6\n");
  const Dataset s = d.select_features({2, 0});
  CHECK(s.n_features() == 2);
  CHECK(s.features().coeff(0, 0) == 3.0);
  CHECK(s.features().coeff(1, 1) == 4.0);
}

TEST_CASE("feature stats hand examples") {
  SUBCASE("f proportional to y") {
    const Dataset d = parse_sparse_text("+1 1:1\n-1 1:1\n");
    const FeatureStats s = compute_feature_stats(d);
    CHECK(s.dot_y[0] == doctest::Approx(2.0));
    CHECK(s.dot_one[0] == doctest::Approx(0.0));
    CHECK(s.sq_norm[0] == doctest::Approx(2.0));
    CHECK(s.proj_y_norm[0] == doctest::Approx(0.0));
  }
  SUBCASE("one nonzero") {
    const Dataset d = parse_sparse_text("+1 1:1\n-1 2:1\n");
    const FeatureStats s = compute_feature_stats(d);
    CHECK(s.dot_y[0] == doctest::Approx(1.0));
    CHECK(s.dot_one[0] == doctest::Approx(1.0));
    CHECK(s.sq_norm[0] == doctest::Approx(1.0));
    CHECK(s.proj_y_norm[0] == doctest::Approx(std::sqrt(0.5)));
  }
}

TEST_CASE("feature stats match dense recomputation") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const Index n = 3 + trial % 17;
    const Dataset d = testing::random_dataset(rng, n, 12, trial % 3 ? 0.1 : 1.0, 0.3);
    const FeatureStats s = compute_feature_stats(d);
    const Vector& y = d.labels();
    for (Index j = 0; j < d.n_features(); ++j) {
      const Vector f = testing::weighted_column(d, j);
      const Vector p = f - (f.dot(y) / y.squaredNorm()) * y;
      const double scale = std::max(1.0, f.squaredNorm());
      CHECK(std::abs(s.dot_y[j] - f.dot(y)) <= 1e-14 * scale * 10);
      CHECK(std::abs(s.dot_one[j] - f.sum()) <= 1e-14 * scale * 10);
      CHECK(std::abs(s.sq_norm[j] - f.squaredNorm()) <= 1e-14 * scale * 10);
      CHECK(std::abs(s.proj_y_norm[j] - p.norm()) <= 1e-7 * std::sqrt(scale));
      // Cauchy–Schwarz and the projection identity.
      CHECK(std::abs(s.dot_y[j]) <= std::sqrt(static_cast<double>(n) * s.sq_norm[j]) * (1 + 1e-12));
      const double identity = s.sq_norm[j] - s.dot_y[j] * s.dot_y[j] / static_cast<double>(n);
      CHECK(std::abs(s.proj_y_norm[j] * s.proj_y_norm[j] - std::max(0.0, identity)) <= 1e-12 * scale);
    }
  }
}

TEST_CASE("zero column gives zero stats") {
  const Dataset d = parse_sparse_text("+1 2:1\n-1 2:3\n");
  const FeatureStats s = compute_feature_stats(d);
  CHECK(s.dot_y[0] == 0.0);
  CHECK(s.dot_one[0] == 0.0);
  CHECK(s.sq_norm[0] == 0.0);
  CHECK(s.proj_y_norm[0] == 0.0);
}

}
