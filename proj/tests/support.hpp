#pragma once

#include "svmscreen/dataset.hpp"

#include <random>
#include <vector>

namespace svmscreen::testing {

// Gaussian entries kept with probability `density`; labels +1 with
// probability `pos_frac`, with at least one sample of each class.
inline Dataset random_dataset(std::mt19937_64& rng, Index n, Index m, double density = 1.0,
                              double pos_frac = 0.5) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit;
  std::vector<Eigen::Triplet<double>> entries;
  for (Index j = 0; j < m; ++j) {
    for (Index i = 0; i < n; ++i) {
      if (unit(rng) < density) entries.emplace_back(i, j, normal(rng));
    }
  }
  SparseMatrix X(n, m);
  X.setFromTriplets(entries.begin(), entries.end());
  Vector y(n);
  for (Index i = 0; i < n; ++i) y[i] = unit(rng) < pos_frac ? 1.0 : -1.0;
  if (n >= 2) {
    y[0] = 1.0;
    y[1] = -1.0;
  }
  return Dataset(X, y);
}

inline Vector random_vector(std::mt19937_64& rng, Index n, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = normal(rng);
  return v;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Vector weighted_column(const Dataset& data, Index j) {
  return data.labels().cwiseProduct(Vector(data.features().col(j)));
}

inline Dataset dense_dataset(const Eigen::MatrixXd& X, const Vector& y) {
  return Dataset(X.sparseView(), y);
}

// θ ≥ 0 with θᵀy = 0: random magnitudes, each class rescaled to the same mass.
inline Vector random_dual_point(std::mt19937_64& rng, const Vector& y, double scale = 1.0) {
  Vector theta = random_vector(rng, y.size(), scale).cwiseAbs();
  double pos = 0.0, neg = 0.0;
  for (Index i = 0; i < y.size(); ++i) (y[i] > 0 ? pos : neg) += theta[i];
  const double target = 0.5 * (pos + neg);
  for (Index i = 0; i < y.size(); ++i) theta[i] *= target / (y[i] > 0 ? pos : neg);
  return theta;
}

inline Vector random_labels(std::mt19937_64& rng, Index n) {
  Vector y(n);
  for (Index i = 0; i < n; ++i) y[i] = uniform(rng, 0.0, 1.0) < 0.5 ? 1.0 : -1.0;
  y[0] = 1.0;
  y[n - 1] = -1.0;
  return y;
}

}  // namespace svmscreen::testing
