#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace svmscreen {

using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor>;
using Index = Eigen::Index;

/// Error raised while reading sparse text input. Carries the 1-based line
/// number of the offending record, or 0 when the error is not line-specific.
class ParseError : public std::runtime_error {
public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

/// Binary classification data stored column-major: each column is one
/// feature f_j over the samples, labels are exactly -1 or +1.
///
/// Immutable after construction.
class Dataset {
public:
  /// Validates the invariants (labels in {-1,+1}, at least one sample and one
  /// feature, matching sizes, finite values) and throws std::invalid_argument
  /// otherwise.
  Dataset(SparseMatrix features, Vector labels);

  Index n_samples() const noexcept { return features_.rows(); }
  Index n_features() const noexcept { return features_.cols(); }
  Index n_pos() const noexcept { return n_pos_; }
  Index n_neg() const noexcept { return n_neg_; }

  const SparseMatrix& features() const noexcept { return features_; }
  const Vector& labels() const noexcept { return labels_; }

  /// Copy of the dataset keeping only the listed feature columns, in order.
  Dataset select_features(const std::vector<Index>& columns) const;

private:
  SparseMatrix features_;
  Vector labels_;
  Index n_pos_ = 0;
  Index n_neg_ = 0;
};

/// Per-feature quantities that depend only on the data, with f̂_j = Y f_j.
/// Shared by every screening pass over the same dataset.
struct FeatureStats {
  Vector dot_y;        // f̂ᵀy
  Vector dot_one;      // f̂ᵀ1
  Vector sq_norm;      // f̂ᵀf̂
  Vector proj_y_norm;  // ‖P_y(f̂)‖₂

  Index size() const noexcept { return dot_y.size(); }
};

struct ParseOptions {
  /// Reject any label other than exactly -1 or +1 instead of mapping by sign.
  bool strict_labels = false;
};

/// Reads `<label> <idx>:<val> ...` records (1-based, strictly increasing
/// indices). Blank lines and lines starting with '#' are skipped; both LF and
/// CRLF line endings are accepted. Labels > 0 map to +1, everything else to
/// -1. The number of features is the largest index seen.
Dataset parse_sparse_text(std::istream& in, const ParseOptions& options = {});
Dataset parse_sparse_text(const std::string& text, const ParseOptions& options = {});
Dataset read_sparse_file(const std::string& path, const ParseOptions& options = {});

/// Canonical text form: one sample per line, labels as "+1"/"-1", stored
/// entries in increasing index order printed with round-trip precision.
std::string serialize_sparse_text(const Dataset& data);

FeatureStats compute_feature_stats(const Dataset& data);

}  // namespace svmscreen
