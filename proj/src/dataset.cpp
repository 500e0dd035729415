#include "svmscreen/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <sstream>
#include <string_view>

namespace svmscreen {

namespace {

std::string at_line(std::size_t line, const std::string& msg) {
  if (line == 0) return msg;
  return "line " + std::to_string(line) + ": " + msg;
}

bool parse_real(std::string_view token, double& out) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  if (token.empty()) return false;
  const char* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, out);
  return ec == std::errc() && ptr == end;
}

bool parse_index(std::string_view token, long long& out) {
  if (token.empty()) return false;
  const char* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, out);
  return ec == std::errc() && ptr == end;
}

bool is_space(char c) { return c == ' ' || c == '\t'; }

std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    std::size_t j = i;
    while (j < line.size() && !is_space(line[j])) ++j;
    if (j > i) tokens.push_back(line.substr(i, j - i));
    i = j;
  }
  return tokens;
}

}  // namespace

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error(at_line(line, what)), line_(line) {}

Dataset::Dataset(SparseMatrix features, Vector labels)
    : features_(std::move(features)), labels_(std::move(labels)) {
  if (features_.rows() < 1) throw std::invalid_argument("dataset needs at least one sample");
  if (features_.cols() < 1) throw std::invalid_argument("dataset needs at least one feature");
  if (labels_.size() != features_.rows())
    throw std::invalid_argument("label count does not match sample count");
  features_.makeCompressed();
  for (Index i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == 1.0) {
      ++n_pos_;
    } else if (labels_[i] == -1.0) {
      ++n_neg_;
    } else {
      throw std::invalid_argument("labels must be exactly -1 or +1");
    }
  }
  const double* values = features_.valuePtr();
  for (Index k = 0; k < features_.nonZeros(); ++k) {
    if (!std::isfinite(values[k])) throw std::invalid_argument("non-finite feature value");
  }
}

Dataset Dataset::select_features(const std::vector<Index>& columns) const {
  if (columns.empty()) throw std::invalid_argument("feature selection is empty");
  SparseMatrix sub(n_samples(), static_cast<Index>(columns.size()));
  Index nnz = 0;
  for (Index j : columns) {
    if (j < 0 || j >= n_features()) throw std::out_of_range("feature index out of range");
    nnz += features_.col(j).nonZeros();
  }
  sub.reserve(nnz);
  for (std::size_t k = 0; k < columns.size(); ++k) {
    sub.startVec(static_cast<Index>(k));
    for (SparseMatrix::InnerIterator it(features_, columns[k]); it; ++it) {
      sub.insertBack(it.row(), static_cast<Index>(k)) = it.value();
    }
  }
  sub.finalize();
  return Dataset(std::move(sub), labels_);
}

Dataset parse_sparse_text(std::istream& in, const ParseOptions& options) {
  std::vector<Eigen::Triplet<double>> entries;
  std::vector<double> labels;
  long long max_index = 0;
  std::string raw;
  std::size_t line_no = 0;

  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line(raw);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    auto tokens = split_tokens(line);
    if (tokens.empty() || tokens.front().front() == '#') continue;

    double label_value = 0.0;
    if (!parse_real(tokens.front(), label_value) || !std::isfinite(label_value))
      throw ParseError(line_no, "malformed label '" + std::string(tokens.front()) + "'");
    if (options.strict_labels && label_value != 1.0 && label_value != -1.0)
      throw ParseError(line_no, "label must be -1 or +1 in strict mode");
    const double label = label_value > 0.0 ? 1.0 : -1.0;
    const auto row = static_cast<Index>(labels.size());

    long long previous = 0;
    for (std::size_t t = 1; t < tokens.size(); ++t) {
      std::string_view tok = tokens[t];
      const auto colon = tok.find(':');
      if (colon == std::string_view::npos)
        throw ParseError(line_no, "malformed feature '" + std::string(tok) + "'");
      long long index = 0;
      double value = 0.0;
      if (!parse_index(tok.substr(0, colon), index))
        throw ParseError(line_no, "malformed index in '" + std::string(tok) + "'");
      if (!parse_real(tok.substr(colon + 1), value))
        throw ParseError(line_no, "malformed value in '" + std::string(tok) + "'");
      if (index <= 0) throw ParseError(line_no, "feature indices are 1-based");
      if (index <= previous) throw ParseError(line_no, "feature indices must be strictly increasing");
      if (!std::isfinite(value)) throw ParseError(line_no, "non-finite feature value");
      if (index > std::numeric_limits<int>::max())
        throw ParseError(line_no, "feature index too large");
      previous = index;
      max_index = std::max(max_index, index);
      entries.emplace_back(row, static_cast<Index>(index - 1), value);
    }
    labels.push_back(label);
  }

  if (labels.empty()) throw ParseError(0, "empty input");
  if (max_index == 0) throw ParseError(0, "input has no feature entries");

  SparseMatrix features(static_cast<Index>(labels.size()), static_cast<Index>(max_index));
  features.setFromTriplets(entries.begin(), entries.end());
  Vector y = Eigen::Map<const Vector>(labels.data(), static_cast<Index>(labels.size()));
  return Dataset(std::move(features), std::move(y));
}

Dataset parse_sparse_text(const std::string& text, const ParseOptions& options) {
  std::istringstream in(text);
  return parse_sparse_text(in, options);
}

Dataset read_sparse_file(const std::string& path, const ParseOptions& options) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open '" + path + "'");
  return parse_sparse_text(in, options);
}

std::string serialize_sparse_text(const Dataset& data) {
  // Row-major view so every sample is written in increasing index order.
  const Eigen::SparseMatrix<double, Eigen::RowMajor> rows(data.features());
  std::ostringstream out;
  out.precision(17);
  for (Index i = 0; i < rows.rows(); ++i) {
    out << (data.labels()[i] > 0 ? "+1" : "-1");
    for (decltype(rows)::InnerIterator it(rows, i); it; ++it) {
      out << ' ' << (it.col() + 1) << ':' << it.value();
    }
    out << '\n';
  }
  return out.str();
}

FeatureStats compute_feature_stats(const Dataset& data) {
  const auto& X = data.features();
  const auto& y = data.labels();
  const Index m = data.n_features();
  const double n = static_cast<double>(data.n_samples());

  FeatureStats stats;
  stats.dot_y.resize(m);
  stats.dot_one.resize(m);
  stats.sq_norm.resize(m);
  stats.proj_y_norm.resize(m);
  for (Index j = 0; j < m; ++j) {
    double dy = 0.0, d1 = 0.0, sq = 0.0;
    for (SparseMatrix::InnerIterator it(X, j); it; ++it) {
      const double fhat = y[it.row()] * it.value();
      dy += fhat * y[it.row()];
      d1 += fhat;
      sq += fhat * fhat;
    }
    stats.dot_y[j] = dy;
    stats.dot_one[j] = d1;
    stats.sq_norm[j] = sq;
    stats.proj_y_norm[j] = std::sqrt(std::max(0.0, sq - dy * dy / n));
  }
  return stats;
}

}  // namespace svmscreen
