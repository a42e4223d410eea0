#include "core/matrix.hpp"

#include <cmath>
#include <string>

#include "core/error.hpp"

namespace tq {

SparseMatrix SparseMatrix::from_csr(std::size_t n_cols, std::vector<std::uint64_t> offsets,
                                    std::vector<std::uint32_t> cols,
                                    std::vector<double> vals) {
  if (offsets.empty() || offsets.front() != 0 || offsets.back() != cols.size() ||
      cols.size() != vals.size()) {
    raise(Errc::corrupt_stream, "inconsistent CSR arrays");
  }
  for (std::size_t r = 0; r + 1 < offsets.size(); ++r) {
    if (offsets[r] > offsets[r + 1]) raise(Errc::corrupt_stream, "row offsets not monotone");
    for (std::uint64_t e = offsets[r]; e < offsets[r + 1]; ++e) {
      if (cols[e] >= n_cols) raise(Errc::corrupt_stream, "column index out of bounds");
      if (e > offsets[r] && cols[e] <= cols[e - 1])
        raise(Errc::corrupt_stream, "columns not strictly increasing within a row");
      if (vals[e] == 0.0 || !std::isfinite(vals[e]))
        raise(Errc::corrupt_stream, "stored weight is zero or non-finite");
    }
  }
  SparseMatrix m(n_cols);
  m.offsets_ = std::move(offsets);
  m.col_idx_ = std::move(cols);
  m.values_ = std::move(vals);
  return m;
}

void SparseMatrix::append_row(std::span<const std::uint32_t> cols,
                              std::span<const double> vals) {
  if (cols.size() != vals.size()) raise(Errc::internal, "append_row: size mismatch");
  for (std::size_t e = 0; e < cols.size(); ++e) {
    if (cols[e] >= n_cols_) raise(Errc::internal, "append_row: column out of bounds");
    if (e > 0 && cols[e] <= cols[e - 1]) raise(Errc::internal, "append_row: unsorted columns");
    if (vals[e] == 0.0) raise(Errc::internal, "append_row: zero weight");
  }
  col_idx_.insert(col_idx_.end(), cols.begin(), cols.end());
  values_.insert(values_.end(), vals.begin(), vals.end());
  offsets_.push_back(col_idx_.size());
}

double SparseMatrix::row_sqnorm(std::size_t i) const {
  double s = 0.0;
  for (double v : row_vals(i)) s += v * v;
  return s;
}

double SparseMatrix::row_norm(std::size_t i) const { return std::sqrt(row_sqnorm(i)); }

std::vector<double> SparseMatrix::to_dense_row(std::size_t i) const {
  std::vector<double> out(n_cols_, 0.0);
  auto cs = row_cols(i);
  auto vs = row_vals(i);
  for (std::size_t e = 0; e < cs.size(); ++e) out[cs[e]] = vs[e];
  return out;
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_)
    raise(Errc::internal, "DenseMatrix: data size does not match shape");
}

double sparse_dot(std::span<const std::uint32_t> a_cols, std::span<const double> a_vals,
                  std::span<const std::uint32_t> b_cols, std::span<const double> b_vals) {
  double acc = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a_cols.size() && j < b_cols.size()) {
    if (a_cols[i] == b_cols[j]) {
      acc += a_vals[i] * b_vals[j];
      ++i;
      ++j;
    } else if (a_cols[i] < b_cols[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  return acc;
}

}  // namespace tq
