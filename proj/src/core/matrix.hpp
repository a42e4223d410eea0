#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace tq {

// Document-by-term weight matrix in CSR form. Column indices are strictly
// increasing within a row and zero weights are never stored.
class SparseMatrix {
 public:
  SparseMatrix() { offsets_.push_back(0); }
  explicit SparseMatrix(std::size_t n_cols) : n_cols_(n_cols) { offsets_.push_back(0); }

  // Assembles from raw CSR arrays, validating the structural invariants.
  static SparseMatrix from_csr(std::size_t n_cols, std::vector<std::uint64_t> offsets,
                               std::vector<std::uint32_t> cols, std::vector<double> vals);

  // Appends one row; (cols, vals) must be parallel, column-sorted, zero-free.
  void append_row(std::span<const std::uint32_t> cols, std::span<const double> vals);

  std::size_t rows() const { return offsets_.size() - 1; }
  std::size_t cols() const { return n_cols_; }
  std::size_t nnz() const { return col_idx_.size(); }

  std::span<const std::uint32_t> row_cols(std::size_t i) const {
    return {col_idx_.data() + offsets_[i], col_idx_.data() + offsets_[i + 1]};
  }
  std::span<const double> row_vals(std::size_t i) const {
    return {values_.data() + offsets_[i], values_.data() + offsets_[i + 1]};
  }
  std::span<double> mutable_row_vals(std::size_t i) {
    return {values_.data() + offsets_[i], values_.data() + offsets_[i + 1]};
  }
  std::size_t row_nnz(std::size_t i) const { return offsets_[i + 1] - offsets_[i]; }

  std::span<const std::uint64_t> offsets() const { return offsets_; }
  std::span<const std::uint32_t> col_indices() const { return col_idx_; }
  std::span<const double> values() const { return values_; }

  double row_norm(std::size_t i) const;
  double row_sqnorm(std::size_t i) const;

  std::vector<double> to_dense_row(std::size_t i) const;

  bool operator==(const SparseMatrix& other) const = default;

 private:
  std::size_t n_cols_ = 0;
  std::vector<std::uint64_t> offsets_;
  std::vector<std::uint32_t> col_idx_;
  std::vector<double> values_;
};

// Row-major dense matrix (latent coordinates, classifier scores).
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }

  double at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  double& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  bool operator==(const DenseMatrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Two-pointer sparse dot product; terms are accumulated in ascending column
// order, which every similarity path in this codebase shares so that
// accelerated and brute-force scores are bit-identical.
double sparse_dot(std::span<const std::uint32_t> a_cols, std::span<const double> a_vals,
                  std::span<const std::uint32_t> b_cols, std::span<const double> b_vals);

}  // namespace tq
