#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "core/matrix.hpp"

namespace tq {

struct SvdOptions {
  // Residual tolerance relative to the largest singular value; restart cycles
  // of the iterative solver are capped at max_restarts.
  double tol = 1e-10;
  int max_restarts = 1000;
  std::uint64_t seed = 0x5eed5eed5eed5eedULL;
  // Matrices with both dimensions under this go through dense full SVD.
  std::size_t dense_cutoff = 500;
  bool force_iterative = false;
  int threads = 1;
};

// Rank-k row-space basis of a document-by-term matrix. Component rows are
// orthonormal; each row's entry of largest magnitude is kept non-negative so
// repeated fits are comparable.
class SvdModel {
 public:
  SvdModel() = default;
  SvdModel(std::uint32_t k, std::size_t width, std::vector<double> singular_values,
           std::vector<double> basis_width_by_k);

  std::uint32_t k() const { return k_; }
  std::size_t width() const { return width_; }  // vocabulary width
  std::span<const double> singular_values() const { return sigma_; }

  // Row i of V_k (length = width).
  std::vector<double> component(std::size_t i) const;
  // Internal layout: width x k, row-major (projection-friendly).
  std::span<const double> basis() const { return basis_; }

  bool operator==(const SvdModel& other) const = default;

 private:
  std::uint32_t k_ = 0;
  std::size_t width_ = 0;
  std::vector<double> sigma_;
  std::vector<double> basis_;  // width x k
};

SvdModel fit_svd(const SparseMatrix& train, std::uint32_t k, const SvdOptions& opts = {});

// Latent coordinates docs * V_k^T; rows of `docs` must match model width.
DenseMatrix project(const SvdModel& model, const SparseMatrix& docs, int threads = 1);

}  // namespace tq
