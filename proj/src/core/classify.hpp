#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "core/matrix.hpp"

namespace tq {

struct Prediction {
  std::vector<std::int32_t> labels;
  // Linear models: per-class decision scores (n_docs x n_classes).
  std::optional<DenseMatrix> scores;
};

// Sum u_s v_s / (||u|| ||v||); 0 when either norm is zero.
double cosine_similarity(std::span<const double> u, std::span<const double> v);
double cosine_similarity(std::span<const std::uint32_t> u_cols, std::span<const double> u_vals,
                         std::span<const std::uint32_t> v_cols, std::span<const double> v_vals);

// Exact cosine KNN. Prediction ties: majority vote, then larger summed
// similarity among tied classes, then smaller label id. Neighbor ties at the
// k-th similarity are broken by smaller training-row index.
class KnnModel {
 public:
  KnnModel() = default;
  KnnModel(int k, SparseMatrix train, std::vector<std::int32_t> labels);
  KnnModel(int k, DenseMatrix train, std::vector<std::int32_t> labels);

  int k() const { return k_; }
  std::size_t train_size() const { return labels_.size(); }
  std::int32_t n_classes() const { return n_classes_; }
  const std::vector<std::int32_t>& labels() const { return labels_; }
  bool is_sparse() const { return std::holds_alternative<SparseMatrix>(train_); }
  const SparseMatrix& sparse_train() const { return std::get<SparseMatrix>(train_); }
  const DenseMatrix& dense_train() const { return std::get<DenseMatrix>(train_); }

 private:
  friend Prediction knn_predict(const KnnModel&, const SparseMatrix&, int);
  friend Prediction knn_predict(const KnnModel&, const DenseMatrix&, int);

  int k_ = 1;
  std::int32_t n_classes_ = 0;
  std::variant<SparseMatrix, DenseMatrix> train_;
  std::vector<std::int32_t> labels_;
  std::vector<double> train_norms_;
  // inverted index over the sparse training matrix (CSC) for scoring
  std::vector<std::uint64_t> csc_offsets_;
  std::vector<std::uint32_t> csc_rows_;
  std::vector<double> csc_vals_;
};

KnnModel knn_fit(const SparseMatrix& train, std::span<const std::int32_t> labels, int k);
KnnModel knn_fit(const DenseMatrix& train, std::span<const std::int32_t> labels, int k);
Prediction knn_predict(const KnnModel& model, const SparseMatrix& test, int threads = 1);
Prediction knn_predict(const KnnModel& model, const DenseMatrix& test, int threads = 1);

enum class LinearKind { logistic, svm };
const char* to_string(LinearKind kind);

struct LinearOptions {
  double lambda = 1.0;
  bool class_weighting = false;
  int max_epochs = 0;  // 0: per-kind default (logistic 500, svm 400)
  double tol = 1e-7;   // logistic: gradient-norm factor; svm: duality-gap factor
  std::uint64_t seed = 1;
  int threads = 1;
};

// Per-class solver diagnostics. `objective` is the quantity the solver
// provably decreases each epoch: the primal for logistic, the negative dual
// for the SVM.
struct SolverTrace {
  std::vector<double> objective;
  double primal_objective = 0.0;
  double duality_gap = 0.0;  // svm only
  int epochs = 0;
  bool converged = false;
  bool non_monotone = false;
};

struct LinearFitReport {
  std::vector<SolverTrace> per_class;
  bool converged = true;
  std::string note;
};

// One-vs-rest linear classifier: minimize per class
//   lambda/2 ||w_c||^2 + sum_i omega_i * loss(y_i (w_c . x_i + b_c))
// with unregularized bias; omega_i = class weight of sample i's true class
// when class_weighting is on, else 1.
class LinearModel {
 public:
  LinearModel() = default;
  LinearModel(LinearKind kind, std::int32_t n_classes, std::size_t n_features,
              double lambda);

  LinearKind kind() const { return kind_; }
  std::int32_t n_classes() const { return n_classes_; }
  std::size_t n_features() const { return n_features_; }
  double lambda() const { return lambda_; }

  std::span<const double> weights(std::int32_t c) const {
    return {w_.data() + static_cast<std::size_t>(c) * n_features_, n_features_};
  }
  std::span<double> weights(std::int32_t c) {
    return {w_.data() + static_cast<std::size_t>(c) * n_features_, n_features_};
  }
  double bias(std::int32_t c) const { return bias_[c]; }
  double& bias(std::int32_t c) { return bias_[c]; }
  std::span<const double> class_weights() const { return class_weights_; }
  std::vector<double>& mutable_class_weights() { return class_weights_; }

  void dump_weights(std::ostream& out, std::span<const std::string> class_names) const;

 private:
  LinearKind kind_ = LinearKind::logistic;
  std::int32_t n_classes_ = 0;
  std::size_t n_features_ = 0;
  double lambda_ = 1.0;
  std::vector<double> w_;  // n_classes x n_features
  std::vector<double> bias_;
  std::vector<double> class_weights_;
};

LinearModel linear_fit(const SparseMatrix& train, std::span<const std::int32_t> labels,
                       LinearKind kind, const LinearOptions& opts = {},
                       LinearFitReport* report = nullptr);
LinearModel linear_fit(const DenseMatrix& train, std::span<const std::int32_t> labels,
                       LinearKind kind, const LinearOptions& opts = {},
                       LinearFitReport* report = nullptr);
Prediction linear_predict(const LinearModel& model, const SparseMatrix& test,
                          int threads = 1);
Prediction linear_predict(const LinearModel& model, const DenseMatrix& test,
                          int threads = 1);

// (sum_i n_i) / n_c over the classes present; absent classes get weight 0.
std::vector<double> inverse_frequency_class_weights(std::span<const std::int32_t> labels,
                                                    std::int32_t n_classes);

// Regularized weighted logistic objective and gradient at (w, b); exposed for
// the finite-difference check.
double logistic_objective(const SparseMatrix& x, std::span<const std::int8_t> y,
                          std::span<const double> sample_weights, double lambda,
                          std::span<const double> w, double b,
                          std::span<double> grad_w, double* grad_b);

}  // namespace tq
