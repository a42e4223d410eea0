#include "core/lsa.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <string>

#include "core/error.hpp"
#include "core/rng.hpp"
#include "core/threading.hpp"

namespace tq {

SvdModel::SvdModel(std::uint32_t k, std::size_t width, std::vector<double> singular_values,
                   std::vector<double> basis_width_by_k)
    : k_(k), width_(width), sigma_(std::move(singular_values)), basis_(std::move(basis_width_by_k)) {
  if (sigma_.size() != k_ || basis_.size() != width_ * k_)
    raise(Errc::internal, "SvdModel: inconsistent shapes");
}

std::vector<double> SvdModel::component(std::size_t i) const {
  std::vector<double> row(width_);
  for (std::size_t c = 0; c < width_; ++c) row[c] = basis_[c * k_ + i];
  return row;
}

namespace {

// y = A^T (A x) when term_side (dim = cols), else y = A (A^T x) (dim = rows).
struct GramOp {
  const SparseMatrix& a;
  bool term_side;
  mutable std::vector<double> scratch;

  std::size_t dim() const { return term_side ? a.cols() : a.rows(); }

  void apply(const double* x, double* y) const {
    if (term_side) {
      scratch.resize(a.rows());
      for (std::size_t r = 0; r < a.rows(); ++r) {
        auto cs = a.row_cols(r);
        auto vs = a.row_vals(r);
        double acc = 0.0;
        for (std::size_t e = 0; e < cs.size(); ++e) acc += vs[e] * x[cs[e]];
        scratch[r] = acc;
      }
      std::fill(y, y + a.cols(), 0.0);
      for (std::size_t r = 0; r < a.rows(); ++r) {
        double s = scratch[r];
        if (s == 0.0) continue;
        auto cs = a.row_cols(r);
        auto vs = a.row_vals(r);
        for (std::size_t e = 0; e < cs.size(); ++e) y[cs[e]] += vs[e] * s;
      }
    } else {
      scratch.assign(a.cols(), 0.0);
      for (std::size_t r = 0; r < a.rows(); ++r) {
        double xr = x[r];
        if (xr == 0.0) continue;
        auto cs = a.row_cols(r);
        auto vs = a.row_vals(r);
        for (std::size_t e = 0; e < cs.size(); ++e) scratch[cs[e]] += vs[e] * xr;
      }
      for (std::size_t r = 0; r < a.rows(); ++r) {
        auto cs = a.row_cols(r);
        auto vs = a.row_vals(r);
        double acc = 0.0;
        for (std::size_t e = 0; e < cs.size(); ++e) acc += vs[e] * scratch[cs[e]];
        y[r] = acc;
      }
    }
  }
};

double vec_dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double vec_norm(const double* a, std::size_t n) { return std::sqrt(vec_dot(a, a, n)); }

// Keeps each component row's largest-magnitude entry non-negative (smallest
// column wins magnitude ties) so refits are directly comparable.
void canonicalize_signs(std::vector<double>& basis, std::size_t width, std::uint32_t k) {
  for (std::uint32_t i = 0; i < k; ++i) {
    double best = 0.0;
    std::size_t best_col = 0;
    for (std::size_t c = 0; c < width; ++c) {
      double mag = std::fabs(basis[c * k + i]);
      if (mag > best) {
        best = mag;
        best_col = c;
      }
    }
    if (basis[best_col * k + i] < 0.0)
      for (std::size_t c = 0; c < width; ++c) basis[c * k + i] = -basis[c * k + i];
  }
}

SvdModel fit_svd_dense(const SparseMatrix& m, std::uint32_t k) {
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m.rows()),
                                                static_cast<Eigen::Index>(m.cols()));
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto cs = m.row_cols(r);
    auto vs = m.row_vals(r);
    for (std::size_t e = 0; e < cs.size(); ++e)
      dense(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(cs[e])) = vs[e];
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(dense, Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const auto& v = svd.matrixV();  // cols x min(rows, cols)

  std::vector<double> sigma(k);
  std::vector<double> basis(m.cols() * k, 0.0);
  for (std::uint32_t i = 0; i < k; ++i) {
    sigma[i] = sv(static_cast<Eigen::Index>(i));
    for (std::size_t c = 0; c < m.cols(); ++c)
      basis[c * k + i] = v(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(i));
  }
  canonicalize_signs(basis, m.cols(), k);
  return SvdModel(k, m.cols(), std::move(sigma), std::move(basis));
}

// Thick-restart Lanczos on the smaller Gram operator. Full
// reorthogonalization keeps the basis orthonormal; residual of a Ritz pair is
// |beta_m * last component of its eigenvector|.
SvdModel fit_svd_lanczos(const SparseMatrix& m, std::uint32_t k, const SvdOptions& opts) {
  const bool term_side = m.cols() <= m.rows();
  GramOp op{m, term_side, {}};
  const std::size_t d = op.dim();
  const std::size_t want = k;
  const std::size_t basis_cap = std::min<std::size_t>(d, std::max<std::size_t>(2 * want + 40, want + 20));

  Rng rng(opts.seed);
  std::vector<double> basis(basis_cap * d, 0.0);  // row j = vector v_j
  Eigen::MatrixXd t_mat = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(basis_cap),
                                                static_cast<Eigen::Index>(basis_cap));
  std::vector<double> w(d), next_v(d);

  auto basis_row = [&](std::size_t j) { return basis.data() + j * d; };

  auto random_unit_orthogonal = [&](std::size_t n_existing, double* out) {
    for (;;) {
      for (std::size_t i = 0; i < d; ++i) out[i] = rng.normal();
      for (int pass = 0; pass < 2; ++pass)
        for (std::size_t j = 0; j < n_existing; ++j) {
          double c = vec_dot(out, basis_row(j), d);
          const double* vj = basis_row(j);
          for (std::size_t i = 0; i < d; ++i) out[i] -= c * vj[i];
        }
      double nrm = vec_norm(out, d);
      if (nrm > 1e-12) {
        for (std::size_t i = 0; i < d; ++i) out[i] /= nrm;
        return;
      }
    }
  };

  std::size_t n_vecs = 1;  // vectors currently in the basis
  std::size_t lanczos_from = 0;
  std::size_t kept = 0;  // locked Ritz vectors after a restart
  random_unit_orthogonal(0, basis_row(0));

  std::vector<double> theta;      // current Ritz values (descending)
  Eigen::MatrixXd ritz_y;          // eigenvectors of T for the kept extraction
  double next_beta = 0.0;

  int restarts = 0;
  for (;; ++restarts) {
    if (restarts > opts.max_restarts) {
      raise(Errc::convergence_failure,
            "truncated SVD did not converge after " + std::to_string(restarts - 1) +
                " restart cycles");
    }
    // Extend the Lanczos basis up to basis_cap vectors.
    for (std::size_t j = lanczos_from; j < basis_cap; ++j) {
      op.apply(basis_row(j), w.data());
      if (j == kept && kept > 0) {
        // arrowhead couplings from the restart border
        for (std::size_t i = 0; i < kept; ++i) {
          double s = t_mat(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
          if (s != 0.0) {
            const double* ui = basis_row(i);
            for (std::size_t x = 0; x < d; ++x) w[x] -= s * ui[x];
          }
        }
      }
      double alpha = vec_dot(w.data(), basis_row(j), d);
      t_mat(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)) = alpha;
      // two-pass full reorthogonalization
      for (int pass = 0; pass < 2; ++pass)
        for (std::size_t i = 0; i <= j; ++i) {
          double c = vec_dot(w.data(), basis_row(i), d);
          const double* vi = basis_row(i);
          for (std::size_t x = 0; x < d; ++x) w[x] -= c * vi[x];
        }
      double beta = vec_norm(w.data(), d);
      if (j + 1 < basis_cap) {
        if (beta > 1e-300) {
          for (std::size_t x = 0; x < d; ++x) basis[(j + 1) * d + x] = w[x] / beta;
          t_mat(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j + 1)) = beta;
          t_mat(static_cast<Eigen::Index>(j + 1), static_cast<Eigen::Index>(j)) = beta;
        } else {
          // invariant subspace hit: continue with a fresh direction, coupling 0
          random_unit_orthogonal(j + 1, basis_row(j + 1));
          t_mat(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j + 1)) = 0.0;
          t_mat(static_cast<Eigen::Index>(j + 1), static_cast<Eigen::Index>(j)) = 0.0;
        }
        ++n_vecs;
      } else {
        next_beta = beta;
        if (beta > 1e-300)
          for (std::size_t x = 0; x < d; ++x) next_v[x] = w[x] / beta;
        else
          std::fill(next_v.begin(), next_v.end(), 0.0);
      }
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
        t_mat.topLeftCorner(static_cast<Eigen::Index>(basis_cap),
                            static_cast<Eigen::Index>(basis_cap)));
    if (eig.info() != Eigen::Success)
      raise(Errc::convergence_failure, "projected eigen-solve failed");

    // eigenvalues ascending -> take descending
    const auto& vals = eig.eigenvalues();
    const auto& vecs = eig.eigenvectors();
    theta.assign(basis_cap, 0.0);
    ritz_y.resize(static_cast<Eigen::Index>(basis_cap), static_cast<Eigen::Index>(basis_cap));
    for (std::size_t i = 0; i < basis_cap; ++i) {
      theta[i] = vals(static_cast<Eigen::Index>(basis_cap - 1 - i));
      ritz_y.col(static_cast<Eigen::Index>(i)) =
          vecs.col(static_cast<Eigen::Index>(basis_cap - 1 - i));
    }

    const double theta_scale = std::max(std::fabs(theta[0]), 1e-300);
    bool converged = true;
    for (std::size_t i = 0; i < want; ++i) {
      double res = std::fabs(next_beta * ritz_y(static_cast<Eigen::Index>(basis_cap - 1),
                                                static_cast<Eigen::Index>(i)));
      if (res > opts.tol * theta_scale) {
        converged = false;
        break;
      }
    }
    if (basis_cap == d) converged = true;  // full space: exact
    if (converged) break;

    // Thick restart: lock the top `keep` Ritz vectors plus the residual dir.
    std::size_t keep = std::min(basis_cap - 1, want + 20);
    std::vector<double> new_basis(basis_cap * d, 0.0);
    for (std::size_t i = 0; i < keep; ++i) {
      double* dst = new_basis.data() + i * d;
      for (std::size_t j = 0; j < basis_cap; ++j) {
        double y = ritz_y(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i));
        if (y == 0.0) continue;
        const double* vj = basis_row(j);
        for (std::size_t x = 0; x < d; ++x) dst[x] += y * vj[x];
      }
    }
    if (next_beta <= 1e-300) {
      basis.swap(new_basis);
      random_unit_orthogonal(keep, basis_row(keep));
    } else {
      std::copy(next_v.begin(), next_v.end(), new_basis.begin() + keep * d);
      basis.swap(new_basis);
    }
    t_mat.setZero();
    for (std::size_t i = 0; i < keep; ++i) {
      t_mat(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = theta[i];
      double s = next_beta * ritz_y(static_cast<Eigen::Index>(basis_cap - 1),
                                    static_cast<Eigen::Index>(i));
      t_mat(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(keep)) = s;
      t_mat(static_cast<Eigen::Index>(keep), static_cast<Eigen::Index>(i)) = s;
    }
    kept = keep;
    lanczos_from = keep;
    n_vecs = keep + 1;
  }
  (void)n_vecs;

  // Ritz vectors in the operator's space.
  std::vector<double> z(want * d, 0.0);
  for (std::size_t i = 0; i < want; ++i) {
    double* dst = z.data() + i * d;
    for (std::size_t j = 0; j < basis_cap; ++j) {
      double y = ritz_y(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i));
      if (y == 0.0) continue;
      const double* vj = basis_row(j);
      for (std::size_t x = 0; x < d; ++x) dst[x] += y * vj[x];
    }
  }

  std::vector<double> sigma(want);
  for (std::size_t i = 0; i < want; ++i) sigma[i] = std::sqrt(std::max(theta[i], 0.0));

  const std::size_t width = m.cols();
  std::vector<double> comp(want * width, 0.0);  // row i = component i
  if (term_side) {
    for (std::size_t i = 0; i < want; ++i)
      std::copy(z.begin() + i * d, z.begin() + (i + 1) * d, comp.begin() + i * width);
  } else {
    // v_i = A^T u_i / sigma_i; zero sigmas get a deterministic completion
    const double sigma_floor = sigma.empty() ? 0.0 : sigma[0] * 1e-14;
    for (std::size_t i = 0; i < want; ++i) {
      double* dst = comp.data() + i * width;
      if (sigma[i] > sigma_floor && sigma[i] > 0.0) {
        const double* u = z.data() + i * d;
        for (std::size_t r = 0; r < m.rows(); ++r) {
          double ur = u[r];
          if (ur == 0.0) continue;
          auto cs = m.row_cols(r);
          auto vs = m.row_vals(r);
          for (std::size_t e = 0; e < cs.size(); ++e) dst[cs[e]] += vs[e] * ur;
        }
        for (std::size_t c = 0; c < width; ++c) dst[c] /= sigma[i];
      } else {
        sigma[i] = 0.0;
        for (std::size_t c = 0; c < width; ++c) dst[c] = rng.normal();
      }
    }
    // polish: modified Gram-Schmidt across the k rows
    for (std::size_t i = 0; i < want; ++i) {
      double* vi = comp.data() + i * width;
      for (int pass = 0; pass < 2; ++pass)
        for (std::size_t j = 0; j < i; ++j) {
          const double* vj = comp.data() + j * width;
          double c = vec_dot(vi, vj, width);
          for (std::size_t x = 0; x < width; ++x) vi[x] -= c * vj[x];
        }
      double nrm = vec_norm(vi, width);
      if (nrm > 1e-300)
        for (std::size_t x = 0; x < width; ++x) vi[x] /= nrm;
    }
  }

  std::vector<double> basis_layout(width * want);
  for (std::size_t c = 0; c < width; ++c)
    for (std::size_t i = 0; i < want; ++i) basis_layout[c * want + i] = comp[i * width + c];
  canonicalize_signs(basis_layout, width, static_cast<std::uint32_t>(want));
  return SvdModel(static_cast<std::uint32_t>(want), width, std::move(sigma),
                  std::move(basis_layout));
}

}  // namespace

SvdModel fit_svd(const SparseMatrix& train, std::uint32_t k, const SvdOptions& opts) {
  const std::size_t max_rank = std::min(train.rows(), train.cols());
  if (k < 1 || k > max_rank) {
    raise(Errc::rank_too_large, "k=" + std::to_string(k) + " for a " +
                                    std::to_string(train.rows()) + "x" +
                                    std::to_string(train.cols()) + " matrix");
  }
  if (train.nnz() == 0) {
    // zero matrix: zero spectrum with the canonical coordinate basis
    std::vector<double> sigma(k, 0.0);
    std::vector<double> basis(train.cols() * k, 0.0);
    for (std::uint32_t i = 0; i < k; ++i) basis[static_cast<std::size_t>(i) * k + i] = 1.0;
    return SvdModel(k, train.cols(), std::move(sigma), std::move(basis));
  }
  if (!opts.force_iterative && train.rows() < opts.dense_cutoff &&
      train.cols() < opts.dense_cutoff) {
    return fit_svd_dense(train, k);
  }
  return fit_svd_lanczos(train, k, opts);
}

DenseMatrix project(const SvdModel& model, const SparseMatrix& docs, int threads) {
  if (docs.cols() != model.width()) {
    raise(Errc::dimension_mismatch,
          "matrix width " + std::to_string(docs.cols()) + " vs model width " +
              std::to_string(model.width()));
  }
  const std::uint32_t k = model.k();
  DenseMatrix out(docs.rows(), k);
  auto basis = model.basis();
  parallel_for(docs.rows(), threads, [&](std::size_t r) {
    auto cs = docs.row_cols(r);
    auto vs = docs.row_vals(r);
    auto dst = out.row(r);
    for (std::size_t e = 0; e < cs.size(); ++e) {
      const double wgt = vs[e];
      const double* brow = basis.data() + static_cast<std::size_t>(cs[e]) * k;
      for (std::uint32_t j = 0; j < k; ++j) dst[j] += wgt * brow[j];
    }
  });
  return out;
}

}  // namespace tq
