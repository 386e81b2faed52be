#include "kd/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace kd {

EigenDecomposition hermitian_eigen(const CMat& m, const TolerancePolicy& tol) {
  require_hermitian(m, tol.eps_eq, "hermitian_eigen");
  Eigen::SelfAdjointEigenSolver<CMat> solver(m);
  if (solver.info() != Eigen::Success)
    fail(Err::degenerate_solution, "hermitian_eigen: solver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

namespace {

template <class Mat>
int rank_impl(const Mat& m, const TolerancePolicy& tol) {
  if (m.size() == 0) return 0;
  Eigen::BDCSVD<Mat> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  const double cutoff = tol.eps_rank * sv(0) * static_cast<double>(std::max(m.rows(), m.cols()));
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff) ++r;
  return r;
}

}  // namespace

int numerical_rank(const CMat& m, const TolerancePolicy& tol) { return rank_impl(m, tol); }
int numerical_rank(const RMat& m, const TolerancePolicy& tol) { return rank_impl(m, tol); }

RMat svd_kernel(const RMat& m, const TolerancePolicy& tol) {
  if (m.size() == 0) return RMat(0, 0);
  Eigen::BDCSVD<RMat> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() ? sv(0) : 0.0;
  const double cutoff = tol.eps_rank * smax * static_cast<double>(std::max(m.rows(), m.cols()));
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff) ++r;
  // Right singular vectors beyond the rank span the kernel.  sv only holds
  // min(rows, cols) values; any extra columns of V are kernel by definition.
  return svd.matrixV().rightCols(m.cols() - r);
}

CMat gram_schmidt_completion(const CMat& cols, const TolerancePolicy& tol) {
  const int d = static_cast<int>(cols.rows());
  const int k = static_cast<int>(cols.cols());
  if (d == 0 || k > d) fail(Err::dim_mismatch, "gram_schmidt_completion: need rows >= cols > 0");

  CMat q(d, d);
  int have = 0;
  auto push = [&](CVec v, bool is_input) {
    for (int pass = 0; pass < 2; ++pass)
      for (int j = 0; j < have; ++j) v -= q.col(j).dot(v) * q.col(j);
    const double n = v.norm();
    if (n < 1e-8) {
      if (is_input)
        fail(Err::dependent_columns, "gram_schmidt_completion: input columns are dependent");
      return false;
    }
    q.col(have++) = v / n;
    return true;
  };

  for (int j = 0; j < k; ++j) push(cols.col(j), true);

  while (have < d) {
    // Deterministic completion: take the standard basis vector whose residual
    // against the accepted columns is largest.
    int best = -1;
    double best_norm = -1.0;
    for (int e = 0; e < d; ++e) {
      CVec v = CVec::Unit(d, e);
      for (int j = 0; j < have; ++j) v -= q.col(j).dot(v) * q.col(j);
      if (v.norm() > best_norm) {
        best_norm = v.norm();
        best = e;
      }
    }
    push(CVec::Unit(d, best), false);
  }
  return q;
}

}  // namespace kd
