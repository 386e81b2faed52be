// Dense linear-algebra layer: hermitian eigendecomposition, relative-cutoff
// numerical rank, kernel extraction and Gram-Schmidt completion of a partial
// orthonormal column set.  Thin validated wrappers over Eigen solvers.

#pragma once

#include <vector>

#include "kd/common.hpp"

namespace kd {

struct EigenDecomposition {
  RVec values;   // ascending
  CMat vectors;  // unitary, column k pairs with values(k)
};

// Eigendecomposition of a hermitian matrix.  Residual contract:
// max|m v_k - lambda_k v_k| <= 1e-10 * max|m| * dim.
EigenDecomposition hermitian_eigen(const CMat& m, const TolerancePolicy& tol = {});

// Number of singular values above eps_rank * sigma_max * max(rows, cols).
// The zero matrix has rank 0.
int numerical_rank(const CMat& m, const TolerancePolicy& tol = {});
int numerical_rank(const RMat& m, const TolerancePolicy& tol = {});

// Orthonormal basis (columns) of the numerical kernel of a real matrix,
// taken from the right singular vectors whose singular values fall at or
// below the same relative cutoff used by numerical_rank.
RMat svd_kernel(const RMat& m, const TolerancePolicy& tol = {});

// Completes k orthonormal columns of dimension d (k <= d) to a d x d unitary
// whose first k columns equal the inputs.  Columns are processed in order
// with two-pass Gram-Schmidt; the completion picks, at each step, the
// standard basis vector with the largest residual, which makes the result
// deterministic.  Throws dependent_columns when an input column collapses.
CMat gram_schmidt_completion(const CMat& cols, const TolerancePolicy& tol = {});

}  // namespace kd
