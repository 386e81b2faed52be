#include "kd/kd_real_space.hpp"

#include <cmath>
#include <sstream>

#include "kd/bases.hpp"
#include "kd/linalg.hpp"

namespace kd {

CMat hermitian_basis_element(int d, int alpha) {
  if (d < 1 || alpha < 0 || alpha >= d * d)
    fail(Err::bad_input, "hermitian_basis_element: index out of range");
  CMat e = CMat::Zero(d, d);
  if (alpha < d) {
    e(alpha, alpha) = 1.0;
    return e;
  }
  int idx = alpha - d;
  const int pairs = d * (d - 1) / 2;
  const bool symmetric = idx < pairs;
  if (!symmetric) idx -= pairs;
  for (int k = 0; k < d; ++k)
    for (int j = k + 1; j < d; ++j) {
      if (idx == 0) {
        if (symmetric) {
          e(k, j) = 1.0;
          e(j, k) = 1.0;
        } else {
          e(k, j) = Cx(0.0, 1.0);
          e(j, k) = Cx(0.0, -1.0);
        }
        return e;
      }
      --idx;
    }
  fail(Err::bad_input, "hermitian_basis_element: unreachable");
}

RVec hs_coordinates(const CMat& f) {
  const int d = static_cast<int>(f.rows());
  RVec x(d * d);
  int pos = 0;
  for (int i = 0; i < d; ++i) x(pos++) = f(i, i).real();
  const double r2 = std::sqrt(2.0);
  for (int k = 0; k < d; ++k)
    for (int j = k + 1; j < d; ++j) x(pos++) = r2 * f(k, j).real();
  for (int k = 0; k < d; ++k)
    for (int j = k + 1; j < d; ++j) x(pos++) = r2 * f(k, j).imag();
  return x;
}

CMat from_hs_coordinates(int d, const RVec& x) {
  CMat f = CMat::Zero(d, d);
  int pos = 0;
  for (int i = 0; i < d; ++i) f(i, i) = x(pos++);
  const double r2 = std::sqrt(2.0);
  for (int k = 0; k < d; ++k)
    for (int j = k + 1; j < d; ++j) {
      f(k, j) += x(pos) / r2;
      f(j, k) += x(pos) / r2;
      ++pos;
    }
  for (int k = 0; k < d; ++k)
    for (int j = k + 1; j < d; ++j) {
      f(k, j) += Cx(0.0, x(pos) / r2);
      f(j, k) += Cx(0.0, -x(pos) / r2);
      ++pos;
    }
  return f;
}

ImQMap assemble_im_q(const TransitionMatrix& tm, const TolerancePolicy& tol) {
  const int d = tm.dim;
  const int n = d * d;
  ImQMap map;
  map.t.resize(n, n);
  for (int alpha = 0; alpha < n; ++alpha) {
    CMat q = kd_distribution(tm, hermitian_basis_element(d, alpha), tol);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) map.t(i * d + j, alpha) = q(i, j).imag();
  }
  map.rank = numerical_rank(map.t, tol);
  map.dim_kernel = n - map.rank;

  // Kernel coefficient vectors are orthonormal in coefficient space but the
  // operator basis is not HS-orthonormal, so re-orthonormalize the operators.
  RMat knl = svd_kernel(map.t, tol);
  std::vector<RVec> accepted;
  for (int c = 0; c < knl.cols(); ++c) {
    CMat f = CMat::Zero(d, d);
    for (int alpha = 0; alpha < n; ++alpha)
      if (knl(alpha, c) != 0.0) f += knl(alpha, c) * hermitian_basis_element(d, alpha);
    RVec v = hs_coordinates(f);
    for (int pass = 0; pass < 2; ++pass)
      for (const RVec& w : accepted) v -= w.dot(v) * w;
    if (v.norm() < 1e-10) continue;  // numerically dependent, skip
    v /= v.norm();
    accepted.push_back(v);
    map.kernel.push_back(from_hs_coordinates(d, v));
  }
  return map;
}

int kd_real_dimension(const TransitionMatrix& tm, const TolerancePolicy& tol) {
  const int d = tm.dim;
  const int n = d * d;
  RMat t(n, n);
  for (int alpha = 0; alpha < n; ++alpha) {
    CMat q = kd_distribution(tm, hermitian_basis_element(d, alpha), tol);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) t(i * d + j, alpha) = q(i, j).imag();
  }
  return n - numerical_rank(t, tol);
}

bool is_minimal_polytope(const TransitionMatrix& tm, const TolerancePolicy& tol) {
  if (!tm.zero_free)
    fail(Err::zero_overlap, "is_minimal_polytope: frame must be zero-free");
  return kd_real_dimension(tm, tol) == 2 * tm.dim - 1;
}

RMat subspace_projector(int d, const std::vector<CMat>& ops) {
  const int n = d * d;
  RMat x(n, static_cast<int>(ops.size()));
  for (size_t c = 0; c < ops.size(); ++c) x.col(static_cast<int>(c)) = hs_coordinates(ops[c]);
  return x * x.transpose();
}

namespace {

// HS-orthonormalized structural basis handed in as raw hermitian matrices.
StructureReport compare_structure(const TransitionMatrix& tm, const ImQMap& map,
                                  std::vector<CMat> structure, double constraint_residual) {
  for (auto& f : structure) f /= std::sqrt(hs_coordinates(f).squaredNorm());
  StructureReport rep;
  rep.dim_expected = static_cast<int>(structure.size());
  rep.dim_kernel = map.dim_kernel;
  rep.constraint_residual = constraint_residual;
  RMat pk = subspace_projector(tm.dim, map.kernel);
  RMat ps = subspace_projector(tm.dim, structure);
  rep.projector_residual = max_abs(RMat(pk - ps));
  rep.match = rep.dim_expected == rep.dim_kernel && rep.projector_residual <= 1e-8 &&
              constraint_residual <= 1e-8;
  return rep;
}

}  // namespace

StructureReport verify_dft_kernel_structure(const TransitionMatrix& tm,
                                            const TolerancePolicy& tol) {
  const int p = tm.dim;
  if (!is_prime(p)) fail(Err::not_prime, "verify_dft_kernel_structure: dimension must be prime");
  if (max_abs(CMat(tm.u - dft(p))) > tol.eps_eq)
    fail(Err::not_dft, "verify_dft_kernel_structure: frame is not the Fourier matrix");

  ImQMap map = assemble_im_q(tm, tol);

  // Structural basis: free diagonal plus one complex constant per cyclic
  // off-diagonal pair (k, p-k).
  std::vector<CMat> structure;
  for (int i = 0; i < p; ++i) structure.push_back(hermitian_basis_element(p, i));
  for (int k = 1; 2 * k <= p; ++k) {
    CMat re = CMat::Zero(p, p), im = CMat::Zero(p, p);
    for (int i = 0; i < p; ++i) {
      const int j = (i + k) % p;
      re(i, j) += 1.0;
      re(j, i) += 1.0;
      im(i, j) += Cx(0.0, 1.0);
      im(j, i) += Cx(0.0, -1.0);
    }
    structure.push_back(re);
    if (max_abs(im) > 0.0) structure.push_back(im);  // k = p-k (p even) has no phase freedom
  }

  // Every kernel element must be constant along cyclic off-diagonals:
  // F_{i, i+k} = F_{i-k, i} for all (i, k).
  double worst = 0.0;
  for (const CMat& f : map.kernel)
    for (int i = 0; i < p; ++i)
      for (int k = 0; k < p; ++k) {
        const Cx lhs = f(i, (i + k) % p);
        const Cx rhs = f(((i - k) % p + p) % p, i);
        worst = std::max(worst, std::abs(lhs - rhs));
      }

  return compare_structure(tm, map, std::move(structure), worst);
}

StructureReport verify_real_symmetric_structure(const TransitionMatrix& tm,
                                                const TolerancePolicy& tol) {
  if (max_abs(RMat(tm.u.imag())) > tol.eps_eq)
    fail(Err::not_real, "verify_real_symmetric_structure: frame must be real");
  if (!tm.zero_free)
    fail(Err::zero_overlap, "verify_real_symmetric_structure: frame must be zero-free");
  const int d = tm.dim;

  ImQMap map = assemble_im_q(tm, tol);

  std::vector<CMat> structure;
  for (int alpha = 0; alpha < d + d * (d - 1) / 2; ++alpha)
    structure.push_back(hermitian_basis_element(d, alpha));

  double worst = 0.0;
  for (const CMat& f : map.kernel) {
    worst = std::max(worst, max_abs(RMat(f.imag())));
    worst = std::max(worst, max_abs(CMat(f - f.transpose())));
  }

  return compare_structure(tm, map, std::move(structure), worst);
}

namespace {

ScanRow scan_one(int d, int sample, std::uint64_t base_seed, const TolerancePolicy& tol) {
  ScanRow row;
  row.d = d;
  row.sample = sample;
  row.seed = derive_seed(base_seed, static_cast<std::uint64_t>(d),
                         static_cast<std::uint64_t>(sample));
  TransitionMatrix tm = make_transition(haar_random(d, row.seed), tol);
  row.zero_free = tm.zero_free;
  row.rank_imq = d * d - kd_real_dimension(tm, tol);
  row.dim_vkdr = d * d - row.rank_imq;
  row.is_minimal = tm.zero_free && row.dim_vkdr == 2 * d - 1;
  return row;
}

}  // namespace

std::vector<ScanRow> conjecture_scan(const std::vector<int>& dims, int samples,
                                     std::uint64_t base_seed, ScanMode mode,
                                     const TolerancePolicy& tol) {
  for (int d : dims)
    if (d < 2 || d > MAX_DIM)
      fail(Err::wrong_dimension, "conjecture_scan: dimensions must be in [2, 16]");
  if (samples < 0) fail(Err::bad_input, "conjecture_scan: samples must be >= 0");

  const int total = static_cast<int>(dims.size()) * samples;
  std::vector<ScanRow> rows(static_cast<size_t>(total));
  if (mode == ScanMode::openmp) {
#pragma omp parallel for schedule(dynamic)
    for (int idx = 0; idx < total; ++idx)
      rows[idx] = scan_one(dims[idx / samples], idx % samples, base_seed, tol);
  } else {
    for (int idx = 0; idx < total; ++idx)
      rows[idx] = scan_one(dims[idx / samples], idx % samples, base_seed, tol);
  }
  return rows;
}

std::string scan_csv(const std::vector<ScanRow>& rows) {
  std::ostringstream os;
  os << "d,sample,seed,rank_imq,dim_vkdr,is_minimal\n";
  for (const ScanRow& r : rows)
    os << r.d << ',' << r.sample << ',' << r.seed << ',' << r.rank_imq << ',' << r.dim_vkdr
       << ',' << (r.is_minimal ? "true" : "false") << '\n';
  return os.str();
}

}  // namespace kd
