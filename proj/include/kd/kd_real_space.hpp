// The real-KD subspace V of a frame: all hermitian F whose KD symbol is
// entrywise real.  V is the kernel of the real-linear map F -> Im Q(F),
// assembled here as a d^2 x d^2 real matrix over a fixed hermitian operator
// basis.  Its dimension always lies between 2d-1 (the span of the 2d basis
// projectors, which share one resolution of identity) and d^2; the scan
// driver samples Haar-random frames to probe where between those bounds
// generic frames land.

#pragma once

#include <string>
#include <vector>

#include "kd/common.hpp"
#include "kd/kd_core.hpp"

namespace kd {

// Fixed hermitian operator basis of the d x d hermitian matrices, in this
// order: d diagonal projectors E_kk, then (k < j, lexicographic) the
// symmetric pairs E_kj + E_jk, then the antisymmetric pairs i(E_kj - E_jk).
CMat hermitian_basis_element(int d, int alpha);

// Coordinates of a hermitian matrix in the Hilbert-Schmidt orthonormal
// scaling of that basis (diagonal entries, then sqrt(2) Re F_kj, then
// sqrt(2) Im F_kj); inner products of coordinate vectors equal Tr(F G).
RVec hs_coordinates(const CMat& f);
CMat from_hs_coordinates(int d, const RVec& x);

struct ImQMap {
  RMat t;                     // d^2 x d^2, column alpha = vec Im Q(E_alpha)
  int rank = 0;               // numerical rank of t
  int dim_kernel = 0;         // d^2 - rank
  std::vector<CMat> kernel;   // HS-orthonormal hermitian basis of the kernel
};

ImQMap assemble_im_q(const TransitionMatrix& tm, const TolerancePolicy& tol = {});

// dim V = d^2 - rank(Im Q map).
int kd_real_dimension(const TransitionMatrix& tm, const TolerancePolicy& tol = {});

// True when dim V hits the lower bound 2d-1, which for zero-free frames is
// equivalent to the KD-positive states forming the convex hull of the basis
// states.  Requires a zero-free frame.
bool is_minimal_polytope(const TransitionMatrix& tm, const TolerancePolicy& tol = {});

// Orthogonal projector onto the span of HS-orthonormal hermitian operators,
// as a d^2 x d^2 matrix in HS coordinates.
RMat subspace_projector(int d, const std::vector<CMat>& ops);

struct StructureReport {
  int dim_expected = 0;
  int dim_kernel = 0;
  double projector_residual = 0.0;  // max |P_kernel - P_structure|
  double constraint_residual = 0.0; // worst structural-equation violation
  bool match = false;
};

// For the discrete Fourier frame of prime dimension p, V is exactly the
// hermitian matrices that are constant along each cyclic off-diagonal
// (F_{i, i+k} = F_{i-k, i} for all i, k mod p), of dimension 2p-1.
StructureReport verify_dft_kernel_structure(const TransitionMatrix& tm,
                                            const TolerancePolicy& tol = {});

// For real zero-free frames, V is exactly the real symmetric matrices,
// of dimension d(d+1)/2.
StructureReport verify_real_symmetric_structure(const TransitionMatrix& tm,
                                                const TolerancePolicy& tol = {});

// ---- randomized frame scan -------------------------------------------------

enum class ScanMode { serial, openmp };

struct ScanRow {
  int d = 0;
  int sample = 0;
  std::uint64_t seed = 0;  // derived per-sample seed, reproducible
  int rank_imq = 0;
  int dim_vkdr = 0;
  bool is_minimal = false;
  bool zero_free = false;
};

// Haar-random frames for each dimension in dims (each in [2, 16]); sample s
// of dimension d uses seed derive_seed(base_seed, d, s), so rows do not
// depend on scheduling.  Rows are ordered by (position of d in dims, sample).
std::vector<ScanRow> conjecture_scan(const std::vector<int>& dims, int samples,
                                     std::uint64_t base_seed, ScanMode mode = ScanMode::openmp,
                                     const TolerancePolicy& tol = {});

// CSV with header d,sample,seed,rank_imq,dim_vkdr,is_minimal.
std::string scan_csv(const std::vector<ScanRow>& rows);

}  // namespace kd
