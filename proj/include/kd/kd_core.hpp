// Kirkwood-Dirac machinery for a pair of orthonormal bases A and B related by
// a unitary transition matrix U (U_ij = <a_i|b_j>).  All operators are stored
// in the A basis.  The KD symbol of a hermitian operator F is
//
//   Q_ij(F) = <a_i|F|b_j><b_j|a_i>  =  (F U)_ij * conj(U_ij),
//
// a complex quasi-probability table whose row sums, column sums and total
// reproduce the diagonal of F in basis A, in basis B, and the trace.

#pragma once

#include <cstdlib>
#include <vector>

#include "kd/common.hpp"

namespace kd {

// Validated transition matrix with cached overlap extrema
//   m_ab = min_ij |u_ij|,  M_ab = max_ij |u_ij|.
// zero_free means m_ab exceeds eps_pos, i.e. no pair of basis vectors is
// orthogonal across the two bases.
struct TransitionMatrix {
  CMat u;
  int dim = 0;
  double m_ab = 0.0;
  double M_ab = 0.0;
  bool zero_free = false;
};

// Checks unitarity within 1e-10 (max-norm of u* u - I) and finiteness.
TransitionMatrix make_transition(const CMat& u, const TolerancePolicy& tol = {});

struct PositivityReport {
  bool is_kd_real = false;      // max |Im Q| <= eps_pos
  bool is_kd_positive = false;  // real and min Re Q >= -eps_pos
  double min_real_part = 0.0;
  double max_abs_imag = 0.0;
  int support_a = 0;  // #{ i : <a_i|F|a_i> > eps_pos }
  int support_b = 0;  // #{ j : <b_j|F|b_j> > eps_pos }
};

// KD symbol of hermitian f (A-basis matrix).
CMat kd_distribution(const TransitionMatrix& tm, const CMat& f, const TolerancePolicy& tol = {});

PositivityReport classify(const TransitionMatrix& tm, const CMat& f, const TolerancePolicy& tol = {});

// Inverts the KD symbol: <a_i|F|a_k> = sum_j Q_ij <b_j|a_k> / <b_j|a_i>.
// Requires a zero-free transition matrix.
CMat reconstruct(const TransitionMatrix& tm, const CMat& q, const TolerancePolicy& tol = {});

// Tr(F G) evaluated from the two KD symbols:
//   Tr(F G) = sum_ij Q_ij(F) conj(Q_ij(G)) / |u_ij|^2.
double overlap_trace(const TransitionMatrix& tm, const CMat& f, const CMat& g,
                     const TolerancePolicy& tol = {});

// Validation helpers shared across modules.
void require_density(const CMat& rho, const TolerancePolicy& tol, const char* who);
bool is_prime(int n);

// Frame symmetry: re-phase basis vectors by phi (A side) and psi (B side) and
// permute them.  perm_a[i] gives the index in the old A basis of the new i-th
// vector.  Returns the transition matrix of the transformed pair; operators
// follow with transform_operator using the same A-side data.
CMat transform_frame(const CMat& u, const RVec& phi, const RVec& psi,
                     const std::vector<int>& perm_a, const std::vector<int>& perm_b);
CMat transform_operator(const CMat& f, const RVec& phi, const std::vector<int>& perm_a);

// Projector onto the span of a unit vector.
inline CMat projector(const CVec& psi) { return psi * psi.adjoint(); }

}  // namespace kd
