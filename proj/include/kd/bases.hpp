// Constructors for the transition matrices studied by the library (discrete
// Fourier, Haar-random, spin rotation matrices, the symmetric orthogonal
// 3x3 frame u_star, Sylvester-Hadamard MUBs), phase-profile genericity tests,
// canonicalization under the natural frame symmetries, and a one-parameter
// phase perturbation that breaks mutual unbiasedness while staying unitary.

#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "kd/common.hpp"

namespace kd {

inline constexpr int MAX_DIM = 16;

// u_kl = exp(-2 pi i (k-1)(l-1) / d) / sqrt(d), 2 <= d <= 16.
CMat dft(int d);

// (1/3) [[-1, 2, 2], [2, -1, 2], [2, 2, -1]]: symmetric, orthogonal, zero
// free, with overlap extrema m_ab = 1/3 and M_ab = 2/3.
CMat u_star();

// Haar-distributed unitary: QR of a complex Ginibre matrix with the phases
// of R's diagonal absorbed into Q.  Deterministic for a given seed.
CMat haar_random(int d, std::uint64_t seed);

// Spin-s frame: s is a half-integer (2s integral, 1 <= 2s <= 5) and
// beta in [0, pi] the rotation angle between the two spin axes.
struct SpinFrame {
  double s = 1.0;
  double beta = 0.0;
};
SpinFrame make_spin_frame(double s, double beta);

// Small Wigner d-matrix exp(-i beta J_y) in the J_z eigenbasis ordered by
// descending m = s .. -s.  Real orthogonal; entries are returned with their
// imaginary parts (all below 1e-10) stripped.
CMat wigner_small_d(const SpinFrame& frame);

// Hadamard transition matrix H_d / sqrt(d) of dimension d = 2^m, m in [1,4],
// built from the Sylvester doubling H_{2k} = H_2 (x) H_k.  Mutually unbiased:
// every overlap has modulus 1 / sqrt(d).
CMat sylvester_hadamard_mub(int m);

// Entrywise polar decomposition u_ij = A_ij exp(i Phi_ij).
struct PhaseProfile {
  RMat amplitudes;
  RMat phases;  // in (-pi, pi]
};
PhaseProfile phase_profile(const CMat& u);

// Canonical representative of u under independent re-phasings of the basis
// vectors: first row and first column made real positive.  Idempotent.
// Requires a zero-free matrix (phases at zeros are undefined).
CMat equivalence_normalize(const CMat& u, const TolerancePolicy& tol = {});

// Searches all row/column permutation pairs (d <= 5) for one making the
// canonical forms of u1 and u2 agree within 1e-9.  Returns the permutations
// found, or nullopt.  perm[i] is the row/column of u1 moved to slot i.
std::optional<std::pair<std::vector<int>, std::vector<int>>> equivalent_frames(
    const CMat& u1, const CMat& u2, const TolerancePolicy& tol = {});

// Phase genericity: no quadruple (k != k', j != j') satisfies
// Phi_kj - Phi_k'j = Phi_kj' - Phi_k'j'  (mod 2 pi) within margin eps_eq.
// When this holds, the only pure KD-positive states of the frame are the
// basis states themselves.
bool check_phase_genericity(const CMat& u, const TolerancePolicy& tol = {});

// The six d=3 phase conditions (differences of first- and second-column
// phases avoiding multiples of pi/2, and cross-column differences avoiding
// multiples of pi) under which the KD-positive states form the minimal
// polytope.  Requires d = 3 and zero-free u.
bool check_d3_genericity(const CMat& u, const TolerancePolicy& tol = {});

// Multiplies the first entry of column 1 by exp(+i theta) and the first
// entry of column 2 by exp(-i theta), then restores unitarity by
// Gram-Schmidt over the columns in order.  Continuous in theta with
// perturb_columns(u, 0) = u.
CMat perturb_columns(const CMat& u, double theta, const TolerancePolicy& tol = {});

}  // namespace kd
