// Convex geometry of the KD-positive states of a frame: membership in the
// convex hull of the two bases, the distinguished direction orthogonal to
// that hull for real d=3 frames, one-dimensional sections of the KD-positive
// body along that direction, enumeration of pure KD-positive states in d=3,
// separating-functional certificates for states beyond the pure hull, the
// hexagonal top facet of the u_star body, and the support-size law for
// mutually unbiased frames.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kd/common.hpp"
#include "kd/kd_core.hpp"
#include "kd/kd_real_space.hpp"

namespace kd {

// rho = sum_i lambda_i |a_i><a_i| + sum_j mu_j |b_j><b_j|, all weights
// nonnegative, total weight 1.  The representation has a one-dimensional
// gauge freedom (shifting weight between the two resolutions of identity).
struct HullDecomposition {
  RVec lambda;
  RVec mu;
};

// Returns a decomposition iff rho is KD-positive and the KD symbol satisfies
// the anchored quadruple conditions
//   Q_ij/|u_ij|^2 + Q_11/|u_11|^2 = Q_i1/|u_i1|^2 + Q_1j/|u_1j|^2,
// which for zero-free frames characterizes membership in the hull of the
// basis states.  Mutually unbiased frames use the same conditions with the
// weights dropped (they are all equal).  Requires a zero-free frame and a
// valid density matrix.
std::optional<HullDecomposition> hull_membership(const TransitionMatrix& tm, const CMat& rho,
                                                 const TolerancePolicy& tol = {});

// Whether rho lies in the interior of the hull: some gauge shift of its
// decomposition makes every weight strictly positive (> eps_pos).  Throws
// not_in_hull when hull_membership fails.
bool interior_membership(const TransitionMatrix& tm, const CMat& rho,
                         const TolerancePolicy& tol = {});

// For real zero-free d=3 frames: the unique (up to sign) hermitian direction
// orthogonal, in Hilbert-Schmidt sense, to the span of all basis projectors,
// normalized to unit HS norm with its first nonzero upper off-diagonal entry
// positive.  Real symmetric with zero diagonal.  Throws degenerate_solution
// if the orthogonal direction is not one-dimensional.
CMat f_perp(const TransitionMatrix& tm, const TolerancePolicy& tol = {});

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool empty = false;
};

// {x : sigma + x f_perp is a KD-positive state} for a trace-one hermitian
// sigma in the span of the basis projectors (verified by least squares,
// residual <= 1e-8).  Intersection of the nine KD linear constraints with
// the PSD interval found by bisection on the smallest eigenvalue; endpoint
// accuracy 1e-9.
Interval x_interval(const TransitionMatrix& tm, const CMat& sigma,
                    const TolerancePolicy& tol = {});

struct XMaxResult {
  double x_max = 0.0;
  CMat sigma;  // argmax
};

// Largest upper endpoint of x_interval over sampled sigma in the trace-one
// slice of the projector span: the barycenter (always probed first), the 2d
// vertices, and grid*grid seeded random convex combinations.  A later sample
// replaces the incumbent only when it improves it by more than 1e-12.
XMaxResult x_max_search(const TransitionMatrix& tm, int grid, std::uint64_t seed,
                        const TolerancePolicy& tol = {});

struct PureState {
  CVec psi;
  int n_a = 0;  // A-basis support size, #{ i : |psi_i| > sqrt(eps_pos) }
  int n_b = 0;  // B-basis support size
  bool is_basis = false;
};

// All pure KD-positive states of a zero-free d=3 frame: the 6 basis states
// plus, for every pair i < k and column j, the state in span{a_i, a_k}
// orthogonal to b_j,  psi ~ <b_j|a_k> |a_i> - <b_j|a_i> |a_k>,  kept when its
// KD symbol is positive.  Duplicates are merged by projector comparison.
std::vector<PureState> enumerate_pure_kd_positive_d3(const TransitionMatrix& tm,
                                                     const TolerancePolicy& tol = {});

struct Certificate {
  double s = 0.0;  // Tr(rho f_perp)
  double h = 0.0;  // max Tr(P f_perp) over pure KD-positive states
  CMat f;          // the separating direction f_perp
};

// Produces a certificate that the KD-positive state rho lies outside the
// convex hull of the pure KD-positive states: the linear functional
// Tr(. f_perp) exceeds on rho its maximum h over all pure KD-positive
// states.  Returns nullopt when s <= h + eps_eq (inconclusive).  Throws
// not_kd_positive when rho is not KD-positive.
std::optional<Certificate> beyond_pure_hull_certificate(const TransitionMatrix& tm,
                                                        const CMat& rho,
                                                        const TolerancePolicy& tol = {});

struct SectionRow {
  double k = 0.0;
  Interval xi;
};

// x_interval along the segment sigma(k) = k anchor1 + (1-k) anchor2 for
// `steps` uniform k values in [0, 1] (endpoints included).
std::vector<SectionRow> section_scan(const TransitionMatrix& tm, const CMat& anchor1,
                                     const CMat& anchor2, int steps,
                                     const TolerancePolicy& tol = {},
                                     ScanMode mode = ScanMode::openmp);

// CSV with header k,x_lo,x_hi,empty (12 significant digits).
std::string section_csv(const std::vector<SectionRow>& rows);

struct HexagonCheck {
  int extremes_ok = 0;       // of 6: KD-positive, PSD, Tr(rho f_perp) = x_max
  int probes_rejected = 0;   // of 6: the 1.01-scaled probes fail KD or PSD
  double max_trace_err = 0.0;
  double worst_min_eigenvalue = 0.0;  // over the six extreme states
  bool pass = false;
};

// The top facet of the u_star KD-positive body at height x_max = 1/(2 sqrt 6)
// is a hexagon in the (lambda1, lambda2) coordinates of
//   rho = I/3 + x_max f_perp + lambda1 (P_a1 - P_b1) + lambda2 (P_a2 - P_b2),
// cut out by |lambda1| <= 3/8, |lambda2| <= 3/8, |lambda1 - lambda2| <= 3/8.
// Verifies the six extreme points and rejects their 1.01-scaled versions.
// Requires the exact u_star frame.
HexagonCheck y_plus_hexagon_check(const TransitionMatrix& tm, const TolerancePolicy& tol = {});

// Hexagon/ellipse data for the facet: the six extreme points, the hexagon
// boundary, and the boundary of the PSD ellipse
// lambda1^2 + lambda2^2 - lambda1 lambda2 = 9/64.
std::string hexagon_figure_csv(int steps);

struct MubLawReport {
  int candidates = 0;            // two-support candidates examined
  int candidate_positive = 0;    // of those, KD-positive
  int non_basis_positive = 0;    // KD-positive candidates that are not basis states
  bool law_holds = true;         // every positive state found has n_a * n_b = d
  int sampled = 0;               // Haar-random pure states classified
  int sampled_non_basis_positive = 0;
  std::vector<PureState> found;  // KD-positive states found (basis + candidates)
};

// Support-size law for mutually unbiased frames (all |u_ij| = 1/sqrt(d)):
// a pure state can only be KD-positive when n_a * n_b = d.  Examines the
// basis states, all two-support candidates (as in the d=3 enumeration), and
// `samples` Haar-random pure states with per-index seeds.
MubLawReport mub_support_law_check(const TransitionMatrix& tm, int samples, std::uint64_t seed,
                                   const TolerancePolicy& tol = {},
                                   ScanMode mode = ScanMode::openmp);

}  // namespace kd
