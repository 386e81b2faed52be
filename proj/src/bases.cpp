#include "kd/bases.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "kd/linalg.hpp"

namespace kd {

CMat dft(int d) {
  if (d < 2 || d > MAX_DIM) fail(Err::wrong_dimension, "dft: dimension must be in [2, 16]");
  CMat u(d, d);
  const double s = 1.0 / std::sqrt(static_cast<double>(d));
  for (int k = 0; k < d; ++k)
    for (int l = 0; l < d; ++l) {
      const double ang = -2.0 * PI * static_cast<double>(k) * static_cast<double>(l) / d;
      u(k, l) = s * Cx(std::cos(ang), std::sin(ang));
    }
  return u;
}

CMat u_star() {
  CMat u(3, 3);
  u << -1, 2, 2, 2, -1, 2, 2, 2, -1;
  return u / 3.0;
}

CMat haar_random(int d, std::uint64_t seed) {
  if (d < 2 || d > MAX_DIM) fail(Err::wrong_dimension, "haar_random: dimension must be in [2, 16]");
  std::mt19937_64 rng = rng_from_seed(seed);
  CMat g = ginibre(d, rng);
  Eigen::HouseholderQR<CMat> qr(g);
  CMat q = qr.householderQ();
  CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < d; ++j) {
    const Cx rjj = r(j, j);
    const double a = std::abs(rjj);
    q.col(j) *= (a > 0.0) ? rjj / a : Cx(1.0, 0.0);
  }
  return q;
}

SpinFrame make_spin_frame(double s, double beta) {
  const double two_s = 2.0 * s;
  if (std::abs(two_s - std::round(two_s)) > 1e-9 || two_s < 1.0 - 1e-9 || two_s > 5.0 + 1e-9)
    fail(Err::wrong_dimension, "make_spin_frame: s must be a half-integer in [1/2, 5/2]");
  if (!(beta >= 0.0 && beta <= PI))
    fail(Err::bad_input, "make_spin_frame: beta must lie in [0, pi]");
  return {std::round(two_s) / 2.0, beta};
}

CMat wigner_small_d(const SpinFrame& frame) {
  const double s = frame.s;
  const int d = static_cast<int>(std::lround(2.0 * s)) + 1;
  // J_y from the ladder operators in the descending-m basis: row index i
  // carries m_i = s - i, and <m+1| J+ |m> = sqrt(s(s+1) - m(m+1)).
  CMat jy = CMat::Zero(d, d);
  for (int i = 1; i < d; ++i) {
    const double m = s - i;  // J+ raises m to m+1, i.e. row i-1
    const double c = std::sqrt(s * (s + 1.0) - m * (m + 1.0));
    jy(i - 1, i) = Cx(0.0, -0.5) * c;
    jy(i, i - 1) = Cx(0.0, +0.5) * c;
  }
  Eigen::SelfAdjointEigenSolver<CMat> es(jy);
  CVec phases(d);
  for (int k = 0; k < d; ++k) {
    const double lam = es.eigenvalues()(k);
    phases(k) = Cx(std::cos(-frame.beta * lam), std::sin(-frame.beta * lam));
  }
  CMat u = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
  if (max_abs(RMat(u.imag())) > 1e-10)
    fail(Err::degenerate_solution, "wigner_small_d: rotation matrix failed to come out real");
  return u.real().cast<Cx>();
}

CMat sylvester_hadamard_mub(int m) {
  if (m < 1 || m > 4) fail(Err::wrong_dimension, "sylvester_hadamard_mub: m must be in [1, 4]");
  RMat h(2, 2);
  h << 1, 1, 1, -1;
  RMat acc = h;
  for (int k = 1; k < m; ++k) {
    RMat next(acc.rows() * 2, acc.cols() * 2);
    next << acc, acc, acc, -acc;
    acc = next;
  }
  const int d = 1 << m;
  return (acc / std::sqrt(static_cast<double>(d))).cast<Cx>();
}

PhaseProfile phase_profile(const CMat& u) {
  PhaseProfile p;
  p.amplitudes = u.cwiseAbs();
  p.phases.resize(u.rows(), u.cols());
  for (Eigen::Index i = 0; i < u.rows(); ++i)
    for (Eigen::Index j = 0; j < u.cols(); ++j) p.phases(i, j) = std::arg(u(i, j));
  return p;
}

namespace {

void require_zero_free(const CMat& u, const TolerancePolicy& tol, const char* who) {
  if (u.cwiseAbs2().minCoeff() <= tol.eps_pos)
    fail(Err::zero_overlap, std::string(who) + ": matrix must be zero-free");
}

// Distance from x to the nearest integer multiple of m > 0.
double dist_to_multiple(double x, double m) {
  return std::abs(x - m * std::round(x / m));
}

std::vector<std::vector<int>> all_permutations(int d) {
  std::vector<int> p(d);
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

}  // namespace

CMat equivalence_normalize(const CMat& u, const TolerancePolicy& tol) {
  require_square(u, "equivalence_normalize");
  require_zero_free(u, tol, "equivalence_normalize");
  const int d = static_cast<int>(u.rows());
  CMat v = u;
  for (int j = 0; j < d; ++j) {
    const Cx z = v(0, j);
    v.col(j) *= std::conj(z) / std::abs(z);
  }
  for (int i = 1; i < d; ++i) {
    const Cx z = v(i, 0);
    v.row(i) *= std::conj(z) / std::abs(z);
  }
  return v;
}

std::optional<std::pair<std::vector<int>, std::vector<int>>> equivalent_frames(
    const CMat& u1, const CMat& u2, const TolerancePolicy& tol) {
  require_square(u1, "equivalent_frames");
  require_square(u2, "equivalent_frames");
  if (u1.rows() != u2.rows()) return std::nullopt;
  const int d = static_cast<int>(u1.rows());
  if (d > 5) fail(Err::wrong_dimension, "equivalent_frames: exhaustive search capped at d = 5");
  require_zero_free(u1, tol, "equivalent_frames");
  require_zero_free(u2, tol, "equivalent_frames");
  const CMat target = equivalence_normalize(u2, tol);
  const auto perms = all_permutations(d);
  CMat v(d, d);
  for (const auto& pr : perms)
    for (const auto& pc : perms) {
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) v(i, j) = u1(pr[i], pc[j]);
      if (max_abs(CMat(equivalence_normalize(v, tol) - target)) <= 1e-9)
        return std::make_pair(pr, pc);
    }
  return std::nullopt;
}

bool check_phase_genericity(const CMat& u, const TolerancePolicy& tol) {
  require_square(u, "check_phase_genericity");
  require_zero_free(u, tol, "check_phase_genericity");
  const int d = static_cast<int>(u.rows());
  const RMat phi = phase_profile(u).phases;
  for (int k = 0; k < d; ++k)
    for (int kk = k + 1; kk < d; ++kk)
      for (int j = 0; j < d; ++j)
        for (int jj = j + 1; jj < d; ++jj) {
          const double delta = phi(k, j) - phi(kk, j) - phi(k, jj) + phi(kk, jj);
          if (dist_to_multiple(delta, 2.0 * PI) <= tol.eps_eq) return false;
        }
  return true;
}

bool check_d3_genericity(const CMat& u, const TolerancePolicy& tol) {
  require_square(u, "check_d3_genericity");
  if (u.rows() != 3) fail(Err::wrong_dimension, "check_d3_genericity: requires d = 3");
  require_zero_free(u, tol, "check_d3_genericity");
  const RMat phi = phase_profile(u).phases;
  const double d10 = phi(1, 0) - phi(0, 0);
  const double d11 = phi(1, 1) - phi(0, 1);
  const double d20 = phi(2, 0) - phi(0, 0);
  const double d21 = phi(2, 1) - phi(0, 1);
  const double quarter = PI / 2.0;
  const double eps = tol.eps_eq;
  return dist_to_multiple(d10, quarter) > eps && dist_to_multiple(d11, quarter) > eps &&
         dist_to_multiple(d20, quarter) > eps && dist_to_multiple(d21, quarter) > eps &&
         dist_to_multiple(d10 - d11, PI) > eps && dist_to_multiple(d20 - d21, PI) > eps;
}

CMat perturb_columns(const CMat& u, double theta, const TolerancePolicy& tol) {
  require_square(u, "perturb_columns");
  if (u.cols() < 2) fail(Err::wrong_dimension, "perturb_columns: need at least two columns");
  CMat v = u;
  v(0, 0) *= Cx(std::cos(theta), std::sin(theta));
  v(0, 1) *= Cx(std::cos(theta), -std::sin(theta));
  return gram_schmidt_completion(v, tol);
}

}  // namespace kd
