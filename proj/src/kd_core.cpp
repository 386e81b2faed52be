#include "kd/kd_core.hpp"

#include "kd/linalg.hpp"

namespace kd {

TransitionMatrix make_transition(const CMat& u, const TolerancePolicy& tol) {
  require_square(u, "make_transition");
  if (!all_finite(u)) fail(Err::bad_input, "make_transition: non-finite entries");
  const int d = static_cast<int>(u.rows());
  if (max_abs(CMat(u.adjoint() * u - CMat::Identity(d, d))) > 1e-10)
    fail(Err::not_unitary, "make_transition: matrix is not unitary within 1e-10");
  TransitionMatrix tm;
  tm.u = u;
  tm.dim = d;
  RMat amp = u.cwiseAbs();
  tm.m_ab = amp.minCoeff();
  tm.M_ab = amp.maxCoeff();
  tm.zero_free = tm.m_ab > tol.eps_pos;
  return tm;
}

CMat kd_distribution(const TransitionMatrix& tm, const CMat& f, const TolerancePolicy& tol) {
  require_hermitian(f, tol.eps_eq, "kd_distribution");
  if (f.rows() != tm.dim) fail(Err::dim_mismatch, "kd_distribution: operator dim != basis dim");
  return CMat((f * tm.u).cwiseProduct(tm.u.conjugate()));
}

PositivityReport classify(const TransitionMatrix& tm, const CMat& f, const TolerancePolicy& tol) {
  CMat q = kd_distribution(tm, f, tol);
  PositivityReport rep;
  rep.max_abs_imag = max_abs(RMat(q.imag()));
  rep.min_real_part = q.real().minCoeff();
  rep.is_kd_real = rep.max_abs_imag <= tol.eps_pos;
  rep.is_kd_positive = rep.is_kd_real && rep.min_real_part >= -tol.eps_pos;
  for (int i = 0; i < tm.dim; ++i)
    if (f(i, i).real() > tol.eps_pos) ++rep.support_a;
  CMat fb = tm.u.adjoint() * f * tm.u;
  for (int j = 0; j < tm.dim; ++j)
    if (fb(j, j).real() > tol.eps_pos) ++rep.support_b;
  return rep;
}

CMat reconstruct(const TransitionMatrix& tm, const CMat& q, const TolerancePolicy& tol) {
  if (q.rows() != tm.dim || q.cols() != tm.dim)
    fail(Err::dim_mismatch, "reconstruct: table dim != basis dim");
  if (!tm.zero_free)
    fail(Err::zero_overlap, "reconstruct: transition matrix has (near-)zero overlaps");
  (void)tol;
  const int d = tm.dim;
  CMat f(d, d);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) {
      Cx s = 0.0;
      for (int j = 0; j < d; ++j) s += q(i, j) * std::conj(tm.u(k, j)) / std::conj(tm.u(i, j));
      f(i, k) = s;
    }
  return f;
}

double overlap_trace(const TransitionMatrix& tm, const CMat& f, const CMat& g,
                     const TolerancePolicy& tol) {
  if (!tm.zero_free)
    fail(Err::zero_overlap, "overlap_trace: transition matrix has (near-)zero overlaps");
  CMat qf = kd_distribution(tm, f, tol);
  CMat qg = kd_distribution(tm, g, tol);
  Cx s = qf.cwiseProduct(qg.conjugate()).cwiseQuotient(tm.u.cwiseAbs2()).sum();
  return s.real();
}

void require_density(const CMat& rho, const TolerancePolicy& tol, const char* who) {
  require_hermitian(rho, tol.eps_eq, who);
  if (std::abs(rho.trace().real() - 1.0) > 1e-8 || std::abs(rho.trace().imag()) > 1e-8)
    fail(Err::bad_input, std::string(who) + ": trace must be 1");
  Eigen::SelfAdjointEigenSolver<CMat> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol.eps_pos)
    fail(Err::bad_input, std::string(who) + ": matrix is not positive semidefinite");
}

bool is_prime(int n) {
  if (n < 2) return false;
  for (int k = 2; k * k <= n; ++k)
    if (n % k == 0) return false;
  return true;
}

CMat transform_frame(const CMat& u, const RVec& phi, const RVec& psi,
                     const std::vector<int>& perm_a, const std::vector<int>& perm_b) {
  const int d = static_cast<int>(u.rows());
  CMat v(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const int ia = perm_a[i], jb = perm_b[j];
      v(i, j) = std::exp(Cx(0, phi(ia))) * u(ia, jb) * std::exp(Cx(0, -psi(jb)));
    }
  return v;
}

CMat transform_operator(const CMat& f, const RVec& phi, const std::vector<int>& perm_a) {
  const int d = static_cast<int>(f.rows());
  CMat g(d, d);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) {
      const int ia = perm_a[i], ka = perm_a[k];
      g(i, k) = std::exp(Cx(0, phi(ia))) * f(ia, ka) * std::exp(Cx(0, -phi(ka)));
    }
  return g;
}

}  // namespace kd
