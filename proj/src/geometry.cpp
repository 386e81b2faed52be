#include "kd/geometry.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "kd/bases.hpp"
#include "kd/linalg.hpp"

namespace kd {

namespace {

// Roundoff guard for boundary computations.  Deliberately much tighter than
// eps_pos: interval endpoints carry a 1e-9 accuracy contract, so the slack
// must not shift them measurably.
constexpr double BOUNDARY_SLACK = 1e-12;

bool is_mub(const TransitionMatrix& tm) {
  const double target = 1.0 / std::sqrt(static_cast<double>(tm.dim));
  return (tm.u.cwiseAbs().array() - target).abs().maxCoeff() <= 1e-9;
}

CMat basis_projector_a(int d, int i) {
  CMat p = CMat::Zero(d, d);
  p(i, i) = 1.0;
  return p;
}

double min_eigenvalue(const CMat& m) {
  Eigen::SelfAdjointEigenSolver<CMat> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

int support_count(const CVec& v, double eps_pos) {
  const double thr = std::sqrt(eps_pos);
  int n = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (std::abs(v(i)) > thr) ++n;
  return n;
}

PureState make_pure_state(const TransitionMatrix& tm, const CVec& psi,
                          const TolerancePolicy& tol) {
  PureState st;
  st.psi = psi;
  st.n_a = support_count(psi, tol.eps_pos);
  st.n_b = support_count(CVec(tm.u.adjoint() * psi), tol.eps_pos);
  st.is_basis = st.n_a == 1 || st.n_b == 1;
  return st;
}

}  // namespace

std::optional<HullDecomposition> hull_membership(const TransitionMatrix& tm, const CMat& rho,
                                                 const TolerancePolicy& tol) {
  require_density(rho, tol, "hull_membership");
  if (rho.rows() != tm.dim) fail(Err::dim_mismatch, "hull_membership: state dim != frame dim");
  if (!tm.zero_free) fail(Err::zero_overlap, "hull_membership: frame must be zero-free");

  if (!classify(tm, rho, tol).is_kd_positive) return std::nullopt;

  const int d = tm.dim;
  const CMat q = kd_distribution(tm, rho, tol);
  const RMat w = tm.u.cwiseAbs2();

  // Anchored quadruple conditions.  For mutually unbiased frames the overlap
  // weights are all 1/d and drop out; both forms agree up to that scale.
  RMat r(d, d);
  const bool mub = is_mub(tm);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) r(i, j) = q(i, j).real() / (mub ? 1.0 : w(i, j));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (std::abs(r(i, j) + r(0, 0) - r(i, 0) - r(0, j)) > tol.eps_eq) return std::nullopt;

  // Constructive decomposition anchored at the column minimizing the first
  // weighted row, which makes every weight nonnegative.
  RMat rw(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) rw(i, j) = q(i, j).real() / w(i, j);
  int jstar = 0;
  for (int j = 1; j < d; ++j)
    if (rw(0, j) < rw(0, jstar)) jstar = j;

  HullDecomposition dec;
  dec.lambda.resize(d);
  dec.mu.resize(d);
  for (int i = 0; i < d; ++i) dec.lambda(i) = std::max(rw(i, jstar), 0.0);
  for (int j = 0; j < d; ++j) dec.mu(j) = std::max(rw(0, j) - rw(0, jstar), 0.0);

  // Safety net: the reconstructed mixture has to reproduce rho.
  CMat rec = CMat::Zero(d, d);
  for (int i = 0; i < d; ++i) rec += dec.lambda(i) * basis_projector_a(d, i);
  for (int j = 0; j < d; ++j) rec += dec.mu(j) * projector(tm.u.col(j));
  if (max_abs(CMat(rec - rho)) > 1e-8) return std::nullopt;
  return dec;
}

bool interior_membership(const TransitionMatrix& tm, const CMat& rho,
                         const TolerancePolicy& tol) {
  auto dec = hull_membership(tm, rho, tol);
  if (!dec) fail(Err::not_in_hull, "interior_membership: state is not in the basis hull");
  // The decomposition is unique up to shifting weight t from every lambda to
  // every mu; all 2d weights can be made strictly positive iff
  // min lambda + min mu leaves room for the shift.
  return dec->lambda.minCoeff() + dec->mu.minCoeff() > 2.0 * tol.eps_pos;
}

CMat f_perp(const TransitionMatrix& tm, const TolerancePolicy& tol) {
  if (tm.dim != 3) fail(Err::wrong_dimension, "f_perp: requires d = 3");
  if (max_abs(RMat(tm.u.imag())) > tol.eps_eq) fail(Err::not_real, "f_perp: frame must be real");
  if (!tm.zero_free) fail(Err::zero_overlap, "f_perp: frame must be zero-free");

  // A zero-diagonal real symmetric F is HS-orthogonal to all |a_i><a_i|
  // automatically; orthogonality to the |b_j><b_j| is a 3x3 linear system in
  // the three off-diagonal entries.
  const RMat u = tm.u.real();
  RMat m(3, 3);
  for (int j = 0; j < 3; ++j) {
    m(j, 0) = u(0, j) * u(1, j);
    m(j, 1) = u(0, j) * u(2, j);
    m(j, 2) = u(1, j) * u(2, j);
  }
  RMat ker = svd_kernel(m, tol);
  if (ker.cols() != 1)
    fail(Err::degenerate_solution,
         "f_perp: orthogonal direction is not one-dimensional for this frame");
  RVec f = ker.col(0);
  for (int i = 0; i < 3; ++i) {
    if (std::abs(f(i)) > 1e-12) {
      if (f(i) < 0) f = -f;
      break;
    }
  }
  const double r2 = std::sqrt(2.0);
  CMat fp = CMat::Zero(3, 3);
  fp(0, 1) = fp(1, 0) = f(0) / r2;
  fp(0, 2) = fp(2, 0) = f(1) / r2;
  fp(1, 2) = fp(2, 1) = f(2) / r2;
  return fp;
}

namespace {

struct PsdInterval {
  double lo = 0.0, hi = 0.0;
  bool empty = false;
};

// {x : sigma + x f is PSD} for hermitian sigma, f.  The smallest eigenvalue
// is concave in x, so the set is an interval; endpoints by bisection.
PsdInterval psd_interval(const CMat& sigma, const CMat& f) {
  auto gmin = [&](double x) { return min_eigenvalue(CMat(sigma + x * f)); };
  auto feasible = [&](double x) { return gmin(x) >= -BOUNDARY_SLACK; };

  double x0 = 0.0;
  if (!feasible(x0)) {
    // Concave maximization by ternary search over the a-priori bound |x| <= 10.
    double a = -10.0, b = 10.0;
    for (int it = 0; it < 300; ++it) {
      const double m1 = a + (b - a) / 3.0, m2 = b - (b - a) / 3.0;
      if (gmin(m1) < gmin(m2))
        a = m1;
      else
        b = m2;
    }
    x0 = 0.5 * (a + b);
    if (!feasible(x0)) return {0.0, 0.0, true};
  }

  auto boundary = [&](double dir) {
    double in = x0, step = 0.25, out = x0 + dir * step;
    while (feasible(out)) {
      in = out;
      step *= 2.0;
      out = x0 + dir * step;
      if (std::abs(out) > 20.0) break;  // unreachable for trace-one sections
    }
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (in + out);
      (feasible(mid) ? in : out) = mid;
    }
    return in;
  };
  return {boundary(-1.0), boundary(+1.0), false};
}

}  // namespace

Interval x_interval(const TransitionMatrix& tm, const CMat& sigma, const TolerancePolicy& tol) {
  require_hermitian(sigma, tol.eps_eq, "x_interval");
  if (sigma.rows() != tm.dim) fail(Err::dim_mismatch, "x_interval: dim mismatch");
  if (std::abs(sigma.trace().real() - 1.0) > tol.eps_eq)
    fail(Err::bad_input, "x_interval: sigma must have trace 1");

  // sigma must lie in the span of the 2d basis projectors (least squares fit).
  const int d = tm.dim;
  RMat span(d * d, 2 * d);
  for (int i = 0; i < d; ++i) span.col(i) = hs_coordinates(basis_projector_a(d, i));
  for (int j = 0; j < d; ++j) span.col(d + j) = hs_coordinates(projector(tm.u.col(j)));
  RVec target = hs_coordinates(sigma);
  RVec fit = span.colPivHouseholderQr().solve(target);
  if ((span * fit - target).cwiseAbs().maxCoeff() > 1e-8)
    fail(Err::not_in_span, "x_interval: sigma is not in the span of the basis projectors");

  const CMat f = f_perp(tm, tol);
  const RMat qs = kd_distribution(tm, sigma, tol).real();
  const RMat qf = kd_distribution(tm, f, tol).real();

  // Constraint entries that vanish exactly at basis-state sigmas must yield
  // exact 0 endpoints, so the bounds carry no slack; the slack enters only
  // when deciding emptiness, where roundoff could otherwise pinch a boundary
  // point into an empty set.
  double lo = -std::numeric_limits<double>::infinity();
  double hi = +std::numeric_limits<double>::infinity();
  bool empty = false;
  for (int i = 0; i < d && !empty; ++i)
    for (int j = 0; j < d && !empty; ++j) {
      const double a = qs(i, j), b = qf(i, j);
      if (std::abs(b) <= 1e-14) {
        if (a < -BOUNDARY_SLACK) empty = true;
      } else if (b > 0.0) {
        lo = std::max(lo, -a / b);
      } else {
        hi = std::min(hi, -a / b);
      }
    }
  if (empty || lo > hi + 1e-9) return {0.0, 0.0, true};
  if (lo > hi) lo = hi = 0.5 * (lo + hi);

  PsdInterval p = psd_interval(sigma, f);
  if (p.empty) return {0.0, 0.0, true};
  lo = std::max(lo, p.lo);
  hi = std::min(hi, p.hi);
  if (lo > hi + 1e-9) return {0.0, 0.0, true};
  if (lo > hi) lo = hi = 0.5 * (lo + hi);
  if (lo == 0.0) lo = 0.0;
  if (hi == 0.0) hi = 0.0;
  return {lo, hi, false};
}

XMaxResult x_max_search(const TransitionMatrix& tm, int grid, std::uint64_t seed,
                        const TolerancePolicy& tol) {
  if (grid < 1) fail(Err::bad_input, "x_max_search: grid must be >= 1");
  const int d = tm.dim;

  std::vector<CMat> probes;
  probes.push_back(CMat::Identity(d, d) / static_cast<double>(d));  // barycenter, always first
  for (int i = 0; i < d; ++i) probes.push_back(basis_projector_a(d, i));
  for (int j = 0; j < d; ++j) probes.push_back(projector(tm.u.col(j)));

  std::mt19937_64 rng = rng_from_seed(seed);
  std::uniform_real_distribution<double> un(0.0, 1.0);
  for (int t = 0; t < grid * grid; ++t) {
    RVec w(2 * d);
    for (int i = 0; i < 2 * d; ++i) w(i) = -std::log(un(rng));
    w /= w.sum();
    CMat sigma = CMat::Zero(d, d);
    for (int i = 0; i < d; ++i) sigma += w(i) * basis_projector_a(d, i);
    for (int j = 0; j < d; ++j) sigma += w(d + j) * projector(tm.u.col(j));
    probes.push_back(sigma);
  }

  XMaxResult best;
  best.x_max = -std::numeric_limits<double>::infinity();
  for (const CMat& sigma : probes) {
    Interval xi = x_interval(tm, sigma, tol);
    if (!xi.empty && xi.hi > best.x_max + 1e-12) {
      best.x_max = xi.hi;
      best.sigma = sigma;
    }
  }
  return best;
}

std::vector<PureState> enumerate_pure_kd_positive_d3(const TransitionMatrix& tm,
                                                     const TolerancePolicy& tol) {
  if (tm.dim != 3) fail(Err::wrong_dimension, "enumerate_pure_kd_positive_d3: requires d = 3");
  if (!tm.zero_free)
    fail(Err::zero_overlap, "enumerate_pure_kd_positive_d3: frame must be zero-free");

  std::vector<CVec> candidates;
  for (int i = 0; i < 3; ++i) candidates.push_back(CVec::Unit(3, i));
  for (int j = 0; j < 3; ++j) candidates.push_back(tm.u.col(j));
  for (int i = 0; i < 3; ++i)
    for (int k = i + 1; k < 3; ++k)
      for (int j = 0; j < 3; ++j) {
        CVec psi = CVec::Zero(3);
        psi(i) = std::conj(tm.u(k, j));
        psi(k) = -std::conj(tm.u(i, j));
        candidates.push_back(psi / psi.norm());
      }

  std::vector<PureState> out;
  for (const CVec& psi : candidates) {
    if (!classify(tm, projector(psi), tol).is_kd_positive) continue;
    bool dup = false;
    for (const PureState& seen : out)
      if (max_abs(CMat(projector(psi) - projector(seen.psi))) <= 1e-8) {
        dup = true;
        break;
      }
    if (!dup) out.push_back(make_pure_state(tm, psi, tol));
  }
  return out;
}

std::optional<Certificate> beyond_pure_hull_certificate(const TransitionMatrix& tm,
                                                        const CMat& rho,
                                                        const TolerancePolicy& tol) {
  require_density(rho, tol, "beyond_pure_hull_certificate");
  if (!classify(tm, rho, tol).is_kd_positive)
    fail(Err::not_kd_positive, "beyond_pure_hull_certificate: state is not KD-positive");

  Certificate cert;
  cert.f = f_perp(tm, tol);
  cert.s = (rho * cert.f).trace().real();
  cert.h = -std::numeric_limits<double>::infinity();
  for (const PureState& st : enumerate_pure_kd_positive_d3(tm, tol))
    cert.h = std::max(cert.h, (projector(st.psi) * cert.f).trace().real());
  if (cert.s <= cert.h + tol.eps_eq) return std::nullopt;
  return cert;
}

std::vector<SectionRow> section_scan(const TransitionMatrix& tm, const CMat& anchor1,
                                     const CMat& anchor2, int steps, const TolerancePolicy& tol,
                                     ScanMode mode) {
  if (steps < 2) fail(Err::bad_input, "section_scan: need at least 2 steps");
  require_hermitian(anchor1, tol.eps_eq, "section_scan");
  require_hermitian(anchor2, tol.eps_eq, "section_scan");

  std::vector<SectionRow> rows(static_cast<size_t>(steps));
  auto run_one = [&](int t) {
    const double k = static_cast<double>(t) / (steps - 1);
    CMat sigma = k * anchor1 + (1.0 - k) * anchor2;
    rows[t] = {k, x_interval(tm, sigma, tol)};
  };
  if (mode == ScanMode::openmp) {
#pragma omp parallel for schedule(dynamic)
    for (int t = 0; t < steps; ++t) run_one(t);
  } else {
    for (int t = 0; t < steps; ++t) run_one(t);
  }
  return rows;
}

std::string section_csv(const std::vector<SectionRow>& rows) {
  std::ostringstream os;
  os << "k,x_lo,x_hi,empty\n";
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const SectionRow& r : rows)
    os << fmt12(r.k) << ',' << fmt12(r.xi.empty ? nan : r.xi.lo) << ','
       << fmt12(r.xi.empty ? nan : r.xi.hi) << ',' << (r.xi.empty ? "true" : "false") << '\n';
  return os.str();
}

HexagonCheck y_plus_hexagon_check(const TransitionMatrix& tm, const TolerancePolicy& tol) {
  if (max_abs(CMat(tm.u - u_star())) > 1e-12)
    fail(Err::wrong_matrix, "y_plus_hexagon_check: requires the u_star frame");

  const double x_max = 0.5 / std::sqrt(6.0);
  const CMat f = f_perp(tm, tol);
  const CMat base = CMat::Identity(3, 3) / 3.0 + x_max * f;
  const CMat ga = basis_projector_a(3, 0) - projector(tm.u.col(0));
  const CMat gb = basis_projector_a(3, 1) - projector(tm.u.col(1));

  const double v = 3.0 / 8.0;
  const double ext[6][2] = {{0, v}, {0, -v}, {v, 0}, {-v, 0}, {v, v}, {-v, -v}};

  HexagonCheck chk;
  chk.worst_min_eigenvalue = std::numeric_limits<double>::infinity();
  for (const auto& e : ext) {
    CMat rho = base + e[0] * ga + e[1] * gb;
    const bool kd_ok = classify(tm, rho, tol).is_kd_positive;
    const double mev = min_eigenvalue(rho);
    const double terr = std::abs((rho * f).trace().real() - x_max);
    chk.worst_min_eigenvalue = std::min(chk.worst_min_eigenvalue, mev);
    chk.max_trace_err = std::max(chk.max_trace_err, terr);
    if (kd_ok && mev >= -1e-9 && terr <= 1e-9) ++chk.extremes_ok;
  }
  for (const auto& e : ext) {
    CMat rho = base + 1.01 * e[0] * ga + 1.01 * e[1] * gb;
    const bool kd_ok = classify(tm, rho, tol).is_kd_positive;
    const bool psd_ok = min_eigenvalue(rho) >= -1e-9;
    if (!(kd_ok && psd_ok)) ++chk.probes_rejected;
  }
  chk.pass = chk.extremes_ok == 6 && chk.probes_rejected == 6;
  return chk;
}

std::string hexagon_figure_csv(int steps) {
  if (steps < 6) fail(Err::bad_input, "hexagon_figure_csv: need at least 6 steps");
  std::ostringstream os;
  os << "kind,t,lambda1,lambda2\n";
  const double v = 3.0 / 8.0;
  const double ext[6][2] = {{0, v}, {0, -v}, {v, 0}, {-v, 0}, {v, v}, {-v, -v}};
  for (int i = 0; i < 6; ++i)
    os << "extreme," << i << ',' << fmt12(ext[i][0]) << ',' << fmt12(ext[i][1]) << '\n';

  // Hexagon perimeter in cyclic order.
  const double hex[6][2] = {{v, 0}, {v, v}, {0, v}, {-v, 0}, {-v, -v}, {0, -v}};
  for (int t = 0; t < steps; ++t) {
    const double pos = 6.0 * t / steps;
    const int e = static_cast<int>(pos) % 6;
    const double fr = pos - std::floor(pos);
    const double l1 = hex[e][0] + fr * (hex[(e + 1) % 6][0] - hex[e][0]);
    const double l2 = hex[e][1] + fr * (hex[(e + 1) % 6][1] - hex[e][1]);
    os << "hexagon," << t << ',' << fmt12(l1) << ',' << fmt12(l2) << '\n';
  }

  // PSD boundary ellipse lambda1^2 + lambda2^2 - lambda1 lambda2 = 9/64,
  // principal axes along (1,1)/sqrt2 and (1,-1)/sqrt2.
  const double au = std::sqrt(9.0 / 32.0), av = std::sqrt(3.0 / 32.0);
  for (int t = 0; t < steps; ++t) {
    const double th = 2.0 * PI * t / steps;
    const double uu = au * std::cos(th), vv = av * std::sin(th);
    const double r2 = std::sqrt(2.0);
    os << "ellipse," << t << ',' << fmt12((uu + vv) / r2) << ',' << fmt12((uu - vv) / r2) << '\n';
  }
  return os.str();
}

MubLawReport mub_support_law_check(const TransitionMatrix& tm, int samples, std::uint64_t seed,
                                   const TolerancePolicy& tol, ScanMode mode) {
  if (!is_mub(tm)) fail(Err::not_mub, "mub_support_law_check: frame is not mutually unbiased");
  if (samples < 0) fail(Err::bad_input, "mub_support_law_check: samples must be >= 0");
  const int d = tm.dim;

  MubLawReport rep;
  auto note_positive = [&](const CVec& psi) {
    for (const PureState& seen : rep.found)
      if (max_abs(CMat(projector(psi) - projector(seen.psi))) <= 1e-8) return;
    PureState st = make_pure_state(tm, psi, tol);
    if (st.n_a * st.n_b != d) rep.law_holds = false;
    if (!st.is_basis) ++rep.non_basis_positive;
    rep.found.push_back(std::move(st));
  };

  for (int i = 0; i < d; ++i) note_positive(CVec::Unit(d, i));
  for (int j = 0; j < d; ++j) note_positive(tm.u.col(j));

  for (int i = 0; i < d; ++i)
    for (int k = i + 1; k < d; ++k)
      for (int j = 0; j < d; ++j) {
        CVec psi = CVec::Zero(d);
        psi(i) = std::conj(tm.u(k, j));
        psi(k) = -std::conj(tm.u(i, j));
        psi /= psi.norm();
        ++rep.candidates;
        if (classify(tm, projector(psi), tol).is_kd_positive) {
          ++rep.candidate_positive;
          note_positive(psi);
        }
      }

  // Random pure states, one derived seed per index so the result does not
  // depend on the thread count.
  rep.sampled = samples;
  std::vector<char> hit(static_cast<size_t>(samples), 0);
  auto run_one = [&](int s) {
    std::mt19937_64 rng = rng_from_seed(derive_seed(seed, static_cast<std::uint64_t>(d),
                                                    static_cast<std::uint64_t>(s)));
    CVec psi = random_pure(d, rng);
    if (classify(tm, projector(psi), tol).is_kd_positive) hit[s] = 1;
  };
  if (mode == ScanMode::openmp) {
#pragma omp parallel for schedule(static)
    for (int s = 0; s < samples; ++s) run_one(s);
  } else {
    for (int s = 0; s < samples; ++s) run_one(s);
  }
  for (int s = 0; s < samples; ++s)
    if (hit[s]) {
      std::mt19937_64 rng = rng_from_seed(derive_seed(seed, static_cast<std::uint64_t>(d),
                                                      static_cast<std::uint64_t>(s)));
      CVec psi = random_pure(d, rng);
      PureState st = make_pure_state(tm, psi, tol);
      if (!st.is_basis) ++rep.sampled_non_basis_positive;
      if (st.n_a * st.n_b != d) rep.law_holds = false;
      rep.found.push_back(std::move(st));
    }
  return rep;
}

}  // namespace kd
