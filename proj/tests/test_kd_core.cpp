#include "doctest.h"

#include <random>

#include "kd/bases.hpp"
#include "kd/kd_core.hpp"

using namespace kd;

namespace {

// Bra-ket oracle for the KD symbol, evaluated entry by entry:
//   Q_ij = <a_i|F|b_j> <b_j|a_i>,  b_j = j-th column of u.
CMat kd_oracle(const CMat& u, const CMat& f) {
  const int d = static_cast<int>(u.rows());
  CMat q(d, d);
  for (int j = 0; j < d; ++j) {
    const CVec bj = u.col(j);
    const CVec fbj = f * bj;
    for (int i = 0; i < d; ++i) q(i, j) = fbj(i) * std::conj(bj(i));
  }
  return q;
}

std::vector<int> random_perm(int d, std::mt19937_64& rng) {
  std::vector<int> p(d);
  for (int i = 0; i < d; ++i) p[i] = i;
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

}  // namespace

TEST_CASE("make_transition caches overlap extrema") {
  auto tm = make_transition(u_star());
  CHECK(tm.dim == 3);
  CHECK(tm.m_ab == doctest::Approx(1.0 / 3).epsilon(1e-14));
  CHECK(tm.M_ab == doctest::Approx(2.0 / 3).epsilon(1e-14));
  CHECK(tm.zero_free);

  auto id = make_transition(CMat(CMat::Identity(3, 3)));
  CHECK(id.m_ab == 0.0);
  CHECK(!id.zero_free);
}

TEST_CASE("make_transition rejects non-unitary input") {
  CMat m(2, 2);
  m << 1, 0, 0, 2;
  CHECK_THROWS_AS(make_transition(m), Error);
  try {
    make_transition(m);
  } catch (const Error& e) {
    CHECK(e.code == Err::not_unitary);
    CHECK(!e.numeric());
  }
}

TEST_CASE("kd_distribution: frozen qubit example") {
  auto tm = make_transition(dft(2));
  CMat f(2, 2);
  f << Cx(0.7, 0), Cx(0.1, 0.2), Cx(0.1, -0.2), Cx(0.3, 0);
  CMat q = kd_distribution(tm, f);
  // Hand-computed from Q_ij = <a_i|F|b_j><b_j|a_i> with b_j = (a_0 +- a_1)/sqrt(2).
  CHECK(std::abs(q(0, 0) - Cx(0.4, 0.1)) < 1e-15);
  CHECK(std::abs(q(0, 1) - Cx(0.3, -0.1)) < 1e-15);
  CHECK(std::abs(q(1, 0) - Cx(0.2, -0.1)) < 1e-15);
  CHECK(std::abs(q(1, 1) - Cx(0.1, 0.1)) < 1e-15);
}

TEST_CASE("kd_distribution agrees with the bra-ket oracle") {
  std::mt19937_64 rng(31);
  for (int d = 2; d <= 6; ++d) {
    auto tm = make_transition(haar_random(d, derive_seed(31, d, 0)));
    CMat rho = random_density(d, rng);
    CHECK(max_abs(CMat(kd_distribution(tm, rho) - kd_oracle(tm.u, rho))) < 1e-14);
  }
}

TEST_CASE("marginals: row sums, column sums, total") {
  std::mt19937_64 rng(37);
  for (int d = 2; d <= 6; ++d) {
    auto tm = make_transition(haar_random(d, derive_seed(37, d, 1)));
    CMat rho = random_density(d, rng);
    CMat q = kd_distribution(tm, rho);
    const CMat in_b = tm.u.adjoint() * rho * tm.u;
    for (int i = 0; i < d; ++i)
      CHECK(std::abs(q.row(i).sum() - rho(i, i)) < 1e-10);
    for (int j = 0; j < d; ++j)
      CHECK(std::abs(q.col(j).sum() - in_b(j, j)) < 1e-10);
    CHECK(std::abs(q.sum() - rho.trace()) < 1e-10);
  }
}

TEST_CASE("classify flags KD-positive and KD-real correctly") {
  auto tm = make_transition(dft(2));
  // Basis projector: KD-positive for any frame.
  CMat pa = CMat::Zero(2, 2);
  pa(0, 0) = 1;
  auto rep = classify(tm, pa);
  CHECK(rep.is_kd_real);
  CHECK(rep.is_kd_positive);
  CHECK(rep.support_a == 1);
  CHECK(rep.support_b == 2);

  // sigma_z has KD symbol with a negative entry but no imaginary part.
  CMat sz(2, 2);
  sz << 1, 0, 0, -1;
  rep = classify(tm, sz);
  CHECK(rep.is_kd_real);
  CHECK(!rep.is_kd_positive);
  CHECK(rep.min_real_part == doctest::Approx(-0.5).epsilon(1e-14));

  // sigma_y has purely imaginary off-diagonal KD entries.
  CMat sy(2, 2);
  sy << Cx(0, 0), Cx(0, -1), Cx(0, 1), Cx(0, 0);
  rep = classify(tm, sy);
  CHECK(!rep.is_kd_real);
  CHECK(rep.max_abs_imag == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("classify report matches a direct scan of the symbol") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 4);
    auto tm = make_transition(haar_random(d, derive_seed(41, d, trial)));
    CMat rho = random_density(d, rng);
    CMat q = kd_distribution(tm, rho);
    auto rep = classify(tm, rho);
    CHECK(rep.min_real_part == doctest::Approx(q.real().minCoeff()).epsilon(1e-14));
    CHECK(rep.max_abs_imag ==
          doctest::Approx(q.imag().cwiseAbs().maxCoeff()).epsilon(1e-14));
  }
}

TEST_CASE("reconstruct inverts kd_distribution on zero-free frames") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 5);
    auto tm = make_transition(haar_random(d, derive_seed(43, d, trial)));
    REQUIRE(tm.zero_free);
    CMat rho = random_density(d, rng);
    CMat back = reconstruct(tm, kd_distribution(tm, rho));
    CHECK(max_abs(CMat(back - rho)) < 1e-9);
  }
}

TEST_CASE("reconstruct refuses frames with vanishing overlaps") {
  auto id = make_transition(CMat(CMat::Identity(2, 2)));
  CMat q = CMat::Identity(2, 2);
  CHECK_THROWS_AS(reconstruct(id, q), Error);
  try {
    reconstruct(id, q);
  } catch (const Error& e) {
    CHECK(e.code == Err::zero_overlap);
  }
}

TEST_CASE("overlap_trace reproduces Tr(FG)") {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 4);
    auto tm = make_transition(haar_random(d, derive_seed(47, d, trial)));
    CMat f = random_density(d, rng);
    CMat g = random_density(d, rng);
    const double direct = (f * g).trace().real();
    const double via_symbols = overlap_trace(tm, f, g);
    CHECK(via_symbols == doctest::Approx(direct).epsilon(1e-8));
  }
}

TEST_CASE("classify is invariant under frame symmetries") {
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> angle(-PI, PI);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 3;
    auto tm = make_transition(haar_random(d, derive_seed(53, 0, trial)));
    CMat rho = random_density(d, rng);
    auto before = classify(tm, rho);

    RVec phi(d), psi(d);
    for (int i = 0; i < d; ++i) phi(i) = angle(rng), psi(i) = angle(rng);
    const auto pa = random_perm(d, rng);
    const auto pb = random_perm(d, rng);
    auto tm2 = make_transition(transform_frame(tm.u, phi, psi, pa, pb));
    CMat rho2 = transform_operator(rho, phi, pa);
    auto after = classify(tm2, rho2);

    CHECK(before.is_kd_real == after.is_kd_real);
    CHECK(before.is_kd_positive == after.is_kd_positive);
    CHECK(before.min_real_part == doctest::Approx(after.min_real_part).epsilon(1e-10));
    CHECK(before.support_a == after.support_a);
    CHECK(before.support_b == after.support_b);

    // The symbol itself is permuted, never re-phased.
    CMat q1 = kd_distribution(tm, rho);
    CMat q2 = kd_distribution(tm2, rho2);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        CHECK(std::abs(q2(i, j) - q1(pa[i], pb[j])) < 1e-12);
  }
}

TEST_CASE("require_density rejects bad states") {
  TolerancePolicy tol;
  CMat not_trace_one = 2.0 * CMat::Identity(2, 2);
  CHECK_THROWS_AS(require_density(not_trace_one, tol, "test"), Error);
  CMat not_psd(2, 2);
  not_psd << 1.5, 0, 0, -0.5;
  CHECK_THROWS_AS(require_density(not_psd, tol, "test"), Error);
  CMat ok = CMat::Identity(2, 2) / 2.0;
  CHECK_NOTHROW(require_density(ok, tol, "test"));
}

TEST_CASE("is_prime") {
  CHECK(is_prime(2));
  CHECK(is_prime(3));
  CHECK(is_prime(13));
  CHECK(!is_prime(1));
  CHECK(!is_prime(4));
  CHECK(!is_prime(15));
}
