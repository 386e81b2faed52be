#include "doctest.h"

#include <random>

#include "kd/bases.hpp"
#include "kd/kd_core.hpp"

using namespace kd;

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

// Explicit Wigner sum formula, rows m' = s..-s, columns m = s..-s:
//   d_{m'm} = sqrt((s+m')!(s-m')!(s+m)!(s-m)!) *
//             sum_k (-1)^(m'-m+k) c^(2s+m-m'-2k) t^(m'-m+2k) /
//                   ((s+m-k)! k! (s-m'-k)! (m'-m+k)!)
// with c = cos(b/2), t = sin(b/2).  Wholly independent of the ladder-operator
// construction used by the library.
RMat wigner_formula(double s, double beta) {
  const int n = static_cast<int>(std::lround(2 * s)) + 1;
  const double c = std::cos(beta / 2), t = std::sin(beta / 2);
  RMat d(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double mp = s - i, m = s - j;
      const double pref = std::sqrt(factorial(static_cast<int>(std::lround(s + mp))) *
                                    factorial(static_cast<int>(std::lround(s - mp))) *
                                    factorial(static_cast<int>(std::lround(s + m))) *
                                    factorial(static_cast<int>(std::lround(s - m))));
      double sum = 0.0;
      for (int k = 0; k <= n; ++k) {
        const int a1 = static_cast<int>(std::lround(s + m)) - k;
        const int a2 = k;
        const int a3 = static_cast<int>(std::lround(s - mp)) - k;
        const int a4 = static_cast<int>(std::lround(mp - m)) + k;
        if (a1 < 0 || a3 < 0 || a4 < 0) continue;
        const double sign = (a4 % 2 == 0) ? 1.0 : -1.0;
        sum += sign * std::pow(c, 2 * s + m - mp - 2 * k) * std::pow(t, mp - m + 2 * k) /
               (factorial(a1) * factorial(a2) * factorial(a3) * factorial(a4));
      }
      d(i, j) = pref * sum;
    }
  return d;
}

bool is_unitary(const CMat& u, double eps = 1e-10) {
  const int d = static_cast<int>(u.rows());
  return max_abs(CMat(u.adjoint() * u - CMat::Identity(d, d))) <= eps;
}

}  // namespace

TEST_CASE("dft matrices are unitary MUBs with the right entries") {
  for (int d = 2; d <= 16; ++d) {
    CMat u = dft(d);
    CHECK(is_unitary(u));
    CHECK((u.cwiseAbs().array() - 1.0 / std::sqrt(double(d))).abs().maxCoeff() < 1e-12);
  }
  CMat u2 = dft(2);
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(u2(0, 0) - Cx(r, 0)) < 1e-15);
  CHECK(std::abs(u2(1, 1) - Cx(-r, 0)) < 1e-15);
  // Column 2 of dft(4): entries exp(-2 pi i * 2k / 4) / 2 = (+,-,+,-)/2.
  CMat u4 = dft(4);
  CHECK(std::abs(u4(1, 2) - Cx(-0.5, 0)) < 1e-12);
  CHECK(std::abs(u4(3, 2) - Cx(-0.5, 0)) < 1e-12);
  CHECK_THROWS_AS(dft(1), Error);
  CHECK_THROWS_AS(dft(17), Error);
}

TEST_CASE("u_star is the symmetric orthogonal involution") {
  CMat u = u_star();
  CHECK(is_unitary(u, 1e-15));
  CHECK(max_abs(CMat(u - u.transpose())) == 0.0);
  CHECK(max_abs(CMat(u * u - CMat::Identity(3, 3))) < 1e-15);
  CHECK(u(0, 0).real() == doctest::Approx(-1.0 / 3).epsilon(1e-15));
  CHECK(u(0, 1).real() == doctest::Approx(2.0 / 3).epsilon(1e-15));
}

TEST_CASE("haar_random is unitary, deterministic per seed") {
  for (int d : {2, 5, 9}) {
    CMat a = haar_random(d, 99);
    CMat b = haar_random(d, 99);
    CMat c = haar_random(d, 100);
    CHECK(is_unitary(a));
    CHECK(max_abs(CMat(a - b)) == 0.0);
    CHECK(max_abs(CMat(a - c)) > 1e-3);
  }
}

TEST_CASE("haar_random first entry has the Haar second moment") {
  // E |u_00|^2 = 1/d for Haar measure; 2000 samples give stderr ~ 1/(d sqrt(n)).
  const int d = 3, n = 2000;
  double acc = 0.0;
  for (int k = 0; k < n; ++k) acc += std::norm(haar_random(d, derive_seed(61, d, k))(0, 0));
  CHECK(acc / n == doctest::Approx(1.0 / d).epsilon(0.1));
}

TEST_CASE("wigner_small_d matches the explicit sum formula") {
  for (double s : {0.5, 1.0, 1.5, 2.0, 2.5})
    for (double beta : {0.3, 1.1, 2.0, 2.9}) {
      CMat d = wigner_small_d(make_spin_frame(s, beta));
      CHECK(is_unitary(d));
      CHECK(max_abs(RMat(d.imag())) == 0.0);
      CHECK(max_abs(CMat(d - wigner_formula(s, beta).cast<Cx>())) < 1e-12);
    }
}

TEST_CASE("wigner_small_d composes additively in beta") {
  for (double b1 : {0.4, 0.9})
    for (double b2 : {0.3, 1.2}) {
      CMat da = wigner_small_d(make_spin_frame(1.5, b1));
      CMat db = wigner_small_d(make_spin_frame(1.5, b2));
      CMat dc = wigner_small_d(make_spin_frame(1.5, b1 + b2));
      CHECK(max_abs(CMat(da * db - dc)) < 1e-12);
    }
}

TEST_CASE("make_spin_frame validates its arguments") {
  CHECK_THROWS_AS(make_spin_frame(0.3, 1.0), Error);   // 2s not integral
  CHECK_THROWS_AS(make_spin_frame(3.0, 1.0), Error);   // 2s > 5
  CHECK_THROWS_AS(make_spin_frame(1.0, -0.1), Error);  // beta out of range
  CHECK_THROWS_AS(make_spin_frame(1.0, 3.5), Error);
  CHECK_NOTHROW(make_spin_frame(0.5, 0.0));
  CHECK_NOTHROW(make_spin_frame(2.5, PI));
}

TEST_CASE("sylvester_hadamard_mub doubles correctly") {
  CHECK(max_abs(CMat(sylvester_hadamard_mub(1) - dft(2))) < 1e-15);
  for (int m = 1; m <= 4; ++m) {
    CMat u = sylvester_hadamard_mub(m);
    const int d = 1 << m;
    CHECK(u.rows() == d);
    CHECK(is_unitary(u));
    CHECK(max_abs(RMat(u.imag())) == 0.0);
    const double r = 1.0 / std::sqrt(double(d));
    CHECK((u.cwiseAbs().array() - r).abs().maxCoeff() < 1e-14);
    for (int j = 0; j < d; ++j) CHECK(u(0, j).real() == doctest::Approx(r).epsilon(1e-14));
  }
  CHECK_THROWS_AS(sylvester_hadamard_mub(0), Error);
  CHECK_THROWS_AS(sylvester_hadamard_mub(5), Error);
}

TEST_CASE("phase_profile polar-decomposes entrywise") {
  std::mt19937_64 rng(67);
  CMat u = haar_random(4, 67);
  auto pp = phase_profile(u);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      CHECK(pp.phases(i, j) > -PI - 1e-15);
      CHECK(pp.phases(i, j) <= PI + 1e-15);
      const Cx back = pp.amplitudes(i, j) * std::exp(Cx(0, pp.phases(i, j)));
      CHECK(std::abs(back - u(i, j)) < 1e-14);
    }
}

TEST_CASE("equivalence_normalize fixes first row and column") {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> angle(-PI, PI);
  for (int trial = 0; trial < 20; ++trial) {
    CMat u = haar_random(4, derive_seed(71, 0, trial));
    CMat n = equivalence_normalize(u);
    for (int j = 0; j < 4; ++j) {
      CHECK(n(0, j).imag() == doctest::Approx(0.0).epsilon(1e-14));
      CHECK(n(0, j).real() > 0.0);
    }
    for (int i = 0; i < 4; ++i) {
      CHECK(n(i, 0).imag() == doctest::Approx(0.0).epsilon(1e-14));
      CHECK(n(i, 0).real() > 0.0);
    }
    CHECK(max_abs(CMat(equivalence_normalize(n) - n)) < 1e-13);

    // Invariance under re-phasing of both bases.
    RVec phi(4), psi(4);
    for (int i = 0; i < 4; ++i) phi(i) = angle(rng), psi(i) = angle(rng);
    std::vector<int> id{0, 1, 2, 3};
    CMat v = transform_frame(u, phi, psi, id, id);
    CHECK(max_abs(CMat(equivalence_normalize(v) - n)) < 1e-12);
  }
}

TEST_CASE("equivalent_frames recovers a hidden symmetry") {
  std::mt19937_64 rng(73);
  std::uniform_real_distribution<double> angle(-PI, PI);
  CMat u = haar_random(4, 73);
  RVec phi(4), psi(4);
  for (int i = 0; i < 4; ++i) phi(i) = angle(rng), psi(i) = angle(rng);
  std::vector<int> pa{2, 0, 3, 1}, pb{1, 3, 0, 2};
  CMat v = transform_frame(u, phi, psi, pa, pb);

  auto found = equivalent_frames(u, v);
  REQUIRE(found.has_value());
  const auto& [ra, rb] = *found;
  CMat w(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) w(i, j) = u(ra[i], rb[j]);
  CHECK(max_abs(CMat(equivalence_normalize(w) - equivalence_normalize(v))) <= 1e-9);
}

TEST_CASE("equivalent_frames separates inequivalent frames") {
  CHECK(!equivalent_frames(u_star(), dft(3)).has_value());
  CHECK(equivalent_frames(u_star(), u_star()).has_value());
  CHECK_THROWS_AS(equivalent_frames(dft(6), dft(6)), Error);  // cap d <= 5
}

TEST_CASE("phase genericity distinguishes structured from random frames") {
  CHECK(check_phase_genericity(dft(3)));
  CHECK(!check_phase_genericity(dft(4)));  // (k-k')(j-j') = 4 hits 0 mod 4
  CHECK(!check_phase_genericity(u_star()));
  CHECK(!check_phase_genericity(sylvester_hadamard_mub(2)));
  for (int trial = 0; trial < 5; ++trial)
    CHECK(check_phase_genericity(haar_random(4, derive_seed(79, 4, trial))));
}

TEST_CASE("d=3 genericity conditions") {
  CHECK(!check_d3_genericity(u_star()));
  for (int trial = 0; trial < 5; ++trial)
    CHECK(check_d3_genericity(haar_random(3, derive_seed(83, 3, trial))));
  CHECK_THROWS_AS(check_d3_genericity(dft(4)), Error);
}

TEST_CASE("perturb_columns stays unitary and breaks unbiasedness") {
  CMat u = sylvester_hadamard_mub(2);
  CHECK(max_abs(CMat(perturb_columns(u, 0.0) - u)) < 1e-12);
  CHECK(max_abs(CMat(perturb_columns(u, 1e-8) - u)) < 1e-6);
  for (double theta : {0.1, 0.3, 1.0}) {
    CMat v = perturb_columns(u, theta);
    CHECK(is_unitary(v));
    // No longer mutually unbiased: some modulus must move off 1/2.
    CHECK((v.cwiseAbs().array() - 0.5).abs().maxCoeff() > 1e-3);
  }
}
