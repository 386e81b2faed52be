// Shared aliases, tolerances, error types and seeding utilities used by the
// whole library.  Everything numeric is double precision; matrices are dense
// Eigen types.  Randomized routines never touch a global generator: every one
// of them takes an explicit 64-bit seed and derives per-item streams from it,
// so results are reproducible regardless of scheduling or thread count.

#pragma once

#include <complex>
#include <cstdint>
#include <cstdio>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace kd {

using Cx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using RMat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

inline constexpr double PI = 3.14159265358979323846;

// Default tolerances.  eps_rank is a relative singular-value cutoff,
// eps_pos bounds how negative (or how imaginary) a value may be before a
// distribution stops counting as positive (real), eps_eq is the general
// equality slack for unitarity/hermiticity/marginal checks.
struct TolerancePolicy {
  double eps_rank = 1e-10;
  double eps_pos = 1e-9;
  double eps_eq = 1e-9;
};

enum class Err {
  not_square,
  not_hermitian,
  not_unitary,
  dim_mismatch,
  wrong_dimension,
  not_real,
  zero_overlap,
  dependent_columns,
  degenerate_solution,
  not_dft,
  not_prime,
  not_in_hull,
  not_kd_positive,
  not_mub,
  wrong_matrix,
  not_in_span,
  bad_input,
};

struct Error : std::runtime_error {
  Err code;
  Error(Err c, const std::string& what) : std::runtime_error(what), code(c) {}
  // Numeric failures (as opposed to rejected inputs); the CLI maps these to a
  // distinct exit code.
  bool numeric() const {
    return code == Err::degenerate_solution || code == Err::dependent_columns;
  }
};

[[noreturn]] inline void fail(Err c, const std::string& what) { throw Error(c, what); }

// ---- seeding ---------------------------------------------------------------

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Stream seed for item (a, b) of a run keyed by `base`.  Used by the scan
// drivers so each sample owns an independent generator and the output does
// not depend on how samples are distributed over threads.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(splitmix64(base) ^ a) ^ b);
}

inline std::mt19937_64 rng_from_seed(std::uint64_t seed) { return std::mt19937_64(seed); }

// ---- small helpers ---------------------------------------------------------

// All floating-point values leaving the library through text (CSV, key=value
// lines) are printed with 12 significant digits.
inline std::string fmt12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

inline double max_abs(const CMat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }
inline double max_abs(const RMat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

inline bool all_finite(const CMat& m) { return m.allFinite(); }

inline void require_square(const CMat& m, const char* who) {
  if (m.rows() != m.cols() || m.rows() == 0)
    fail(Err::not_square, std::string(who) + ": matrix must be square and non-empty");
}

inline void require_hermitian(const CMat& m, double eps, const char* who) {
  require_square(m, who);
  if (max_abs(CMat(m - m.adjoint())) > eps)
    fail(Err::not_hermitian, std::string(who) + ": matrix is not hermitian");
}

// Gaussian complex matrix with i.i.d. standard complex normal entries.
inline CMat ginibre(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  CMat g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = Cx(n(rng), n(rng)) / std::sqrt(2.0);
  return g;
}

inline CVec random_pure(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  CVec v(d);
  for (int i = 0; i < d; ++i) v(i) = Cx(n(rng), n(rng));
  return v / v.norm();
}

inline CMat random_density(int d, std::mt19937_64& rng) {
  CMat g = ginibre(d, rng);
  CMat rho = g * g.adjoint();
  return rho / rho.trace().real();
}

}  // namespace kd
