// Timing comparison between the serial reference path and the OpenMP path of
// the two scan drivers.  Also cross-checks that both paths produce identical
// output, which is the property the serial path exists to guarantee.

#include <chrono>
#include <iomanip>
#include <iostream>
#include <string>

#include "kd/bases.hpp"
#include "kd/geometry.hpp"
#include "kd/kd_real_space.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace kd;

namespace {

template <typename F>
double time_s(F&& f) {
  const auto start = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void row(const std::string& name, double serial, double parallel, bool identical) {
  std::cout << std::left << std::setw(28) << name << std::right << std::fixed
            << std::setprecision(3) << std::setw(9) << serial << " s" << std::setw(9)
            << parallel << " s" << std::setw(8) << std::setprecision(2)
            << serial / parallel << "x   " << (identical ? "identical" : "MISMATCH")
            << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  int samples = 60;
  if (argc > 1) samples = std::stoi(argv[1]);

#ifdef _OPENMP
  std::cout << "threads: " << omp_get_max_threads() << "\n\n";
#else
  std::cout << "threads: 1 (compiled without OpenMP)\n\n";
#endif
  std::cout << std::left << std::setw(28) << "benchmark" << std::right << std::setw(11)
            << "serial" << std::setw(11) << "parallel" << std::setw(9) << "speedup"
            << "   output\n";

  bool all_identical = true;

  {
    std::vector<int> dims{4, 6, 8, 10};
    std::vector<ScanRow> rs, rp;
    const double ts = time_s([&] { rs = conjecture_scan(dims, samples, 99, ScanMode::serial); });
    const double tp = time_s([&] { rp = conjecture_scan(dims, samples, 99, ScanMode::openmp); });
    const bool same = scan_csv(rs) == scan_csv(rp);
    all_identical = all_identical && same;
    row("conjecture_scan d=4..10", ts, tp, same);
  }

  {
    auto tm = make_transition(u_star());
    CMat a1 = CMat::Zero(3, 3), a2 = CMat::Zero(3, 3);
    a1(0, 0) = a1(1, 1) = 0.5;
    a2(2, 2) = 1.0;
    std::vector<SectionRow> rs, rp;
    const double ts =
        time_s([&] { rs = section_scan(tm, a1, a2, 2001, {}, ScanMode::serial); });
    const double tp =
        time_s([&] { rp = section_scan(tm, a1, a2, 2001, {}, ScanMode::openmp); });
    const bool same = section_csv(rs) == section_csv(rp);
    all_identical = all_identical && same;
    row("section_scan 2001 steps", ts, tp, same);
  }

  {
    auto tm = make_transition(dft(5));
    MubLawReport rs, rp;
    const double ts =
        time_s([&] { rs = mub_support_law_check(tm, 40 * samples, 7, {}, ScanMode::serial); });
    const double tp =
        time_s([&] { rp = mub_support_law_check(tm, 40 * samples, 7, {}, ScanMode::openmp); });
    const bool same = rs.sampled == rp.sampled &&
                      rs.sampled_non_basis_positive == rp.sampled_non_basis_positive &&
                      rs.candidate_positive == rp.candidate_positive &&
                      rs.law_holds == rp.law_holds;
    all_identical = all_identical && same;
    row("mub_support_law d=5", ts, tp, same);
  }

  if (!all_identical) {
    std::cout << "\nserial and parallel outputs differ\n";
    return 1;
  }
  return 0;
}
