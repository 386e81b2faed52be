// kdgeom: command-line front end for the KD positivity geometry library.
//
// Exit codes: 0 success, 2 validation failure (bad input, non-unitary matrix,
// malformed JSON, out-of-range parameters), 3 numeric failure (eigensolver or
// rank decisions too degenerate to trust).

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "json.hpp"

#include "kd/bases.hpp"
#include "kd/geometry.hpp"
#include "kd/io.hpp"
#include "kd/kd_core.hpp"
#include "kd/kd_real_space.hpp"

namespace {

using nlohmann::json;
using namespace kd;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  return parts;
}

long long parse_ll(const std::string& s, const char* what) {
  size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &pos);
  } catch (...) {
    fail(Err::bad_input, std::string(what) + ": expected an integer, got '" + s + "'");
  }
  if (pos != s.size())
    fail(Err::bad_input, std::string(what) + ": expected an integer, got '" + s + "'");
  return v;
}

double parse_real(const std::string& s, const char* what) {
  size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (...) {
    fail(Err::bad_input, std::string(what) + ": expected a number, got '" + s + "'");
  }
  if (pos != s.size() || !std::isfinite(v))
    fail(Err::bad_input, std::string(what) + ": expected a number, got '" + s + "'");
  return v;
}

// Strips "key=" from a token like "seed=42".
std::string keyed(const std::string& token, const std::string& key, const char* what) {
  const std::string prefix = key + "=";
  if (token.rfind(prefix, 0) != 0)
    fail(Err::bad_input, std::string(what) + ": expected '" + prefix + "...', got '" + token + "'");
  return token.substr(prefix.size());
}

// Matrix spec mini-language:
//   dft:N | ustar | haar:N:seed=S | spin:S:beta=B | hadamard:D | file:PATH
// where D is a power-of-two dimension and PATH points at matrix JSON.
CMat matrix_from_spec(const std::string& spec) {
  if (spec.rfind("file:", 0) == 0) return load_matrix(spec.substr(5));
  const auto parts = split(spec, ':');
  const std::string& kind = parts[0];
  if (kind == "ustar") {
    if (parts.size() != 1) fail(Err::bad_input, "matrix spec: ustar takes no arguments");
    return u_star();
  }
  if (kind == "dft") {
    if (parts.size() != 2) fail(Err::bad_input, "matrix spec: expected dft:N");
    return dft(static_cast<int>(parse_ll(parts[1], "dft dimension")));
  }
  if (kind == "haar") {
    if (parts.size() != 2 && parts.size() != 3)
      fail(Err::bad_input, "matrix spec: expected haar:N or haar:N:seed=S");
    const int d = static_cast<int>(parse_ll(parts[1], "haar dimension"));
    std::uint64_t seed = 1;
    if (parts.size() == 3)
      seed = static_cast<std::uint64_t>(parse_ll(keyed(parts[2], "seed", "haar"), "haar seed"));
    return haar_random(d, seed);
  }
  if (kind == "spin") {
    if (parts.size() != 3) fail(Err::bad_input, "matrix spec: expected spin:S:beta=B");
    const double s = parse_real(parts[1], "spin s");
    const double beta = parse_real(keyed(parts[2], "beta", "spin"), "spin beta");
    return wigner_small_d(make_spin_frame(s, beta));
  }
  if (kind == "hadamard") {
    if (parts.size() != 2) fail(Err::bad_input, "matrix spec: expected hadamard:D");
    const long long d = parse_ll(parts[1], "hadamard dimension");
    int m = 0;
    while ((1LL << (m + 1)) <= d) ++m;
    if (d < 2 || (1LL << m) != d)
      fail(Err::bad_input, "matrix spec: hadamard dimension must be a power of two in [2, 16]");
    return sylvester_hadamard_mub(m);
  }
  fail(Err::bad_input, "matrix spec: unknown kind '" + kind + "'");
}

// "2..10", "5", or "2,4,8" (elements may themselves be ranges).
std::vector<int> parse_dims(const std::string& text) {
  std::vector<int> dims;
  for (const auto& token : split(text, ',')) {
    const auto dots = token.find("..");
    if (dots == std::string::npos) {
      dims.push_back(static_cast<int>(parse_ll(token, "dims")));
      continue;
    }
    const int lo = static_cast<int>(parse_ll(token.substr(0, dots), "dims"));
    const int hi = static_cast<int>(parse_ll(token.substr(dots + 2), "dims"));
    if (hi < lo) fail(Err::bad_input, "dims: empty range '" + token + "'");
    for (int d = lo; d <= hi; ++d) dims.push_back(d);
  }
  if (dims.empty()) fail(Err::bad_input, "dims: empty list");
  return dims;
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty())
    std::cout << text;
  else
    write_text_file(out_path, text);
}

TolerancePolicy tolerances_from_env() {
  TolerancePolicy tol;
  if (const char* s = std::getenv("KD_TOL_POS")) {
    const double v = parse_real(s, "KD_TOL_POS");
    if (v <= 0.0) fail(Err::bad_input, "KD_TOL_POS: must be positive");
    tol.eps_pos = v;
  }
  return tol;
}

json matrix_json(const CMat& m) { return json::parse(matrix_to_json(m)); }

std::string row_text(const CMat& q, Eigen::Index i) {
  std::ostringstream ss;
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    if (j) ss << ' ';
    ss << '(' << fmt12(q(i, j).real()) << ',' << fmt12(q(i, j).imag()) << ')';
  }
  return ss.str();
}

std::string vec_text(const RVec& v) {
  std::ostringstream ss;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) ss << ',';
    ss << fmt12(v(i));
  }
  return ss.str();
}

json vec_json(const RVec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

struct AnalyzeArgs {
  std::string matrix;
  std::string state_path;
  std::string format = "pretty";
  std::string out;
};

int cmd_analyze(const AnalyzeArgs& args, const TolerancePolicy& tol) {
  const TransitionMatrix tm = make_transition(matrix_from_spec(args.matrix), tol);
  const int dim_v = kd_real_dimension(tm, tol);
  const bool has_minimal = tm.zero_free;
  const bool minimal = has_minimal && dim_v == 2 * tm.dim - 1;

  std::optional<PositivityReport> rep;
  CMat q;
  std::optional<HullDecomposition> hull;
  bool hull_defined = false;
  bool interior = false;
  if (!args.state_path.empty()) {
    const CMat rho = load_matrix(args.state_path);
    require_density(rho, tol, "analyze");
    q = kd_distribution(tm, rho, tol);
    rep = classify(tm, rho, tol);
    if (tm.zero_free) {
      hull_defined = true;
      if (rep->is_kd_positive) {
        hull = hull_membership(tm, rho, tol);
        if (hull) interior = interior_membership(tm, rho, tol);
      }
    }
  }

  if (args.format == "json") {
    json out;
    out["matrix"] = args.matrix;
    out["dim"] = tm.dim;
    out["m_ab"] = tm.m_ab;
    out["M_ab"] = tm.M_ab;
    out["zero_free"] = tm.zero_free;
    out["dim_vkdr"] = dim_v;
    out["minimal_polytope"] = has_minimal ? json(minimal) : json(nullptr);
    if (rep) {
      json st;
      st["kd_real"] = rep->is_kd_real;
      st["kd_positive"] = rep->is_kd_positive;
      st["min_real_part"] = rep->min_real_part;
      st["max_abs_imag"] = rep->max_abs_imag;
      st["support_a"] = rep->support_a;
      st["support_b"] = rep->support_b;
      st["q"] = matrix_json(q);
      if (hull_defined) {
        st["in_hull"] = static_cast<bool>(hull);
        if (hull) {
          st["interior"] = interior;
          st["lambda"] = vec_json(hull->lambda);
          st["mu"] = vec_json(hull->mu);
        }
      }
      out["state"] = std::move(st);
    }
    emit(args.out, out.dump() + "\n");
    return 0;
  }

  std::ostringstream ss;
  ss << "matrix=" << args.matrix << '\n';
  ss << "dim=" << tm.dim << '\n';
  ss << "m_ab=" << fmt12(tm.m_ab) << '\n';
  ss << "M_ab=" << fmt12(tm.M_ab) << '\n';
  ss << "zero_free=" << (tm.zero_free ? "true" : "false") << '\n';
  ss << "dim_vkdr=" << dim_v << " minimal_polytope="
     << (has_minimal ? (minimal ? "true" : "false") : "undefined") << '\n';
  if (rep) {
    ss << "state=" << args.state_path << '\n';
    ss << "kd_real=" << (rep->is_kd_real ? "true" : "false") << '\n';
    ss << "kd_positive=" << (rep->is_kd_positive ? "true" : "false") << '\n';
    ss << "min_real_part=" << fmt12(rep->min_real_part) << '\n';
    ss << "max_abs_imag=" << fmt12(rep->max_abs_imag) << '\n';
    ss << "support_a=" << rep->support_a << '\n';
    ss << "support_b=" << rep->support_b << '\n';
    for (Eigen::Index i = 0; i < q.rows(); ++i)
      ss << "q[" << i << "]=" << row_text(q, i) << '\n';
    if (!hull_defined) {
      ss << "in_hull=undefined\n";
    } else if (!hull) {
      ss << "in_hull=false\n";
    } else {
      ss << "in_hull=true\n";
      ss << "interior=" << (interior ? "true" : "false") << '\n';
      ss << "lambda=" << vec_text(hull->lambda) << '\n';
      ss << "mu=" << vec_text(hull->mu) << '\n';
    }
  }
  emit(args.out, ss.str());
  return 0;
}

struct ScanArgs {
  std::string dims = "2..10";
  int samples = 100;
  std::uint64_t seed = 7;
  bool serial = false;
  int threads = 0;
  std::string out;
};

int cmd_scan(const ScanArgs& args, const TolerancePolicy& tol) {
#ifdef _OPENMP
  if (args.threads > 0) omp_set_num_threads(args.threads);
#endif
  const auto rows = conjecture_scan(parse_dims(args.dims), args.samples, args.seed,
                                    args.serial ? ScanMode::serial : ScanMode::openmp, tol);
  emit(args.out, scan_csv(rows));
  return 0;
}

int cmd_spin1_demo(const std::string& out_path, const TolerancePolicy& tol) {
  const double beta0 = std::acos(-1.0 / 3.0);
  const CMat d1 = wigner_small_d(make_spin_frame(1.0, beta0));

  RMat expect(3, 3);
  expect << 1, -2, 2, 2, -1, -2, 2, 2, 1;
  expect /= 3.0;
  const bool matrix_match = max_abs(CMat(d1 - expect.cast<Cx>())) <= 1e-10;

  CMat s1 = CMat::Zero(3, 3), s2 = CMat::Zero(3, 3);
  s1(0, 0) = 1, s1(1, 1) = -1, s1(2, 2) = -1;
  s2(0, 0) = -1, s2(1, 1) = -1, s2(2, 2) = 1;
  const bool sign_identity = max_abs(CMat(d1 - s1 * u_star() * s2)) <= 1e-12;

  const CMat n1 = equivalence_normalize(d1, tol);
  const CMat n2 = equivalence_normalize(u_star(), tol);
  const bool equivalent = max_abs(CMat(n1 - n2)) <= 1e-9;

  const TransitionMatrix tm = make_transition(u_star(), tol);
  const auto pures = enumerate_pure_kd_positive_d3(tm, tol);

  const CMat f = f_perp(tm, tol);
  const CMat rho = CMat::Identity(3, 3) / 3.0 + 0.15 * f;
  const auto cert = beyond_pure_hull_certificate(tm, rho, tol);

  std::ostringstream ss;
  ss << "d1_matrix_match=" << (matrix_match ? "pass" : "fail")
     << " equivalence_to_ustar=" << (equivalent ? "pass" : "fail")
     << " pure_states=" << pures.size() << '\n';
  ss << "sign_diagonal_identity=" << (sign_identity ? "pass" : "fail")
     << " d1=diag(1,-1,-1) d2=diag(-1,-1,1)\n";
  ss << "certificate_state=I/3+0.15*f_perp\n";
  if (cert)
    ss << "certificate=pass s=" << fmt12(cert->s) << " h=" << fmt12(cert->h) << '\n';
  else
    ss << "certificate=fail\n";
  emit(out_path, ss.str());
  return 0;
}

struct FigureArgs {
  std::string which;
  int steps = 101;
  bool serial = false;
  std::string out;
};

int cmd_figure_data(const FigureArgs& args, const TolerancePolicy& tol) {
  if (args.which == "fig2") {
    emit(args.out, hexagon_figure_csv(args.steps));
    return 0;
  }
  if (args.which != "fig1") fail(Err::bad_input, "figure-data: figure must be fig1 or fig2");
  const TransitionMatrix tm = make_transition(u_star(), tol);
  CMat anchor1 = CMat::Zero(3, 3), anchor2 = CMat::Zero(3, 3);
  anchor1(0, 0) = 0.5, anchor1(1, 1) = 0.5;  // (P_a1 + P_a2) / 2
  anchor2(2, 2) = 1.0;                       // P_a3
  const auto rows = section_scan(tm, anchor1, anchor2, args.steps, tol,
                                 args.serial ? ScanMode::serial : ScanMode::openmp);
  emit(args.out, section_csv(rows));
  return 0;
}

int cmd_enumerate_pure(const std::string& matrix, const std::string& out_path,
                       const TolerancePolicy& tol) {
  const TransitionMatrix tm = make_transition(matrix_from_spec(matrix), tol);
  const auto states = enumerate_pure_kd_positive_d3(tm, tol);
  json arr = json::array();
  for (const auto& st : states) {
    json item;
    item["n_a"] = st.n_a;
    item["n_b"] = st.n_b;
    item["is_basis"] = st.is_basis;
    item["projector"] = matrix_json(projector(st.psi));
    arr.push_back(std::move(item));
  }
  emit(out_path, arr.dump() + "\n");
  return 0;
}

int cmd_certify(const std::string& matrix, const std::string& state_path,
                const std::string& out_path, const TolerancePolicy& tol) {
  const TransitionMatrix tm = make_transition(matrix_from_spec(matrix), tol);
  const CMat rho = load_matrix(state_path);
  require_density(rho, tol, "certify");
  const auto cert = beyond_pure_hull_certificate(tm, rho, tol);
  json out;
  out["certified"] = static_cast<bool>(cert);
  if (cert) {
    out["s"] = cert->s;
    out["h"] = cert->h;
    out["f_perp"] = matrix_json(cert->f);
  } else {
    const CMat f = f_perp(tm, tol);
    double h = 0.0;
    for (const auto& st : enumerate_pure_kd_positive_d3(tm, tol))
      h = std::max(h, (projector(st.psi) * f).trace().real());
    out["s"] = (rho * f).trace().real();
    out["h"] = h;
  }
  emit(out_path, out.dump() + "\n");
  return 0;
}

int cmd_dft_structure(int p, const std::string& out_path, const TolerancePolicy& tol) {
  const TransitionMatrix tm = make_transition(dft(p), tol);
  const StructureReport rep = verify_dft_kernel_structure(tm, tol);
  std::ostringstream ss;
  ss << "p=" << p << '\n';
  ss << "dim_expected=" << rep.dim_expected << '\n';
  ss << "dim_kernel=" << rep.dim_kernel << '\n';
  ss << "projector_residual=" << fmt12(rep.projector_residual) << '\n';
  ss << "constraint_residual=" << fmt12(rep.constraint_residual) << '\n';
  ss << "match=" << (rep.match ? "pass" : "fail") << '\n';
  emit(out_path, ss.str());
  return rep.match ? 0 : 3;
}

int cmd_hexagon_check(const std::string& out_path, const TolerancePolicy& tol) {
  const TransitionMatrix tm = make_transition(u_star(), tol);
  const HexagonCheck hc = y_plus_hexagon_check(tm, tol);
  std::ostringstream ss;
  ss << "x_max=" << fmt12(0.5 / std::sqrt(6.0)) << '\n';
  ss << "extremes_ok=" << hc.extremes_ok << '\n';
  ss << "probes_rejected=" << hc.probes_rejected << '\n';
  ss << "max_trace_err=" << fmt12(hc.max_trace_err) << '\n';
  ss << "worst_min_eigenvalue=" << fmt12(hc.worst_min_eigenvalue) << '\n';
  ss << "pass=" << (hc.pass ? "true" : "false") << '\n';
  emit(out_path, ss.str());
  return hc.pass ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kirkwood-Dirac positivity geometry toolkit"};
  app.require_subcommand(1);

  AnalyzeArgs analyze_args;
  auto* analyze = app.add_subcommand("analyze", "Frame summary and optional state report");
  analyze->add_option("--matrix", analyze_args.matrix, "Matrix spec (dft:5, ustar, ...)")
      ->required();
  analyze->add_option("--state", analyze_args.state_path, "Density matrix JSON file");
  analyze->add_option("--format", analyze_args.format, "Output format")
      ->check(CLI::IsMember({"pretty", "json"}));
  analyze->add_option("--out", analyze_args.out, "Write output to this file");

  ScanArgs scan_args;
  auto* scan = app.add_subcommand("scan", "Random-frame dim V_KDr scan, CSV output");
  scan->add_option("--dims", scan_args.dims, "Dimensions: 2..10 or 3 or 2,4,8");
  scan->add_option("--samples", scan_args.samples, "Samples per dimension")
      ->check(CLI::NonNegativeNumber);
  scan->add_option("--seed", scan_args.seed, "Base seed");
  scan->add_flag("--serial", scan_args.serial, "Single-threaded reference path");
  scan->add_option("--threads", scan_args.threads, "Worker count (0 = default)");
  scan->add_option("--out", scan_args.out, "Write CSV to this file");

  std::string spin_out;
  auto* spin_demo = app.add_subcommand("spin1-demo", "Spin-1 frame checks and certificate demo");
  spin_demo->add_option("--out", spin_out, "Write output to this file");

  FigureArgs figure_args;
  auto* figure = app.add_subcommand("figure-data", "Section / hexagon figure data, CSV output");
  figure->add_option("--figure", figure_args.which, "fig1 or fig2")->required();
  figure->add_option("--steps", figure_args.steps, "Grid steps")->check(CLI::PositiveNumber);
  figure->add_flag("--serial", figure_args.serial, "Single-threaded reference path");
  figure->add_option("--out", figure_args.out, "Write CSV to this file");

  std::string enum_matrix, enum_out;
  auto* enumerate = app.add_subcommand("enumerate-pure", "Pure KD-positive states (d=3), JSON");
  enumerate->add_option("--matrix", enum_matrix, "Matrix spec")->required();
  enumerate->add_option("--out", enum_out, "Write JSON to this file");

  std::string certify_matrix, certify_state, certify_out;
  auto* certify = app.add_subcommand("certify", "Beyond-pure-hull certificate, JSON");
  certify->add_option("--matrix", certify_matrix, "Matrix spec")->required();
  certify->add_option("--state", certify_state, "Density matrix JSON file")->required();
  certify->add_option("--out", certify_out, "Write JSON to this file");

  int dft_p = 0;
  std::string dft_out;
  auto* dft_structure = app.add_subcommand("dft-structure", "Kernel structure check for dft(p)");
  dft_structure->add_option("--p", dft_p, "Prime dimension")->required();
  dft_structure->add_option("--out", dft_out, "Write output to this file");

  std::string hex_out;
  auto* hexagon = app.add_subcommand("hexagon-check", "Top-facet hexagon verification for ustar");
  hexagon->add_option("--out", hex_out, "Write output to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    const TolerancePolicy tol = tolerances_from_env();
    if (app.got_subcommand(analyze)) return cmd_analyze(analyze_args, tol);
    if (app.got_subcommand(scan)) return cmd_scan(scan_args, tol);
    if (app.got_subcommand(spin_demo)) return cmd_spin1_demo(spin_out, tol);
    if (app.got_subcommand(figure)) return cmd_figure_data(figure_args, tol);
    if (app.got_subcommand(enumerate)) return cmd_enumerate_pure(enum_matrix, enum_out, tol);
    if (app.got_subcommand(certify)) return cmd_certify(certify_matrix, certify_state, certify_out, tol);
    if (app.got_subcommand(dft_structure)) return cmd_dft_structure(dft_p, dft_out, tol);
    if (app.got_subcommand(hexagon)) return cmd_hexagon_check(hex_out, tol);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.numeric() ? 3 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
