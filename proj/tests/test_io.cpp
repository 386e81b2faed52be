#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <random>

#include "json.hpp"

#include "kd/bases.hpp"
#include "kd/io.hpp"
#include "kd/linalg.hpp"

using namespace kd;

namespace {

std::filesystem::path temp_json(const char* stem) {
  return std::filesystem::temp_directory_path() / (std::string(stem) + ".json");
}

void check_bad_input(const std::string& text) {
  CHECK_THROWS_AS(matrix_from_json(text), Error);
  try {
    matrix_from_json(text);
  } catch (const Error& e) {
    CHECK(e.code == Err::bad_input);
  }
}

}  // namespace

TEST_CASE("matrix json round trip is bit exact") {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> gauss;
  for (int d : {1, 2, 5, 8}) {
    CMat m(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) m(i, j) = Cx(gauss(rng), gauss(rng));
    CMat back = matrix_from_json(matrix_to_json(m));
    REQUIRE(back.rows() == d);
    REQUIRE(back.cols() == d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        CHECK(back(i, j).real() == m(i, j).real());
        CHECK(back(i, j).imag() == m(i, j).imag());
      }
  }
}

TEST_CASE("matrix json preserves awkward values") {
  CMat m(2, 2);
  m << Cx(1.0 / 3.0, -0.0), Cx(1e-300, 2.2250738585072014e-308),
      Cx(-17.0, 9007199254740992.0), Cx(0.1 + 0.2, 1e308);
  CMat back = matrix_from_json(matrix_to_json(m));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      CHECK(back(i, j).real() == m(i, j).real());
      CHECK(back(i, j).imag() == m(i, j).imag());
    }
}

TEST_CASE("matrix json layout") {
  CMat m(2, 2);
  m << Cx(1, 5), Cx(2, 6), Cx(3, 7), Cx(4, 8);
  auto j = nlohmann::json::parse(matrix_to_json(m));
  CHECK(j["dim"] == 2);
  CHECK(j["re"][0][1] == 2.0);
  CHECK(j["re"][1][0] == 3.0);
  CHECK(j["im"][1][1] == 8.0);
}

TEST_CASE("matrix json rejects malformed input") {
  check_bad_input("{not json at all");
  check_bad_input(R"({"re": [[1]], "im": [[0]]})");                 // no dim
  check_bad_input(R"({"dim": 2, "re": [[1, 0]], "im": [[0, 0]]})"); // missing row
  check_bad_input(R"({"dim": 1, "re": [[1, 2]], "im": [[0, 0]]})"); // extra column
  check_bad_input(R"({"dim": 1, "re": [["x"]], "im": [[0]]})");     // non-numeric
  check_bad_input(R"({"dim": 1, "re": [[1]]})");                    // no im
  check_bad_input(R"({"dim": 0, "re": [], "im": []})");             // dim too small
  check_bad_input(R"({"dim": 65, "re": [], "im": []})");            // dim too large
  check_bad_input(R"({"dim": 1.5, "re": [[1]], "im": [[0]]})");     // fractional dim
  check_bad_input(R"({"dim": 1, "re": 3, "im": [[0]]})");           // re not an array
  check_bad_input("[1, 2, 3]");                                     // not an object
}

TEST_CASE("load_matrix maps file problems to bad_input") {
  auto path = temp_json("kd_io_garbage");
  write_text_file(path.string(), "{oops");
  CHECK_THROWS_AS(load_matrix(path.string()), Error);
  std::remove(path.string().c_str());
  CHECK_THROWS_AS(load_matrix("/nonexistent/dir/m.json"), Error);
}

TEST_CASE("save and load through a file") {
  auto path = temp_json("kd_io_roundtrip");
  CMat u = haar_random(4, 99);
  save_matrix(path.string(), u);
  CMat back = load_matrix(path.string());
  CHECK(max_abs(CMat(back - u)) == 0.0);
  std::remove(path.string().c_str());
}
