#include "kd/io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace kd {

namespace {

using nlohmann::json;

json dense_to_rows(const CMat& m, bool imag_part) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      row.push_back(imag_part ? m(i, j).imag() : m(i, j).real());
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void fill_part(const json& rows, CMat& m, bool imag_part) {
  const auto d = m.rows();
  if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != d)
    fail(Err::bad_input, "matrix json: part has wrong row count");
  for (Eigen::Index i = 0; i < d; ++i) {
    const json& row = rows[static_cast<size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != d)
      fail(Err::bad_input, "matrix json: part has wrong column count");
    for (Eigen::Index j = 0; j < d; ++j) {
      const json& cell = row[static_cast<size_t>(j)];
      if (!cell.is_number())
        fail(Err::bad_input, "matrix json: non-numeric entry");
      const double v = cell.get<double>();
      if (!std::isfinite(v)) fail(Err::bad_input, "matrix json: non-finite entry");
      if (imag_part)
        m(i, j) += Cx(0.0, v);
      else
        m(i, j) += Cx(v, 0.0);
    }
  }
}

}  // namespace

std::string matrix_to_json(const CMat& m) {
  require_square(m, "matrix_to_json");
  json out;
  out["dim"] = m.rows();
  out["re"] = dense_to_rows(m, false);
  out["im"] = dense_to_rows(m, true);
  return out.dump();
}

CMat matrix_from_json(const std::string& text) {
  json in;
  try {
    in = json::parse(text);
  } catch (const json::exception& e) {
    fail(Err::bad_input, std::string("matrix json: parse error: ") + e.what());
  }
  if (!in.is_object() || !in.contains("dim") || !in.contains("re") || !in.contains("im"))
    fail(Err::bad_input, "matrix json: need object with dim, re, im");
  if (!in["dim"].is_number_integer())
    fail(Err::bad_input, "matrix json: dim must be an integer");
  const long long dim = in["dim"].get<long long>();
  if (dim < 1 || dim > 64) fail(Err::bad_input, "matrix json: dim out of range");
  CMat m = CMat::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  fill_part(in["re"], m, false);
  fill_part(in["im"], m, true);
  return m;
}

void save_matrix(const std::string& path, const CMat& m) {
  write_text_file(path, matrix_to_json(m));
}

CMat load_matrix(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail(Err::bad_input, "cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return matrix_from_json(ss.str());
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) fail(Err::bad_input, "cannot open " + path + " for writing");
  f << text;
  if (!f) fail(Err::bad_input, "write to " + path + " failed");
}

}  // namespace kd
