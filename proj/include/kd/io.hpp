// Matrix JSON exchange format:
//   { "dim": d, "re": [[...]], "im": [[...]] }
// with row-major d x d arrays of IEEE doubles.  Serialization uses the
// shortest round-trip representation, so a save/load cycle is bit-exact.

#pragma once

#include <string>

#include "kd/common.hpp"

namespace kd {

std::string matrix_to_json(const CMat& m);
CMat matrix_from_json(const std::string& text);

void save_matrix(const std::string& path, const CMat& m);
CMat load_matrix(const std::string& path);

void write_text_file(const std::string& path, const std::string& text);

}  // namespace kd
