#pragma once

#include "sketchls/dense_core.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace sketchls {

// Matrix Market "array real general" files. Values are written column-major
// in scientific notation with 17 significant digits, which round-trips every
// double exactly. Parse failures carry the 1-based line number.

DenseMatrix read_matrix(std::istream& in);
DenseMatrix read_matrix(const std::filesystem::path& path);

void write_matrix(std::ostream& out, const DenseMatrix& m);
void write_matrix(const std::filesystem::path& path, const DenseMatrix& m);

/// Shortest decimal string that parses back to the same double ("nan"/"inf" for non-finite).
std::string format_double(double v);

} // namespace sketchls
