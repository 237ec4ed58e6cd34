#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "rpfm/linalg.hpp"

namespace rpfm {

/// Reads a real Matrix Market file densely. Coordinate entries not listed are
/// zero; symmetric and skew-symmetric storage is expanded. Integer fields are
/// accepted as real. Complex and pattern fields raise UnsupportedFormat.
DenseMatrix read_matrix_market(std::istream& in, const std::string& source = "<stream>");
DenseMatrix load_matrix_market(const std::filesystem::path& path);

/// Reads an n×1 (or 1×n) Matrix Market object, array or coordinate.
Vector read_vector(std::istream& in, const std::string& source = "<stream>");
Vector load_vector(const std::filesystem::path& path);

/// Coordinate real general, nonzeros only, values printed with 17 significant digits.
void write_matrix_market(std::ostream& out, const DenseMatrix& a);
void save_matrix_market(const DenseMatrix& a, const std::filesystem::path& path);

/// Array real general, one value per line.
void write_vector(std::ostream& out, const Vector& v);
void save_vector(const Vector& v, const std::filesystem::path& path);

}  // namespace rpfm
