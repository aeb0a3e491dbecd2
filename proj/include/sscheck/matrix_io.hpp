// Dense matrix files: CSV (rows of the file are rows of H) and MatrixMarket
// (array or coordinate, real or integer, general symmetry).

#pragma once

#include "sscheck/core.hpp"

#include <iosfwd>
#include <string>

namespace sscheck {

enum class MatrixFormat { Csv, MatrixMarket };

class ParseError : public Error {
 public:
  using Error::Error;
};

MatrixFormat format_from_name(const std::string& name);
/// Guess from the extension (.mtx / .mm means MatrixMarket, anything else CSV).
MatrixFormat format_from_path(const std::string& path);

Matrix read_csv(std::istream& in);
Matrix read_matrix_market(std::istream& in);
Matrix read_matrix(const std::string& path, MatrixFormat format);

/// Values are written with 17 significant digits so they round-trip exactly.
void write_csv(std::ostream& out, const Matrix& m);
void write_matrix_market(std::ostream& out, const Matrix& m);
void write_matrix(const std::string& path, const Matrix& m, MatrixFormat format);

}  // namespace sscheck
