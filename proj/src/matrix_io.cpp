#include "sscheck/matrix_io.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

namespace sscheck {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

double parse_number(const std::string& tok, std::size_t line, std::size_t col) {
  const std::string t = trim(tok);
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE) {
    std::ostringstream msg;
    msg << "line " << line << ", column " << col << ": cannot parse '" << t << "' as a number";
    throw ParseError(msg.str());
  }
  return v;
}

void check_entry(double v, std::size_t row, std::size_t col) {
  if (v < 0.0) {
    std::ostringstream msg;
    msg << "row " << row << ", column " << col << ": negative entry " << v << " (H must be nonnegative)";
    throw ParseError(msg.str());
  }
}

}  // namespace

MatrixFormat format_from_name(const std::string& name) {
  const std::string n = lower(name);
  if (n == "csv") return MatrixFormat::Csv;
  if (n == "matrixmarket" || n == "mtx" || n == "mm") return MatrixFormat::MatrixMarket;
  throw Error("unknown matrix format '" + name + "' (expected csv or matrixmarket)");
}

MatrixFormat format_from_path(const std::string& path) {
  const auto dot = path.rfind('.');
  if (dot != std::string::npos) {
    const std::string ext = lower(path.substr(dot + 1));
    if (ext == "mtx" || ext == "mm") return MatrixFormat::MatrixMarket;
  }
  return MatrixFormat::Csv;
}

Matrix read_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::vector<double> row;
    std::stringstream ss(t);
    std::string tok;
    std::size_t col = 0;
    while (std::getline(ss, tok, ',')) {
      ++col;
      const double v = parse_number(tok, lineno, col);
      check_entry(v, rows.size() + 1, col);
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      std::ostringstream msg;
      msg << "line " << lineno << ": expected " << rows.front().size() << " columns, found " << row.size();
      throw ParseError(msg.str());
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("empty matrix file");
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return m;
}

Matrix read_matrix_market(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw ParseError("empty MatrixMarket file");
  ++lineno;
  std::istringstream banner(lower(line));
  std::string tag, object, layout, field, symmetry;
  banner >> tag >> object >> layout >> field >> symmetry;
  if (tag != "%%matrixmarket" || object != "matrix") throw ParseError("line 1: missing %%MatrixMarket matrix banner");
  if (layout != "array" && layout != "coordinate") throw ParseError("line 1: unsupported layout '" + layout + "'");
  if (field != "real" && field != "integer" && field != "double") {
    throw ParseError("line 1: unsupported field '" + field + "'");
  }
  if (symmetry != "general") throw ParseError("line 1: only general symmetry is supported");

  auto next_data_line = [&](std::string& out) {
    while (std::getline(in, out)) {
      ++lineno;
      const std::string t = trim(out);
      if (!t.empty() && t[0] != '%') {
        out = t;
        return true;
      }
    }
    return false;
  };

  if (!next_data_line(line)) throw ParseError("MatrixMarket file has no size line");
  std::istringstream size_line(line);
  long rows = -1, cols = -1, nnz = -1;
  size_line >> rows >> cols;
  if (layout == "coordinate") size_line >> nnz;
  if (rows <= 0 || cols <= 0 || (layout == "coordinate" && nnz < 0)) {
    throw ParseError("line " + std::to_string(lineno) + ": malformed size line");
  }

  Matrix m = Matrix::Zero(rows, cols);
  if (layout == "array") {
    // Column-major order.
    for (long j = 0; j < cols; ++j) {
      for (long i = 0; i < rows; ++i) {
        if (!next_data_line(line)) throw ParseError("MatrixMarket array ends early");
        const double v = parse_number(line, lineno, 1);
        check_entry(v, static_cast<std::size_t>(i + 1), static_cast<std::size_t>(j + 1));
        m(i, j) = v;
      }
    }
  } else {
    for (long e = 0; e < nnz; ++e) {
      if (!next_data_line(line)) throw ParseError("MatrixMarket coordinate list ends early");
      std::istringstream ls(line);
      long i = 0, j = 0;
      std::string val;
      ls >> i >> j >> val;
      if (i < 1 || i > rows || j < 1 || j > cols) {
        throw ParseError("line " + std::to_string(lineno) + ": index out of range");
      }
      const double v = parse_number(val, lineno, 3);
      check_entry(v, static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      m(i - 1, j - 1) = v;
    }
  }
  return m;
}

Matrix read_matrix(const std::string& path, MatrixFormat format) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "' for reading");
  return format == MatrixFormat::Csv ? read_csv(in) : read_matrix_market(in);
}

void write_csv(std::ostream& out, const Matrix& m) {
  char buf[40];
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
      if (j) out << ',';
      out << buf;
    }
    out << '\n';
  }
}

void write_matrix_market(std::ostream& out, const Matrix& m) {
  char buf[40];
  out << "%%MatrixMarket matrix array real general\n" << m.rows() << ' ' << m.cols() << '\n';
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
      out << buf << '\n';
    }
  }
}

void write_matrix(const std::string& path, const Matrix& m, MatrixFormat format) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  if (format == MatrixFormat::Csv) {
    write_csv(out, m);
  } else {
    write_matrix_market(out, m);
  }
  if (!out) throw Error("failed writing '" + path + "'");
}

}  // namespace sscheck
