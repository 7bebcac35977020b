#include "dkbound/matrix_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

namespace dkbound::io {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& token, int line) {
  const std::string t = trim(token);
  double v = 0.0;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || t.empty()) {
    std::ostringstream os;
    os << "line " << line << ": cannot parse number '" << t << "'";
    throw std::invalid_argument(os.str());
  }
  return v;
}

void format_double(std::ostream& out, double v) {
  out << std::setprecision(17) << v;
}

}  // namespace

Matrix read_matrix_market(std::istream& in) {
  std::string line;
  int lineno = 0;
  if (!std::getline(in, line)) throw std::invalid_argument("empty Matrix Market stream");
  ++lineno;
  std::istringstream banner(line);
  std::string tag, object, format, field, symmetry;
  banner >> tag >> object >> format >> field >> symmetry;
  if (tag != "%%MatrixMarket" || lower(object) != "matrix") {
    throw std::invalid_argument("missing %%MatrixMarket matrix banner");
  }
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  if (format != "coordinate" && format != "array") {
    throw std::invalid_argument("unsupported Matrix Market format: " + format);
  }
  if (field != "real" && field != "integer" && field != "double" &&
      !(field == "pattern" && format == "coordinate")) {
    throw std::invalid_argument("unsupported Matrix Market field: " + field);
  }
  if (symmetry != "general" && symmetry != "symmetric") {
    throw std::invalid_argument("unsupported Matrix Market symmetry: " + symmetry);
  }
  const bool sym = symmetry == "symmetric";

  // Skip comments to the size line.
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (!t.empty() && t[0] != '%') break;
  }
  std::istringstream size_line(line);
  long rows = 0, cols = 0, nnz = 0;
  size_line >> rows >> cols;
  if (format == "coordinate") size_line >> nnz;
  if (!size_line || rows <= 0 || cols <= 0) {
    throw std::invalid_argument("invalid Matrix Market size line");
  }
  Matrix m = Matrix::Zero(rows, cols);

  auto next_data_line = [&](std::string& out) {
    while (std::getline(in, out)) {
      ++lineno;
      const std::string t = trim(out);
      if (!t.empty() && t[0] != '%') return true;
    }
    return false;
  };

  if (format == "coordinate") {
    for (long k = 0; k < nnz; ++k) {
      if (!next_data_line(line)) throw std::invalid_argument("truncated Matrix Market body");
      std::istringstream row(line);
      long i = 0, j = 0;
      std::string value_token;
      row >> i >> j;
      double v = 1.0;
      if (field != "pattern") {
        row >> value_token;
        v = parse_double(value_token, lineno);
      }
      if (!row || i < 1 || j < 1 || i > rows || j > cols) {
        std::ostringstream os;
        os << "line " << lineno << ": bad coordinate entry";
        throw std::invalid_argument(os.str());
      }
      m(i - 1, j - 1) = v;
      if (sym) m(j - 1, i - 1) = v;
    }
  } else {
    for (long j = 0; j < cols; ++j) {
      for (long i = sym ? j : 0; i < rows; ++i) {
        if (!next_data_line(line)) throw std::invalid_argument("truncated Matrix Market body");
        const double v = parse_double(line, lineno);
        m(i, j) = v;
        if (sym) m(j, i) = v;
      }
    }
  }
  return m;
}

void write_matrix_market(std::ostream& out, const SymmetricMatrix& m) {
  const int n = m.order();
  out << "%%MatrixMarket matrix array real symmetric\n";
  out << n << " " << n << "\n";
  for (int j = 0; j < n; ++j) {
    for (int i = j; i < n; ++i) {
      format_double(out, m(i, j));
      out << "\n";
    }
  }
}

Matrix read_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(parse_double(cell, lineno));
    rows.push_back(std::move(row));
  }
  const auto n = rows.size();
  if (n == 0) throw std::invalid_argument("empty CSV matrix");
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) {
      std::ostringstream os;
      os << "CSV matrix is not square: row " << i + 1 << " has " << rows[i].size()
         << " entries, expected " << n;
      throw std::invalid_argument(os.str());
    }
    for (std::size_t j = 0; j < n; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

void write_csv(std::ostream& out, const Matrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ",";
      format_double(out, m(i, j));
    }
    out << "\n";
  }
}

namespace {
bool is_mtx(const std::string& path) {
  return path.size() >= 4 && lower(path.substr(path.size() - 4)) == ".mtx";
}
}  // namespace

SymmetricMatrix load_symmetric(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open matrix file: " + path);
  const Matrix m = is_mtx(path) ? read_matrix_market(in) : read_csv(in);
  return SymmetricMatrix::from_dense(m);
}

void save_symmetric(const std::string& path, const SymmetricMatrix& m) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write matrix file: " + path);
  if (is_mtx(path)) {
    write_matrix_market(out, m);
  } else {
    write_csv(out, m.dense());
  }
}

}  // namespace dkbound::io
