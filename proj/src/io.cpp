#include "ratiosparse/io.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include "ratiosparse/errors.hpp"

namespace ratiosparse {

namespace {

constexpr char kMagic[4] = {'R', 'S', 'B', '1'};

void put_u32(std::ostream& os, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 4);
}

void put_u64(std::ostream& os, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 8);
}

std::uint32_t get_u32(std::istream& is) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

std::uint64_t get_u64(std::istream& is) {
  unsigned char b[8];
  is.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

void put_f64(std::ostream& os, double x) {
  std::uint64_t bits;
  std::memcpy(&bits, &x, 8);
  put_u64(os, bits);
}

double get_f64(std::istream& is) {
  const std::uint64_t bits = get_u64(is);
  double x;
  std::memcpy(&x, &bits, 8);
  return x;
}

void save_bin_impl(const std::string& path, std::uint32_t ndim,
                   const std::vector<std::uint64_t>& dims,
                   const double* data_row_major, std::size_t count) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ParamError("cannot open for writing: " + path);
  os.write(kMagic, 4);
  put_u32(os, ndim);
  for (auto d : dims) put_u64(os, d);
  for (std::size_t i = 0; i < count; ++i) put_f64(os, data_row_major[i]);
  if (!os) throw ParamError("write failed: " + path);
}

std::ifstream open_bin(const std::string& path, std::uint32_t* ndim) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ParamError("cannot open: " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0) {
    throw ParamError("bad magic bytes in " + path);
  }
  *ndim = get_u32(is);
  return is;
}

}  // namespace

void save_bin(const std::string& path, const Matrix& a) {
  // Row-major payload regardless of Eigen's storage.
  std::vector<double> rm(static_cast<std::size_t>(a.size()));
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      rm[static_cast<std::size_t>(i) * a.cols() + j] = a(i, j);
    }
  }
  save_bin_impl(path, 2,
                {static_cast<std::uint64_t>(a.rows()),
                 static_cast<std::uint64_t>(a.cols())},
                rm.data(), rm.size());
}

void save_bin(const std::string& path, const Vector& v) {
  save_bin_impl(path, 1, {static_cast<std::uint64_t>(v.size())}, v.data(),
                static_cast<std::size_t>(v.size()));
}

Matrix load_bin_matrix(const std::string& path) {
  std::uint32_t ndim = 0;
  std::ifstream is = open_bin(path, &ndim);
  if (ndim != 2) throw ParamError("expected a matrix in " + path);
  const auto rows = static_cast<Index>(get_u64(is));
  const auto cols = static_cast<Index>(get_u64(is));
  Matrix a(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) a(i, j) = get_f64(is);
  }
  if (!is) throw ParamError("truncated file: " + path);
  return a;
}

Vector load_bin_vector(const std::string& path) {
  std::uint32_t ndim = 0;
  std::ifstream is = open_bin(path, &ndim);
  if (ndim != 1) throw ParamError("expected a vector in " + path);
  const auto len = static_cast<Index>(get_u64(is));
  Vector v(len);
  for (Index i = 0; i < len; ++i) v[i] = get_f64(is);
  if (!is) throw ParamError("truncated file: " + path);
  return v;
}

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void save_csv(const std::string& path, const Matrix& a) {
  std::ostringstream os;
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      if (j) os << ',';
      os << fmt_double(a(i, j));
    }
    os << '\n';
  }
  write_text_file(path, os.str());
}

void save_csv(const std::string& path, const Vector& v) {
  std::ostringstream os;
  for (Index i = 0; i < v.size(); ++i) os << fmt_double(v[i]) << '\n';
  write_text_file(path, os.str());
}

Matrix load_csv_matrix(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ParamError("cannot open: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParamError("ragged CSV: " + path);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParamError("empty CSV: " + path);
  Matrix a(static_cast<Index>(rows.size()),
           static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      a(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  return a;
}

void save_pgm16(const std::string& path, const ImageGrid& img) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ParamError("cannot open for writing: " + path);
  os << "P5\n" << img.cols() << ' ' << img.rows() << "\n65535\n";
  for (Index i = 0; i < img.rows(); ++i) {
    for (Index j = 0; j < img.cols(); ++j) {
      const double clamped = std::min(1.0, std::max(0.0, img(i, j)));
      const auto q = static_cast<std::uint16_t>(std::lround(clamped * 65535.0));
      // PGM samples are big-endian
      const unsigned char hi = static_cast<unsigned char>(q >> 8);
      const unsigned char lo = static_cast<unsigned char>(q & 0xff);
      os.put(static_cast<char>(hi));
      os.put(static_cast<char>(lo));
    }
  }
  if (!os) throw ParamError("write failed: " + path);
}

void save_pbm(const std::string& path, const BoolGrid& mask) {
  std::ostringstream os;
  os << "P1\n" << mask.cols() << ' ' << mask.rows() << '\n';
  for (Index i = 0; i < mask.rows(); ++i) {
    for (Index j = 0; j < mask.cols(); ++j) {
      os << (mask(i, j) ? '1' : '0');
      os << (j + 1 == mask.cols() ? '\n' : ' ');
    }
  }
  write_text_file(path, os.str());
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ParamError("cannot open for writing: " + path);
  os.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!os) throw ParamError("write failed: " + path);
}

}  // namespace ratiosparse
