#pragma once

#include <string>

#include "ratiosparse/grad2d.hpp"
#include "ratiosparse/types.hpp"

namespace ratiosparse {

// Binary container for vectors/matrices (little-endian):
//   bytes 0..3   magic "RSB1"
//   bytes 4..7   u32 ndim (1 = vector, 2 = matrix)
//   then         u64 dims[ndim]   (rows, cols; row-major payload)
//   then         f64 payload
void save_bin(const std::string& path, const Matrix& a);
void save_bin(const std::string& path, const Vector& v);
Matrix load_bin_matrix(const std::string& path);
Vector load_bin_vector(const std::string& path);

// CSV with one row per matrix row, %.17g entries (lossless round trip).
void save_csv(const std::string& path, const Matrix& a);
void save_csv(const std::string& path, const Vector& v);
Matrix load_csv_matrix(const std::string& path);

// 16-bit binary PGM (maxval 65535, big-endian samples per the format);
// pixels are clamped to [0,1] before quantization.
void save_pgm16(const std::string& path, const ImageGrid& img);

// Plain PBM (P1); 1 = kept frequency.
void save_pbm(const std::string& path, const BoolGrid& mask);

// %.17g formatting used by every CSV writer (deterministic).
std::string fmt_double(double x);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace ratiosparse
