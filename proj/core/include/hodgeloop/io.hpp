#pragma once

#include "hodgeloop/complex.hpp"
#include "hodgeloop/types.hpp"

#include <filesystem>
#include <optional>
#include <string>

namespace hodgeloop {

/// Render a double with 17 significant digits (round-trip safe).
std::string format_double(double v);

/// Write content to path atomically (temp file in the same directory, then
/// rename).
void atomic_write(const std::filesystem::path& path, const std::string& content);

/// FNV-1a 64-bit digest of a file's bytes, as 16 hex characters.
std::string file_digest(const std::filesystem::path& path);

/// Numeric CSV (one row per line, comma separated). skip_header drops the
/// first line. Ragged rows raise InputError.
Mat read_csv_matrix(const std::filesystem::path& path, bool skip_header = false);

/// Matrix as CSV with 17-significant-digit floats.
std::string csv_from_matrix(const Mat& m);
void write_csv_matrix(const std::filesystem::path& path, const Mat& m);

/// PGM image, P2 (ASCII) or P5 (binary, 1- or 2-byte samples).
GrayImage read_pgm(const std::filesystem::path& path);

/// Complex JSON: {format_version, kind, vertices, edges, cells2}.
std::string complex_to_json(const Complex2& complex);
Complex2 complex_from_json_text(const std::string& text);
Complex2 read_complex_json(const std::filesystem::path& path);
void write_complex_json(const std::filesystem::path& path, const Complex2& complex);

/// Matrix Market coordinate output (1-based indices).
std::string matrix_market_integer(const SpMatInt& m);
std::string matrix_market_real(const SpMat& m);

/// Matrix Market coordinate input (integer or real entries).
SpMat read_matrix_market(const std::filesystem::path& path);

}  // namespace hodgeloop
