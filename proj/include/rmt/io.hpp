#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "rmt/linalg.hpp"

namespace rmt::io {

/// Splits one CSV record on commas. Double-quoted fields may contain commas;
/// surrounding whitespace and a trailing '\r' are stripped.
std::vector<std::string> split_csv_line(std::string_view line);

/// Parses a finite double; empty, "NA", "nan" and "inf" are rejected with
/// Errc::ParseError naming `context`.
double parse_double(std::string_view text, std::string_view context);

/// Dense matrix from a headerless comma-separated file.
Matrix read_matrix_csv(const std::filesystem::path& path);

/// Writes a matrix with %.17g so it round-trips exactly.
void write_matrix_csv(const std::filesystem::path& path, const Matrix& m);

/// Formats a double with 17 significant digits.
std::string fmt(double x);

/// Opens a file for writing, creating parent directories; throws on failure.
std::ofstream open_output(const std::filesystem::path& path);

}  // namespace rmt::io
