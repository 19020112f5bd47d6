#pragma once

#include <string>
#include <vector>

namespace dyadic::io {

/// Shortest text that round-trips is not always 17 digits; this always writes 17 significant digits.
std::string format_double(double x);

class CsvWriter {
 public:
  /// `comment` (may be empty) becomes a leading "# ..." line.
  CsvWriter(const std::vector<std::string>& columns, const std::string& comment = "");
  void row(const std::vector<double>& values);
  /// Row whose second column is an integer (the shell index).
  void row(double t, int n, const std::vector<double>& values);
  const std::string& str() const { return buf_; }

 private:
  std::size_t width_;
  std::string buf_;
};

/// Writes via a temporary file in the same directory and rename(2). Throws Input on I/O failure.
void write_file_atomic(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

/// Creates the directory (and parents) if missing.
void ensure_directory(const std::string& dir);

}  // namespace dyadic::io
