#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>

namespace qcar {

/// Stable textual form of a double: %.12g, so runs with identical inputs produce
/// byte-identical files. Non-finite values print as nan/inf/-inf.
std::string format_double(double v);

/// Comma-separated writer with '#' comment lines for provenance. All errors surface as
/// ConfigError (the path is user-controlled input).
class CsvWriter {
 public:
  /// Opens/truncates `path`, writes one comment line per entry of `comments`, then the
  /// header row.
  CsvWriter(const std::filesystem::path& path, std::span<const std::string> comments,
            std::string_view header);
  ~CsvWriter();

  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void row(std::span<const double> values);
  void row(std::initializer_list<double> values);
  /// Row with a leading string cell.
  void row(std::string_view label, std::span<const double> values);
  void row(std::string_view label, std::initializer_list<double> values);

  /// Flushes and verifies the stream; further rows are invalid. Called by the destructor,
  /// but calling it explicitly surfaces I/O failures as exceptions.
  void close();

 private:
  std::ofstream out_;
  std::filesystem::path path_;
  bool closed_ = false;
};

}  // namespace qcar
