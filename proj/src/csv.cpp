#include "qcar/csv.hpp"

#include <cstdio>

#include "qcar/errors.hpp"

namespace qcar {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, std::span<const std::string> comments,
                     std::string_view header)
    : path_(path) {
  out_.open(path, std::ios::out | std::ios::trunc | std::ios::binary);
  if (!out_) {
    throw ConfigError("cannot open '" + path.string() + "' for writing");
  }
  for (const std::string& line : comments) {
    out_ << "# " << line << '\n';
  }
  out_ << header << '\n';
}

CsvWriter::~CsvWriter() {
  if (!closed_) {
    out_.flush();  // best effort; use close() to surface failures
  }
}

void CsvWriter::row(std::span<const double> values) {
  bool first = true;
  for (double v : values) {
    if (!first) out_ << ',';
    out_ << format_double(v);
    first = false;
  }
  out_ << '\n';
}

void CsvWriter::row(std::initializer_list<double> values) {
  row(std::span<const double>(values.begin(), values.size()));
}

void CsvWriter::row(std::string_view label, std::span<const double> values) {
  out_ << label;
  for (double v : values) {
    out_ << ',' << format_double(v);
  }
  out_ << '\n';
}

void CsvWriter::row(std::string_view label, std::initializer_list<double> values) {
  row(label, std::span<const double>(values.begin(), values.size()));
}

void CsvWriter::close() {
  if (closed_) return;
  out_.flush();
  if (!out_) {
    throw ConfigError("failed while writing '" + path_.string() + "'");
  }
  out_.close();
  closed_ = true;
}

}  // namespace qcar
