#pragma once

#include <charconv>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace librot::io {

/// Locale-free shortest round-trip representation of a double.
inline std::string format_number(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

/// Quote a field per RFC 4180 when it contains commas, quotes, or newlines.
inline std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

/// Minimal RFC 4180 writer: comma separators, CRLF records, '.' decimals.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header)
      : os_(path, std::ios::binary) {
    if (!os_) throw std::runtime_error("cannot open for writing: " + path);
    row(header);
  }

  void row(const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) {
      if (i) os_ << ',';
      os_ << csv_escape(cells[i]);
    }
    os_ << "\r\n";
  }

  static std::string cell(double v) { return format_number(v); }

 private:
  std::ofstream os_;
};

}  // namespace librot::io
