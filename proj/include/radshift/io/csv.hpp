#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace radshift::io {

// Comma-separated output with a header row, LF endings, doubles at 17
// significant digits.
class CsvWriter {
 public:
  CsvWriter(std::ostream& os, const std::vector<std::string>& header)
      : os_(os) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (i) os_ << ',';
      os_ << header[i];
    }
    os_ << '\n';
  }

  CsvWriter& cell(double v) {
    sep();
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    os_ << buf;
    return *this;
  }
  CsvWriter& cell(const std::string& s) {
    sep();
    os_ << s;
    return *this;
  }
  CsvWriter& cell(bool b) {
    sep();
    os_ << (b ? "true" : "false");
    return *this;
  }
  void end_row() {
    os_ << '\n';
    first_ = true;
  }

 private:
  void sep() {
    if (!first_) os_ << ',';
    first_ = false;
  }
  std::ostream& os_;
  bool first_ = true;
};

}  // namespace radshift::io
