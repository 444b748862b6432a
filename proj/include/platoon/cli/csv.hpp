#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace platoon::cli {

/// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

/// Comma-separated rows with LF line endings. Fields are written verbatim;
/// callers only pass numbers and identifiers.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void write_row(const std::vector<std::string>& fields);

 private:
  std::ostream& out_;
};

}  // namespace platoon::cli
