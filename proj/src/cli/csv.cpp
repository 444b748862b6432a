#include "platoon/cli/csv.hpp"

#include <array>
#include <charconv>

namespace platoon::cli {

std::string format_double(double value) {
  std::array<char, 64> buf{};
  const auto result = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), result.ptr);
}

void CsvWriter::write_row(const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i != 0) {
      out_ << ',';
    }
    out_ << fields[i];
  }
  out_ << '\n';
}

}  // namespace platoon::cli
