#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

namespace herding {

/// Decimal-point real with 12 significant digits ("%.12g"); NaN becomes an
/// empty field.
std::string format_real(double value);

/// Comma-separated row writer. Fields are appended left to right and the row
/// is flushed by end_row().
class CsvRow {
 public:
  explicit CsvRow(std::ostream& out) : out_(out) {}

  CsvRow& real(double value);
  CsvRow& real(std::optional<double> value);
  CsvRow& integer(std::uint64_t value);
  CsvRow& flag(bool value);
  CsvRow& text(std::string_view value);
  CsvRow& empty();
  void end_row();

 private:
  void separator();

  std::ostream& out_;
  bool first_ = true;
};

/// Writes the header row.
void write_header(std::ostream& out, std::initializer_list<std::string_view> columns);

}  // namespace herding
