#include "herding/csv.hpp"

#include <cmath>
#include <cstdio>

namespace herding {

std::string format_real(double value) {
  if (std::isnan(value)) return {};
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.12g", value);
  return buffer;
}

void CsvRow::separator() {
  if (!first_) out_ << ',';
  first_ = false;
}

CsvRow& CsvRow::real(double value) {
  separator();
  out_ << format_real(value);
  return *this;
}

CsvRow& CsvRow::real(std::optional<double> value) {
  separator();
  if (value) out_ << format_real(*value);
  return *this;
}

CsvRow& CsvRow::integer(std::uint64_t value) {
  separator();
  out_ << value;
  return *this;
}

CsvRow& CsvRow::flag(bool value) {
  separator();
  out_ << (value ? 1 : 0);
  return *this;
}

CsvRow& CsvRow::text(std::string_view value) {
  separator();
  out_ << value;
  return *this;
}

CsvRow& CsvRow::empty() {
  separator();
  return *this;
}

void CsvRow::end_row() {
  out_ << '\n';
  first_ = true;
}

void write_header(std::ostream& out, std::initializer_list<std::string_view> columns) {
  bool first = true;
  for (auto column : columns) {
    if (!first) out << ',';
    out << column;
    first = false;
  }
  out << '\n';
}

}  // namespace herding
