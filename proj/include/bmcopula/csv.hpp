#pragma once

#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>

namespace bmcopula {

/// Shortest round-trip decimal form, locale independent ("nan", "inf", "-inf" for non-finite).
std::string format_number(double x);

/// Minimal RFC-4180 writer: fields containing comma, quote or newline are quoted.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  CsvWriter& field(std::string_view text);
  CsvWriter& field(double x) { return field(format_number(x)); }
  void end_row();
  void row(std::initializer_list<std::string_view> fields);

 private:
  std::ostream& out_;
  bool first_ = true;
};

}  // namespace bmcopula
