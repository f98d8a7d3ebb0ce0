#include "exdyn/csv.hpp"

#include <array>
#include <charconv>

namespace exdyn {

std::string format_double(double value) {
  std::array<char, 32> buf{};
  const auto result = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), result.ptr);
}

void CsvWriter::header(std::string_view key, std::string_view value) {
  out_ << "# " << key << '=' << value << '\n';
}

void CsvWriter::header(const std::vector<std::pair<std::string, std::string>>& entries) {
  for (const auto& [key, value] : entries) header(key, value);
}

void CsvWriter::columns(std::initializer_list<std::string_view> names) {
  for (auto name : names) cell(name);
  end();
}

void CsvWriter::columns(const std::vector<std::string>& names) {
  for (const auto& name : names) cell(std::string_view(name));
  end();
}

void CsvWriter::separator() {
  if (row_open_) out_ << ',';
  row_open_ = true;
}

CsvWriter& CsvWriter::cell(double value) {
  separator();
  out_ << format_double(value);
  return *this;
}

CsvWriter& CsvWriter::cell(long long value) {
  separator();
  out_ << value;
  return *this;
}

CsvWriter& CsvWriter::cell(unsigned long long value) {
  separator();
  out_ << value;
  return *this;
}

CsvWriter& CsvWriter::cell(std::string_view text) {
  separator();
  out_ << text;
  return *this;
}

void CsvWriter::end() {
  out_ << '\n';
  row_open_ = false;
}

}  // namespace exdyn
