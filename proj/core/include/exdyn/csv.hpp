#pragma once

#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace exdyn {

// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

// CSV with a `# key=value` header block followed by a titled table.
class CsvWriter {
public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void header(std::string_view key, std::string_view value);
  void header(const std::vector<std::pair<std::string, std::string>>& entries);
  void columns(std::initializer_list<std::string_view> names);
  void columns(const std::vector<std::string>& names);

  // Row builder; call end() to terminate the line.
  CsvWriter& cell(double value);
  CsvWriter& cell(long long value);
  CsvWriter& cell(unsigned long long value);
  CsvWriter& cell(unsigned long value) { return cell(static_cast<unsigned long long>(value)); }
  CsvWriter& cell(int value) { return cell(static_cast<long long>(value)); }
  CsvWriter& cell(std::string_view text);
  void end();

private:
  void separator();

  std::ostream& out_;
  bool row_open_ = false;
};

}  // namespace exdyn
