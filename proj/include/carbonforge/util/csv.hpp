#pragma once

#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace carbonforge::csv {

struct Row {
  /// 1-based line number of the row's first line in the source.
  std::size_t line = 0;
  std::vector<std::string> cells;
};

/// RFC 4180 reader: comma separated, double-quote escaping, quoted fields may
/// span lines. Blank lines are skipped. CRLF is accepted.
std::vector<Row> read(std::istream& in);
std::vector<Row> read_text(std::string_view text);

/// Quotes a cell when it contains a comma, quote or newline.
std::string escape(std::string_view cell);
std::string join(const std::vector<std::string>& cells);

/// Shortest round-trip decimal form of a double.
std::string format_number(double value);

}  // namespace carbonforge::csv
