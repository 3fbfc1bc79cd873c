#pragma once

// Result tables and their JSON / CSV encodings. Doubles are written with 17
// significant digits through std::to_chars, so output is locale-free and exact.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace qfoundry::report {

using Value = std::variant<double, std::int64_t, std::string, bool>;
using Fields = std::vector<std::pair<std::string, Value>>;

struct Column {
  std::string name;
  std::string provenance;  ///< library operation that produced the column
};

struct Meta {
  std::string scenario;
  std::optional<std::uint64_t> seed;
  Fields grid;
  Fields params;
  Fields summary;
};

struct ResultTable {
  std::vector<Column> columns;
  std::vector<std::vector<Value>> rows;

  /// Throws ValidationError if the row width does not match the header.
  void add_row(std::vector<Value> row);
};

/// 17 significant digits, shortest exponent form of %.17g; "nan", "inf", "-inf" for non-finite.
std::string format_double(double v);

/// {"meta": {...}, "columns": [...], "rows": [[...], ...]}. Non-finite numbers become null.
std::string to_json(const ResultTable& table, const Meta& meta);
/// Header line then one line per row, '\n' endings, RFC-4180 quoting for strings.
std::string to_csv(const ResultTable& table);
/// The meta block alone (with column provenance), as written next to a CSV file.
std::string meta_json(const ResultTable& table, const Meta& meta);

}  // namespace qfoundry::report
