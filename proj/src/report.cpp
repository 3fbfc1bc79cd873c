#include "qfoundry/report.hpp"

#include <charconv>
#include <cstdio>
#include <cmath>
#include <sstream>

#include "qfoundry/errors.hpp"

namespace qfoundry::report {
namespace {

void append_json_string(std::string& out, const std::string& s) {
  out += '"';
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", static_cast<unsigned>(static_cast<unsigned char>(ch)));
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  out += '"';
}

void append_json_value(std::string& out, const Value& v) {
  if (const auto* d = std::get_if<double>(&v)) {
    out += std::isfinite(*d) ? format_double(*d) : "null";
  } else if (const auto* i = std::get_if<std::int64_t>(&v)) {
    out += std::to_string(*i);
  } else if (const auto* s = std::get_if<std::string>(&v)) {
    append_json_string(out, *s);
  } else {
    out += std::get<bool>(v) ? "true" : "false";
  }
}

void append_fields(std::string& out, const Fields& fields, const std::string& indent) {
  if (fields.empty()) {
    out += "{}";
    return;
  }
  out += "{\n";
  for (std::size_t i = 0; i < fields.size(); ++i) {
    out += indent + "  ";
    append_json_string(out, fields[i].first);
    out += ": ";
    append_json_value(out, fields[i].second);
    out += i + 1 < fields.size() ? ",\n" : "\n";
  }
  out += indent + "}";
}

void append_meta(std::string& out, const ResultTable& table, const Meta& meta, const std::string& indent) {
  const std::string in = indent + "  ";
  out += "{\n";
  out += in + "\"toolkit\": \"qfoundry\",\n";
  out += in + "\"version\": ";
  append_json_string(out, QFOUNDRY_VERSION);
  out += ",\n" + in + "\"scenario\": ";
  append_json_string(out, meta.scenario);
  out += ",\n" + in + "\"seed\": ";
  out += meta.seed ? std::to_string(*meta.seed) : "null";
  out += ",\n" + in + "\"grid\": ";
  append_fields(out, meta.grid, in);
  out += ",\n" + in + "\"params\": ";
  append_fields(out, meta.params, in);
  Fields provenance;
  for (const auto& c : table.columns) provenance.emplace_back(c.name, c.provenance);
  out += ",\n" + in + "\"provenance\": ";
  append_fields(out, provenance, in);
  out += ",\n" + in + "\"summary\": ";
  append_fields(out, meta.summary, in);
  out += "\n" + indent + "}";
}

std::string csv_cell(const Value& v) {
  if (const auto* d = std::get_if<double>(&v)) return format_double(*d);
  if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
  if (const auto* b = std::get_if<bool>(&v)) return *b ? "true" : "false";
  const std::string& s = std::get<std::string>(v);
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

void ResultTable::add_row(std::vector<Value> row) {
  if (row.size() != columns.size()) {
    std::ostringstream msg;
    msg << "row has " << row.size() << " cells for " << columns.size() << " columns";
    throw ValidationError(msg.str());
  }
  rows.push_back(std::move(row));
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string to_json(const ResultTable& table, const Meta& meta) {
  std::string out = "{\n  \"meta\": ";
  append_meta(out, table, meta, "  ");
  out += ",\n  \"columns\": [";
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += ", ";
    append_json_string(out, table.columns[i].name);
  }
  out += "],\n  \"rows\": [";
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    out += r ? ",\n    [" : "\n    [";
    for (std::size_t i = 0; i < table.rows[r].size(); ++i) {
      if (i) out += ", ";
      append_json_value(out, table.rows[r][i]);
    }
    out += "]";
  }
  out += table.rows.empty() ? "]\n}\n" : "\n  ]\n}\n";
  return out;
}

std::string to_csv(const ResultTable& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += ',';
    out += csv_cell(table.columns[i].name);
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += csv_cell(row[i]);
    }
    out += '\n';
  }
  return out;
}

std::string meta_json(const ResultTable& table, const Meta& meta) {
  std::string out;
  append_meta(out, table, meta, "");
  return out + "\n";
}

}  // namespace qfoundry::report
