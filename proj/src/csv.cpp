#include "checkmate/csv.hpp"

#include "checkmate/dsl.hpp"
#include "checkmate/error.hpp"
#include "checkmate/rule_io.hpp"

#include <charconv>
#include <cmath>

#include <fmt/format.h>

namespace checkmate {

csv_rows parse_csv(std::string_view text) {
  csv_rows rows;
  std::vector<std::string> record;
  std::vector<int> record_lines;
  std::string field;
  bool quoted = false, any = false;
  int line = 1, start = 1;

  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
  };
  auto end_record = [&] {
    end_field();
    if (!(record.size() == 1 && record[0].empty() && !any)) {
      if (!rows.empty() && record.size() != rows.front().size())
        throw error(error_code::ragged_row,
                    fmt::format("line {} has {} fields, expected {}", start,
                                record.size(), rows.front().size()));
      rows.push_back(std::move(record));
    }
    record.clear();
    any = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        quoted = true;
        any = true;
        break;
      case ',':
        end_field();
        any = true;
        break;
      case '\r':
        break;
      case '\n':
        end_record();
        start = ++line;
        break;
      default:
        field += c;
        any = true;
    }
  }
  if (quoted)
    throw error(error_code::ragged_row,
                fmt::format("line {}: unterminated quoted field", start));
  if (any || !field.empty()) end_record();
  return rows;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos &&
      (s.empty() || (s.front() != ' ' && s.back() != ' ')))
    return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string format_csv(const csv_rows& rows) {
  std::string out;
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out += (i ? "," : "") + csv_field(row[i]);
    out += "\n";
  }
  return out;
}

namespace {

bool missing_cell(const std::string& s) { return s.empty() || s == "NA"; }

std::optional<tri> as_bool(const std::string& s) {
  if (s == "TRUE" || s == "true") return tri::true_;
  if (s == "FALSE" || s == "false") return tri::false_;
  return std::nullopt;
}

std::optional<double> as_number(const std::string& s) {
  double v = 0;
  const char* b = s.data();
  const char* e = b + s.size();
  if (b != e && *b == '+') ++b;
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || p != e || !std::isfinite(v)) return std::nullopt;
  // from_chars accepts "inf"/"nan" spellings; only digits count here.
  if (s.find_first_of("0123456789") == std::string::npos) return std::nullopt;
  return v;
}

column infer(std::string name, const std::vector<const std::string*>& cells) {
  if (cells.empty()) return {std::move(name), text_vector{}};
  bool boolean = true, number = true;
  for (auto c : cells) {
    if (missing_cell(*c)) continue;
    boolean = boolean && as_bool(*c).has_value();
    number = number && as_number(*c).has_value();
  }
  if (boolean) {
    logical_vector v;
    for (auto c : cells) v.push_back(missing_cell(*c) ? tri::na : *as_bool(*c));
    return {std::move(name), std::move(v)};
  }
  if (number) {
    number_vector v;
    for (auto c : cells)
      v.push_back(missing_cell(*c) ? std::nullopt : as_number(*c));
    return {std::move(name), std::move(v)};
  }
  text_vector v;
  for (auto c : cells)
    v.push_back(missing_cell(*c) ? std::nullopt
                                 : std::optional<std::string>(*c));
  return {std::move(name), std::move(v)};
}

}  // namespace

data_frame frame_from_csv(std::string_view text) {
  auto rows = parse_csv(text);
  if (rows.empty()) return {};
  data_frame frame;
  for (std::size_t j = 0; j < rows[0].size(); ++j) {
    std::vector<const std::string*> cells;
    for (std::size_t i = 1; i < rows.size(); ++i) cells.push_back(&rows[i][j]);
    frame.add_column(infer(rows[0][j], cells));
  }
  return frame;
}

data_frame ingest_csv(const std::filesystem::path& path) {
  try {
    return frame_from_csv(read_file(path));
  } catch (const error& e) {
    if (e.code() == error_code::io) throw;
    throw error(e.code(), path.string() + ": " + e.what());
  }
}

std::string frame_to_csv(const data_frame& frame) {
  csv_rows rows{frame.names()};
  for (std::size_t i = 0; i < frame.rows(); ++i) {
    std::vector<std::string> row;
    for (const auto& c : frame.columns())
      row.push_back(cell_text(c.data, i));
    rows.push_back(std::move(row));
  }
  return format_csv(rows);
}

}  // namespace checkmate
