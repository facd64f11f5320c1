#include "checkmate/frame.hpp"

#include "checkmate/dsl.hpp"
#include "checkmate/error.hpp"

namespace checkmate {

std::string_view to_string(column_type t) {
  switch (t) {
    case column_type::boolean: return "logical";
    case column_type::number: return "numeric";
    case column_type::text: return "character";
  }
  return "?";
}

column_type type_of(const column_data& d) {
  switch (d.index()) {
    case 0: return column_type::boolean;
    case 1: return column_type::number;
    default: return column_type::text;
  }
}

std::size_t size_of(const column_data& d) {
  return std::visit([](const auto& v) { return v.size(); }, d);
}

bool is_missing(const column_data& d, std::size_t i) {
  if (auto l = std::get_if<logical_vector>(&d)) return (*l)[i] == tri::na;
  if (auto n = std::get_if<number_vector>(&d)) return !(*n)[i].has_value();
  return !std::get<text_vector>(d)[i].has_value();
}

std::string cell_text(const column_data& d, std::size_t i) {
  if (is_missing(d, i)) return "NA";
  if (auto l = std::get_if<logical_vector>(&d))
    return std::string(to_string((*l)[i]));
  if (auto n = std::get_if<number_vector>(&d))
    return dsl::format_number(*(*n)[i]);
  return *std::get<text_vector>(d)[i];
}

data_frame::data_frame(std::vector<column> columns) {
  for (auto& c : columns) add_column(std::move(c));
}

void data_frame::add_column(column c) {
  if (find(c.name))
    throw error(error_code::duplicate_name,
                "duplicate column name '" + c.name + "'");
  if (columns_.empty())
    rows_ = c.size();
  else if (c.size() != rows_)
    throw error(error_code::length_mismatch,
                "column '" + c.name + "' has " + std::to_string(c.size()) +
                    " values, expected " + std::to_string(rows_));
  columns_.push_back(std::move(c));
}

const column* data_frame::find(std::string_view name) const {
  for (const auto& c : columns_)
    if (c.name == name) return &c;
  return nullptr;
}

std::vector<std::string> data_frame::names() const {
  std::vector<std::string> out;
  for (const auto& c : columns_) out.push_back(c.name);
  return out;
}

}  // namespace checkmate
