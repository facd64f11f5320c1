#pragma once

#include "checkmate/tri.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace checkmate {

// Typed vectors; a disengaged optional (or tri::na) is a missing cell.
using logical_vector = std::vector<tri>;
using number_vector = std::vector<std::optional<double>>;
using text_vector = std::vector<std::optional<std::string>>;

using column_data = std::variant<logical_vector, number_vector, text_vector>;

enum class column_type { boolean, number, text };

std::string_view to_string(column_type t);
column_type type_of(const column_data& d);
std::size_t size_of(const column_data& d);
bool is_missing(const column_data& d, std::size_t i);
/// Cell as text for keys and exports; missing renders as "NA".
std::string cell_text(const column_data& d, std::size_t i);

struct column {
  std::string name;
  column_data data;

  column_type type() const { return type_of(data); }
  std::size_t size() const { return size_of(data); }
  bool missing(std::size_t i) const { return is_missing(data, i); }

  friend bool operator==(const column&, const column&) = default;
};

/// Named, equal-length typed columns. Never mutated during confrontation.
class data_frame {
public:
  data_frame() = default;
  explicit data_frame(std::vector<column> columns);

  /// Throws length-mismatch or duplicate-name.
  void add_column(column c);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return columns_.size(); }
  const std::vector<column>& columns() const { return columns_; }
  const column* find(std::string_view name) const;
  std::vector<std::string> names() const;

  friend bool operator==(const data_frame&, const data_frame&) = default;

private:
  std::vector<column> columns_;
  std::size_t rows_ = 0;
};

}  // namespace checkmate
