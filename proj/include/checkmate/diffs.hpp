#pragma once

#include "checkmate/engine.hpp"

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace checkmate {

enum class compare_mode { sequential, to_first };

std::string_view to_string(compare_mode m);

struct named_frame {
  std::string name;
  data_frame frame;
};

/// Status rows in fixed order, one count column per version.
struct status_table {
  std::vector<std::string> statuses;
  std::vector<std::string> versions;
  std::vector<std::vector<std::size_t>> counts;  // [status][version]
  compare_mode mode = compare_mode::sequential;

  std::size_t at(std::string_view status, std::size_t version) const;
  friend bool operator==(const status_table&, const status_table&) = default;
};

inline constexpr std::array<std::string_view, 11> validation_statuses{
    "validations",        "verifiable",       "unverifiable",
    "still_unverifiable", "new_unverifiable", "satisfied",
    "still_satisfied",    "new_satisfied",    "violated",
    "still_violated",     "new_violated"};

inline constexpr std::array<std::string_view, 9> cell_statuses{
    "cells",   "available", "still_available", "unadapted", "adapted",
    "imputed", "missing",   "still_missing",   "removed"};

/// Confronts every version with `rs` and counts status transitions per
/// rule item. Throws shape-mismatch when versions differ in records or
/// columns, or a rule's item count changes between versions.
status_table compare_validations(const rule_set& rs,
                                 const std::vector<named_frame>& versions,
                                 compare_mode how = compare_mode::sequential,
                                 const confront_options& opts = {});

/// Same counts from already computed validations.
status_table compare_validations(const std::vector<validation>& runs,
                                 const std::vector<std::string>& names,
                                 compare_mode how);

/// Cell-level change decomposition. Columns are matched by name.
status_table compare_cells(const std::vector<named_frame>& versions,
                           compare_mode how = compare_mode::sequential);

struct chart_point {
  std::string status;
  std::string version;
  std::size_t count = 0;

  friend bool operator==(const chart_point&, const chart_point&) = default;
};

/// Long form, status-major.
std::vector<chart_point> chart_data(const status_table& t);

}  // namespace checkmate
