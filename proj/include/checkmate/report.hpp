#pragma once

#include "checkmate/diffs.hpp"
#include "checkmate/results.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace checkmate {

enum class output_format { csv, json, text };

output_format parse_format(std::string_view name);

std::string emit_summary(const std::vector<summary_row>& rows,
                         output_format f);
std::string emit_records(const std::vector<record_row>& rows,
                         output_format f);
std::string emit_status(const status_table& t, output_format f);
/// Summary and records in one document; csv and text give the records.
std::string emit_check(const std::vector<summary_row>& summary,
                       const std::vector<record_row>& records,
                       output_format f);

/// Right-aligned columns with 1-based row labels, R style.
std::string format_table(const std::vector<std::string>& header,
                         const std::vector<std::vector<std::string>>& rows,
                         bool row_labels = true);

/// Stacked horizontal bars of passes, fails and NA per rule.
std::string svg_bars(const std::vector<summary_row>& rows);
/// One line per status across versions.
std::string svg_lines(const status_table& t);

}  // namespace checkmate
