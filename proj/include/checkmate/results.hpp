#pragma once

#include "checkmate/engine.hpp"

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace checkmate {

struct summary_row {
  std::string name;
  std::size_t items = 0;
  std::size_t passes = 0;
  std::size_t fails = 0;
  std::size_t nNA = 0;
  bool error = false;
  bool warning = false;
  std::string expression;

  friend bool operator==(const summary_row&, const summary_row&) = default;
};

std::vector<summary_row> summarize(const validation& v);

tri all_pass(const validation& v, bool na_rm = false);
tri any_fail(const validation& v, bool na_rm = false);

/// Outcomes of one result length side by side; columns are rules.
struct result_matrix {
  std::size_t rows = 0;
  std::vector<std::string> names;
  std::vector<logical_vector> columns;

  tri at(std::size_t row, std::size_t col) const { return columns[col][row]; }
  friend bool operator==(const result_matrix&, const result_matrix&) = default;
};

/// Matrices keyed by result length, in order of first appearance.
using result_list = std::vector<std::pair<std::size_t, result_matrix>>;

/// Errored outcomes are left out. With simplify, a single shared length
/// gives the matrix itself.
std::variant<result_matrix, result_list> values(const validation& v,
                                                bool simplify = true);

enum class aggregate_by { rule, record };

struct aggregate_row {
  std::string label;  // rule name, key value or 1-based record index
  std::size_t npass = 0;
  std::size_t nfail = 0;
  std::size_t nNA = 0;
  double rel_pass = 0;
  double rel_fail = 0;
  double rel_NA = 0;

  friend bool operator==(const aggregate_row&, const aggregate_row&) = default;
};

/// By rule, errored outcomes count as zero items. By record, only
/// record-aligned outcomes take part; throws no-record-aligned-outcomes.
std::vector<aggregate_row> aggregate_results(const validation& v,
                                             aggregate_by by);

/// aggregate_results, stably ordered by npass.
std::vector<aggregate_row> sort_results(const validation& v, aggregate_by by,
                                        bool decreasing = false);

struct record_row {
  std::optional<std::string> id;
  std::string name;
  tri value = tri::na;
  std::string expression;

  friend bool operator==(const record_row&, const record_row&) = default;
};

std::vector<record_row> to_records(const validation& v);

/// "rule: message" per captured diagnostic, in rule order.
std::vector<std::string> collect_errors(const validation& v);
std::vector<std::string> collect_warnings(const validation& v);

}  // namespace checkmate
