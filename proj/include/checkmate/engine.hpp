#pragma once

#include "checkmate/dsl.hpp"
#include "checkmate/frame.hpp"
#include "checkmate/options.hpp"
#include "checkmate/rules.hpp"

#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace checkmate {

/// Reference data visible to rules when a name is not a column.
using ref_table = std::map<std::string, column_data, std::less<>>;

void add_reference(ref_table& ref, const data_frame& frame);

/// The `.` symbol evaluated: the frame as a whole.
struct whole_frame {};

using value = std::variant<logical_vector, number_vector, text_vector,
                           whole_frame>;

struct scope {
  const data_frame& frame;
  const ref_table* ref = nullptr;
  std::vector<std::string>* warnings = nullptr;
};

/// Evaluates a rewritten expression. Throws checkmate::error with codes
/// unknown-variable, unknown-function, arity, type or length.
value eval_expr(const dsl::expression& e, const scope& env);

/// TRUE iff a record's dependent combination equals that of the first
/// complete record sharing its determinant; NA when a dependent cell is
/// missing.
logical_vector eval_fd(const dsl::func_dep& fd, const data_frame& frame);

struct rule_error {
  std::string message;
  friend bool operator==(const rule_error&, const rule_error&) = default;
};

struct outcome {
  std::string name;
  std::string expression;  // rendered, after rewriting
  std::variant<logical_vector, rule_error> result;
  std::vector<std::string> warnings;

  bool failed() const { return std::holds_alternative<rule_error>(result); }
  const logical_vector* values() const {
    return std::get_if<logical_vector>(&result);
  }
  std::size_t items() const { return values() ? values()->size() : 0; }

  friend bool operator==(const outcome&, const outcome&) = default;
};

struct validation {
  std::vector<outcome> outcomes;
  std::size_t records = 0;
  std::optional<std::string> key_name;
  std::vector<std::string> key_values;  // empty without a key
  std::string call_text;
  timestamp created{};

  std::size_t size() const { return outcomes.size(); }
  bool record_aligned(const outcome& o) const {
    return o.values() && o.values()->size() == records;
  }

  validation subset(std::span<const std::size_t> indices) const;
  validation subset(std::span<const std::string> names) const;

  friend bool operator==(const validation&, const validation&) = default;
};

struct confront_options {
  std::optional<std::string> key;
  ref_table ref;
  option_overrides overrides;
  // Used only to build the call text.
  std::string data_label = "dat";
  std::string rules_label = "x";
  std::optional<timestamp> now;
};

/// Evaluates every rule against `frame`, in rule order.
validation confront(const data_frame& frame, const rule_set& rules,
                    const confront_options& opts = {});

/// confront(frame, new_ruleset(sources)). Throws empty-ruleset for no
/// sources.
validation check_that(const data_frame& frame,
                      const std::vector<std::string>& sources,
                      const confront_options& opts = {});

/// The expression actually evaluated for a rule under `opts`.
dsl::expression prepare_rule(const dsl::expression& body,
                             const option_set& opts);

/// "Object of class 'validation'" banner with the four counters.
std::string format_banner(const validation& v);

}  // namespace checkmate
