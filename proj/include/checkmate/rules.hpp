#pragma once

#include "checkmate/dsl.hpp"
#include "checkmate/options.hpp"

#include <chrono>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace checkmate {

using timestamp = std::chrono::sys_seconds;

timestamp now_seconds();
/// "YYYY-MM-DD HH:MM:SS", UTC.
std::string format_timestamp(timestamp t);
timestamp parse_timestamp(std::string_view text);

using meta_map = std::vector<std::pair<std::string, std::string>>;

struct rule {
  dsl::expression body;
  std::string name;
  std::string label;
  std::string description;
  std::string origin;
  timestamp created{};
  meta_map meta{{"language", "dsl/1"}, {"severity", "error"}};

  std::string expression_text() const { return dsl::render(body); }
  const std::string* meta_value(std::string_view key) const;
  void set_meta(const std::string& key, std::string value);

  friend bool operator==(const rule&, const rule&) = default;
};

enum class metadata_field { name, label, description, origin, created };

/// One entry handed to rule-set construction. Only `source` is required.
struct rule_entry {
  std::optional<std::string> name;
  std::string source;
  std::string label;
  std::string description;
  std::optional<std::string> origin;
  std::optional<timestamp> created;
  meta_map meta;
  // Location used in parse-error messages; empty file means none.
  std::string file;
  int line = 1;
};

class rule_set;

struct build_result;

/// Ordered, immutable collection of validating rules with optional local
/// options. All mutators return a new value.
class rule_set {
public:
  rule_set() = default;

  /// Validates name uniqueness and that every body is validating.
  static rule_set from_rules(std::vector<rule> rules,
                             option_overrides local_options = {});

  std::size_t size() const { return rules_.size(); }
  bool empty() const { return rules_.empty(); }
  const std::vector<rule>& rules() const { return rules_; }
  auto begin() const { return rules_.begin(); }
  auto end() const { return rules_.end(); }

  /// Single extraction. Throws index-out-of-range / unknown-name.
  const rule& at(std::size_t index) const;
  const rule& at(std::string_view name) const;
  std::optional<std::size_t> index_of(std::string_view name) const;

  const option_overrides& local_options() const { return local_options_; }
  bool has_local_options() const { return !local_options_.empty(); }

  rule_set subset(std::span<const std::size_t> indices) const;
  rule_set subset(std::span<const std::string> names) const;

  std::vector<std::string> metadata(metadata_field field) const;
  rule_set with_metadata(metadata_field field,
                         const std::vector<std::string>& values) const;
  std::vector<timestamp> created() const;
  rule_set with_created(const std::vector<timestamp>& values) const;

  /// Missing keys read as empty strings.
  std::vector<std::string> meta(std::string_view key) const;
  rule_set with_meta(const std::string& key,
                     const std::vector<std::string>& values) const;

  /// Shadows options locally. A set without local options first copies the
  /// current global table, so later global changes no longer reach it.
  rule_set with_options(const option_overrides& changes) const;
  rule_set without_options() const;

  friend rule_set concat(const rule_set& a, const rule_set& b);
  friend bool operator==(const rule_set&, const rule_set&) = default;

private:
  std::vector<rule> rules_;
  option_overrides local_options_;
};

rule_set concat(const rule_set& a, const rule_set& b);

struct build_result {
  rule_set rules;
  /// One line per ignored entry: "[002] mean(x)".
  std::vector<std::string> warnings;
};

/// Parses and classifies entries; absorbs macro and group definitions,
/// drops invalid expressions with a warning, expands variable groups and
/// assigns V-names to unnamed rules. Parse errors abort.
build_result new_ruleset(
    const std::vector<std::pair<std::optional<std::string>, std::string>>&
        entries,
    const std::string& origin, timestamp now);

build_result build_ruleset(const std::vector<rule_entry>& entries,
                           const std::string& default_origin, timestamp now,
                           option_overrides local_options = {});

/// Header line used when reporting ignored entries.
inline constexpr const char* invalid_syntax_header =
    "Invalid syntax detected, the following expressions have been ignored:";

/// Variables of each rule and the rule x variable incidence matrix.
struct variable_matrix {
  std::vector<std::string> variables;
  std::vector<std::vector<bool>> incidence;  // [rule][variable]
};

std::vector<std::string> variables(const rule_set& rs);
variable_matrix variables_matrix(const rule_set& rs);

/// Mirrors the classic "Object of class 'validator'" listing.
std::string format_ruleset(const rule_set& rs);
std::string format_rule(const rule& r);

}  // namespace checkmate
