#pragma once

#include "checkmate/rules.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace checkmate {

/// Reads a free-text rule file. Included files load depth-first before
/// the file's own rules; only the root file's options become local
/// options. Throws io, cycle, parse or yaml-syntax errors.
build_result read_rules_text(const std::filesystem::path& path,
                             std::optional<timestamp> now = {});

/// Reads a YAML rule file (top-level keys options, include, rules).
build_result read_rules_yaml(const std::filesystem::path& path,
                             std::optional<timestamp> now = {});

/// Dispatches on the extension: .yml/.yaml is YAML, anything else text.
build_result read_rules(const std::filesystem::path& path,
                        std::optional<timestamp> now = {});

std::string to_yaml(const rule_set& rs);
void export_yaml(const rule_set& rs, const std::filesystem::path& path);

/// Free-text form: description as `#` comments, then `name: expr`.
std::string to_text(const rule_set& rs);
void export_text(const rule_set& rs, const std::filesystem::path& path);

/// Tabular rule form. Rule-set options do not survive the trip.
struct rule_table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

rule_table rules_to_table(const rule_set& rs);
/// Needs columns name and rule; label, description, origin and created
/// are optional. Parse errors name the 1-based row.
build_result table_to_rules(const rule_table& table,
                            std::optional<timestamp> now = {});

void write_file(const std::filesystem::path& path, const std::string& text);
std::string read_file(const std::filesystem::path& path);

}  // namespace checkmate
