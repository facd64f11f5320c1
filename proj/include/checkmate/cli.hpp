#pragma once

#include "checkmate/diffs.hpp"
#include "checkmate/engine.hpp"
#include "checkmate/report.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace checkmate::cli {

enum exit_code : int { ok = 0, fails = 1, rule_errors = 2, usage = 3 };

struct config {
  std::string command;  // check, summary, lint, export, compare, cells, plot
  std::vector<std::string> data;
  std::string rules;
  std::optional<std::string> key;
  output_format format = output_format::text;
  std::optional<std::string> out;
  std::vector<std::pair<std::string, std::string>> set;
  compare_mode how = compare_mode::sequential;
  bool strict = false;
  std::optional<std::string> to;  // export target: yaml, csv, text
  bool cells = false;             // plot the cell decomposition
};

/// Exit code implied by a validation: errors 2, fails 1, NA with strict 2.
int exit_status(const validation& v, bool strict);

/// Rules path as given, else looked up under CHECKMATE_RULES_PATH.
std::string locate_rules(const std::string& path);

int run(const config& cfg, std::ostream& out, std::ostream& err);

/// Parses argv and runs. Usage errors exit 3.
int main_entry(int argc, const char* const* argv, std::ostream& out,
               std::ostream& err);

}  // namespace checkmate::cli
