#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace checkmate {

enum class error_code {
  lexical,
  parse,
  unknown_name,
  index_out_of_range,
  duplicate_name,
  length_mismatch,
  unknown_option,
  invalid_value,
  io,
  cycle,
  yaml_syntax,
  missing_expr,
  unknown_variable,
  unknown_function,
  arity,
  type,
  length,
  unknown_key,
  shape_mismatch,
  no_record_aligned_outcomes,
  ragged_row,
  empty_ruleset,
  raised_warning,
  usage,
};

const char* to_string(error_code code);

class error : public std::runtime_error {
public:
  error(error_code code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  error_code code() const noexcept { return code_; }

private:
  error_code code_;
};

// Lexical and parse errors carry a 1-based source position.
class syntax_error : public error {
public:
  syntax_error(error_code code, const std::string& message, int line,
               int column)
      : error(code, message + " at line " + std::to_string(line) +
                        ", column " + std::to_string(column)),
        message_(message), line_(line), column_(column) {}

  const std::string& message() const noexcept { return message_; }
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

private:
  std::string message_;
  int line_;
  int column_;
};

class cycle_error : public error {
public:
  explicit cycle_error(std::vector<std::string> chain);

  // The inclusion chain, first and last entries name the same file.
  const std::vector<std::string>& chain() const noexcept { return chain_; }

private:
  std::vector<std::string> chain_;
};

}  // namespace checkmate
