#include "checkmate/error.hpp"

namespace checkmate {

const char* to_string(error_code code) {
  switch (code) {
    case error_code::lexical: return "lexical-error";
    case error_code::parse: return "parse-error";
    case error_code::unknown_name: return "unknown-name";
    case error_code::index_out_of_range: return "index-out-of-range";
    case error_code::duplicate_name: return "duplicate-name";
    case error_code::length_mismatch: return "length-mismatch";
    case error_code::unknown_option: return "unknown-option";
    case error_code::invalid_value: return "invalid-value";
    case error_code::io: return "io-error";
    case error_code::cycle: return "cycle-error";
    case error_code::yaml_syntax: return "yaml-syntax-error";
    case error_code::missing_expr: return "missing-expr";
    case error_code::unknown_variable: return "unknown-variable";
    case error_code::unknown_function: return "unknown-function";
    case error_code::arity: return "arity-error";
    case error_code::type: return "type-error";
    case error_code::length: return "length-error";
    case error_code::unknown_key: return "unknown-key";
    case error_code::shape_mismatch: return "shape-mismatch";
    case error_code::no_record_aligned_outcomes:
      return "no-record-aligned-outcomes";
    case error_code::ragged_row: return "ragged-row";
    case error_code::empty_ruleset: return "empty-ruleset";
    case error_code::raised_warning: return "raised-warning";
    case error_code::usage: return "usage-error";
  }
  return "error";
}

namespace {

std::string describe_cycle(const std::vector<std::string>& chain) {
  std::string out = "cyclic inclusion detected: ";
  for (std::size_t i = 0; i < chain.size(); ++i)
    out += (i ? " -> " : "") + chain[i];
  return out;
}

}  // namespace

cycle_error::cycle_error(std::vector<std::string> chain)
    : error(error_code::cycle, describe_cycle(chain)),
      chain_(std::move(chain)) {}

}  // namespace checkmate
