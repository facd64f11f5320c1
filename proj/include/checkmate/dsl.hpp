#pragma once

// Rule expression language: tokens, syntax tree, parser, rewrites and the
// canonical printer.

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace checkmate::dsl {

enum class token_kind {
  identifier,
  number,
  string,
  boolean_literal,
  missing_literal,
  op,
  punctuation,
  keyword,
};

struct token {
  token_kind kind;
  std::string text;
  int line = 1;
  int column = 1;

  friend bool operator==(const token&, const token&) = default;
};

/// Splits rule source into tokens. `#` starts a comment that runs to the end
/// of the line. Throws syntax_error(lexical) on a character outside the
/// grammar.
std::vector<token> tokenize(std::string_view source);

enum class unary_op { logical_not, negate };

enum class binary_op {
  add,
  sub,
  mul,
  div,
  pow,
  lt,
  le,
  eq,
  ne,
  ge,
  gt,
  logical_and,
  logical_or,
  in,
};

const char* symbol(binary_op op);
bool is_comparison(binary_op op);

struct expression_node;

// Immutable, cheaply copyable handle to a syntax tree node.
class expression {
public:
  expression();  // missing literal
  expression(expression_node node);

  const expression_node& node() const { return *node_; }

  template <class T>
  const T* as() const;

  template <class T>
  bool is() const {
    return as<T>() != nullptr;
  }

  friend bool operator==(const expression& a, const expression& b);

private:
  std::shared_ptr<const expression_node> node_;
};

struct number_lit {
  double value;
  friend bool operator==(const number_lit&, const number_lit&) = default;
};
struct string_lit {
  std::string value;
  friend bool operator==(const string_lit&, const string_lit&) = default;
};
struct bool_lit {
  bool value;
  friend bool operator==(const bool_lit&, const bool_lit&) = default;
};
struct missing_lit {
  friend bool operator==(const missing_lit&, const missing_lit&) = default;
};
struct identifier {
  std::string name;
  friend bool operator==(const identifier&, const identifier&) = default;
};
/// The `.` symbol: the dataset as a whole.
struct dataset_ref {
  friend bool operator==(const dataset_ref&, const dataset_ref&) = default;
};
/// Explicit parentheses.
struct group {
  expression inner;
  friend bool operator==(const group&, const group&) = default;
};
struct unary {
  unary_op op;
  expression operand;
  friend bool operator==(const unary&, const unary&) = default;
};
struct binary {
  binary_op op;
  expression lhs;
  expression rhs;
  friend bool operator==(const binary&, const binary&) = default;
};
struct named_arg {
  std::string name;
  expression value;
  friend bool operator==(const named_arg&, const named_arg&) = default;
};
struct call {
  std::string name;
  std::vector<expression> args;
  std::vector<named_arg> named;  // unique names, source order

  const expression* find_named(std::string_view arg) const;
  friend bool operator==(const call&, const call&) = default;
};
/// `if (condition) consequent`
struct implication {
  expression condition;
  expression consequent;
  friend bool operator==(const implication&, const implication&) = default;
};
/// `a + b ~ c`: records agreeing on the determinant agree on the dependent.
struct func_dep {
  std::vector<std::string> determinant;
  std::vector<std::string> dependent;
  friend bool operator==(const func_dep&, const func_dep&) = default;
};

struct expression_node {
  using variant_type =
      std::variant<number_lit, string_lit, bool_lit, missing_lit, identifier,
                   dataset_ref, group, unary, binary, call, implication,
                   func_dep>;
  variant_type value;
};

template <class T>
const T* expression::as() const {
  return std::get_if<T>(&node_->value);
}

// Construction helpers.
expression number(double v);
expression text(std::string v);
expression boolean(bool v);
expression missing();
expression ident(std::string name);
expression dataset();
expression paren(expression e);
expression make_unary(unary_op op, expression operand);
expression make_binary(binary_op op, expression lhs, expression rhs);
expression make_call(std::string name, std::vector<expression> args,
                     std::vector<named_arg> named = {});
expression make_implication(expression condition, expression consequent);
expression make_func_dep(std::vector<std::string> determinant,
                         std::vector<std::string> dependent);

struct macro_def {
  std::string name;
  expression body;
  friend bool operator==(const macro_def&, const macro_def&) = default;
};
struct group_def {
  std::string name;
  std::vector<std::string> members;
  friend bool operator==(const group_def&, const group_def&) = default;
};
struct rule_expr {
  expression body;
  friend bool operator==(const rule_expr&, const rule_expr&) = default;
};

using directive = std::variant<macro_def, group_def, rule_expr>;

/// Parses one rule source: `name := body`, `name := var_group(a, b)` or a
/// rule expression. Throws syntax_error (lexical or parse).
directive parse(std::string_view source);

/// Parses a source that must be a plain expression.
expression parse_expression(std::string_view source);

enum class rule_class { validating, macro, group, invalid };

rule_class classify(const directive& d);
bool is_validating(const expression& e);

/// Ordered macro table; bodies are already expanded against earlier entries.
using macro_table = std::vector<std::pair<std::string, expression>>;
using group_table = std::vector<std::pair<std::string, std::vector<std::string>>>;

expression substitute_macros(const expression& e, const macro_table& macros);

/// One expression per element of the Cartesian product of the groups that
/// `e` references, first referenced group varying slowest.
std::vector<expression> expand_groups(const expression& e,
                                      const group_table& groups);

/// Names of the groups referenced by `e`, in first-occurrence order.
std::vector<std::string> referenced_groups(const expression& e,
                                           const group_table& groups);

/// `if (P) Q` becomes `!(P) | (Q)`, recursively.
expression rewrite_implication(const expression& e);

/// Adds tolerance to a top-level linear comparison. Identity when the
/// matching epsilon is zero or a side is nonlinear.
expression rewrite_tolerance(const expression& e, double eps_eq,
                             double eps_ineq);

bool is_linear(const expression& e);
bool is_constant(const expression& e);

/// Variable names in first-occurrence order.
std::vector<std::string> variables(const expression& e);

std::string render(const expression& e);
std::string render(const directive& d);

/// Shortest round-trip decimal; scientific with a two-digit exponent for
/// tiny (and huge) magnitudes, e.g. `1e-08`.
std::string format_number(double v);

bool is_identifier_name(std::string_view name);

}  // namespace checkmate::dsl
