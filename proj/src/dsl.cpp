#include "checkmate/dsl.hpp"

#include "checkmate/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <set>

namespace checkmate::dsl {

// ---------------------------------------------------------------------------
// Expression handle
// ---------------------------------------------------------------------------

expression::expression()
    : node_(std::make_shared<const expression_node>(
          expression_node{missing_lit{}})) {}

expression::expression(expression_node node)
    : node_(std::make_shared<const expression_node>(std::move(node))) {}

bool operator==(const expression& a, const expression& b) {
  return a.node_ == b.node_ || a.node_->value == b.node_->value;
}

const expression* call::find_named(std::string_view arg) const {
  for (const auto& n : named)
    if (n.name == arg) return &n.value;
  return nullptr;
}

expression number(double v) { return expression_node{number_lit{v}}; }
expression text(std::string v) {
  return expression_node{string_lit{std::move(v)}};
}
expression boolean(bool v) { return expression_node{bool_lit{v}}; }
expression missing() { return expression_node{missing_lit{}}; }
expression ident(std::string name) {
  return expression_node{identifier{std::move(name)}};
}
expression dataset() { return expression_node{dataset_ref{}}; }
expression paren(expression e) {
  return expression_node{group{std::move(e)}};
}
expression make_unary(unary_op op, expression operand) {
  return expression_node{unary{op, std::move(operand)}};
}
expression make_binary(binary_op op, expression lhs, expression rhs) {
  return expression_node{binary{op, std::move(lhs), std::move(rhs)}};
}
expression make_call(std::string name, std::vector<expression> args,
                     std::vector<named_arg> named) {
  return expression_node{
      call{std::move(name), std::move(args), std::move(named)}};
}
expression make_implication(expression condition, expression consequent) {
  return expression_node{
      implication{std::move(condition), std::move(consequent)}};
}
expression make_func_dep(std::vector<std::string> determinant,
                         std::vector<std::string> dependent) {
  return expression_node{
      func_dep{std::move(determinant), std::move(dependent)}};
}

const char* symbol(binary_op op) {
  switch (op) {
    case binary_op::add: return "+";
    case binary_op::sub: return "-";
    case binary_op::mul: return "*";
    case binary_op::div: return "/";
    case binary_op::pow: return "^";
    case binary_op::lt: return "<";
    case binary_op::le: return "<=";
    case binary_op::eq: return "==";
    case binary_op::ne: return "!=";
    case binary_op::ge: return ">=";
    case binary_op::gt: return ">";
    case binary_op::logical_and: return "&";
    case binary_op::logical_or: return "|";
    case binary_op::in: return "%in%";
  }
  return "?";
}

bool is_comparison(binary_op op) {
  switch (op) {
    case binary_op::lt:
    case binary_op::le:
    case binary_op::eq:
    case binary_op::ne:
    case binary_op::ge:
    case binary_op::gt:
    case binary_op::in:
      return true;
    default:
      return false;
  }
}

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

namespace {

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) != 0;
}

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '.' ||
         c == '_';
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

class lexer {
public:
  explicit lexer(std::string_view src) : src_(src) {}

  std::vector<token> run() {
    std::vector<token> out;
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '\n') {
        advance();
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
        continue;
      }
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
        continue;
      }
      int line = line_, col = col_;
      std::size_t start = pos_;
      token_kind kind = lex_one(c);
      out.push_back(
          token{kind, std::string(src_.substr(start, pos_ - start)), line,
                col});
      auto& t = out.back();
      if (t.kind == token_kind::identifier) {
        if (t.text == "TRUE" || t.text == "FALSE")
          t.kind = token_kind::boolean_literal;
        else if (t.text == "NA")
          t.kind = token_kind::missing_literal;
        else if (t.text == "if")
          t.kind = token_kind::keyword;
      }
    }
    return out;
  }

private:
  token_kind lex_one(char c) {
    if (is_ident_start(c)) {
      while (pos_ < src_.size() && is_ident_char(src_[pos_])) advance();
      return token_kind::identifier;
    }
    if (is_digit(c) || (c == '.' && pos_ + 1 < src_.size() &&
                        is_digit(src_[pos_ + 1]))) {
      lex_number();
      return token_kind::number;
    }
    if (c == '"' || c == '\'') {
      lex_string(c);
      return token_kind::string;
    }
    switch (c) {
      case '(':
      case ')':
      case ',':
      case '.':
        advance();
        return token_kind::punctuation;
      case '+':
      case '-':
      case '*':
      case '/':
      case '^':
      case '&':
      case '|':
      case '~':
        advance();
        return token_kind::op;
      case '<':
      case '>':
      case '!':
        advance();
        if (peek() == '=') advance();
        return token_kind::op;
      case '=':
        advance();
        if (peek() == '=') {
          advance();
          return token_kind::op;
        }
        return token_kind::punctuation;
      case ':':
        if (peek(1) == '=') {
          advance();
          advance();
          return token_kind::op;
        }
        break;
      case '%':
        if (src_.substr(pos_, 4) == "%in%") {
          for (int i = 0; i < 4; ++i) advance();
          return token_kind::op;
        }
        break;
      default:
        break;
    }
    throw syntax_error(error_code::lexical,
                       std::string("unexpected character '") + c + "'", line_,
                       col_);
  }

  void lex_number() {
    while (pos_ < src_.size() && is_digit(src_[pos_])) advance();
    if (peek() == '.') {
      advance();
      while (pos_ < src_.size() && is_digit(src_[pos_])) advance();
    }
    if (peek() == 'e' || peek() == 'E') {
      std::size_t save = pos_;
      int save_col = col_;
      advance();
      if (peek() == '+' || peek() == '-') advance();
      if (!is_digit(peek())) {
        pos_ = save;
        col_ = save_col;
        return;
      }
      while (pos_ < src_.size() && is_digit(src_[pos_])) advance();
    }
  }

  void lex_string(char quote) {
    int line = line_, col = col_;
    advance();
    while (pos_ < src_.size() && src_[pos_] != quote) {
      if (src_[pos_] == '\\') advance();
      if (pos_ < src_.size()) advance();
    }
    if (pos_ >= src_.size())
      throw syntax_error(error_code::lexical, "unterminated string", line,
                         col);
    advance();
  }

  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace

std::vector<token> tokenize(std::string_view source) {
  return lexer(source).run();
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

// Binding powers, loosest to tightest.
constexpr int bp_or = 10;
constexpr int bp_and = 20;
constexpr int bp_not = 30;
constexpr int bp_compare = 40;
constexpr int bp_additive = 50;
constexpr int bp_multiplicative = 60;
constexpr int bp_negate = 70;
constexpr int bp_pow = 80;
constexpr int bp_atom = 100;

std::optional<binary_op> binary_from(const token& t) {
  if (t.kind != token_kind::op) return std::nullopt;
  static const std::map<std::string, binary_op, std::less<>> ops = {
      {"+", binary_op::add},         {"-", binary_op::sub},
      {"*", binary_op::mul},         {"/", binary_op::div},
      {"^", binary_op::pow},         {"<", binary_op::lt},
      {"<=", binary_op::le},         {"==", binary_op::eq},
      {"!=", binary_op::ne},         {">=", binary_op::ge},
      {">", binary_op::gt},          {"&", binary_op::logical_and},
      {"|", binary_op::logical_or},  {"%in%", binary_op::in},
  };
  auto it = ops.find(t.text);
  if (it == ops.end()) return std::nullopt;
  return it->second;
}

int binding_power(binary_op op) {
  switch (op) {
    case binary_op::logical_or: return bp_or;
    case binary_op::logical_and: return bp_and;
    case binary_op::add:
    case binary_op::sub: return bp_additive;
    case binary_op::mul:
    case binary_op::div: return bp_multiplicative;
    case binary_op::pow: return bp_pow;
    default: return bp_compare;
  }
}

std::string decode_string(const std::string& raw) {
  std::string out;
  for (std::size_t i = 1; i + 1 < raw.size(); ++i) {
    char c = raw[i];
    if (c == '\\' && i + 2 < raw.size()) {
      char n = raw[++i];
      switch (n) {
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case 'r': out += '\r'; break;
        default: out += n; break;
      }
    } else {
      out += c;
    }
  }
  return out;
}

class parser {
public:
  explicit parser(std::string_view src) : tokens_(tokenize(src)) {
    if (!tokens_.empty()) {
      end_line_ = tokens_.back().line;
      end_col_ = tokens_.back().column +
                 static_cast<int>(tokens_.back().text.size());
    }
  }

  directive parse_directive() {
    if (tokens_.size() >= 2 && tokens_[0].kind == token_kind::identifier &&
        tokens_[1].text == ":=") {
      std::string name = tokens_[0].text;
      pos_ = 2;
      expression body = parse_rule_body();
      expect_end();
      if (auto c = body.as<call>(); c && c->name == "var_group") {
        if (!c->named.empty())
          fail_at(tokens_[2], "var_group takes variable names only");
        if (c->args.empty())
          fail_at(tokens_[2], "var_group needs at least one variable");
        std::vector<std::string> members;
        for (const auto& a : c->args) {
          auto id = a.as<identifier>();
          if (!id) fail_at(tokens_[2], "var_group takes variable names only");
          members.push_back(id->name);
        }
        return group_def{std::move(name), std::move(members)};
      }
      return macro_def{std::move(name), std::move(body)};
    }
    expression body = parse_rule_body();
    expect_end();
    return rule_expr{std::move(body)};
  }

  expression parse_only_expression() {
    expression e = parse_rule_body();
    expect_end();
    return e;
  }

private:
  expression parse_rule_body() {
    if (at_end()) fail_here("expected an expression");
    const token& first = peek();
    expression lhs = parse_expr(0);
    if (!at_end() && peek().text == "~") {
      const token& tilde = next();
      expression rhs = parse_expr(0);
      auto det = plus_chain(lhs, first);
      auto dep = plus_chain(rhs, tilde);
      return make_func_dep(std::move(det), std::move(dep));
    }
    return lhs;
  }

  // `a + b + c` flattened to names; anything else is not a dependency side.
  std::vector<std::string> plus_chain(const expression& e, const token& at) {
    std::vector<std::string> out;
    std::function<void(const expression&)> walk = [&](const expression& x) {
      if (auto id = x.as<identifier>()) {
        out.push_back(id->name);
      } else if (auto b = x.as<binary>(); b && b->op == binary_op::add) {
        walk(b->lhs);
        walk(b->rhs);
      } else {
        fail_at(at,
                "functional dependency sides must be variable names joined "
                "by '+'");
      }
    };
    walk(e);
    return out;
  }

  expression parse_expr(int min_bp) {
    expression lhs = parse_prefix();
    while (!at_end()) {
      auto op = binary_from(peek());
      if (!op) break;
      int bp = binding_power(*op);
      if (bp < min_bp) break;
      next();
      if (*op == binary_op::pow) {
        lhs = make_binary(*op, std::move(lhs), parse_expr(bp));
      } else {
        expression rhs = parse_expr(bp + 1);
        lhs = make_binary(*op, std::move(lhs), std::move(rhs));
        if (bp == bp_compare && !at_end()) {
          auto following = binary_from(peek());
          if (following && binding_power(*following) == bp_compare)
            fail_at(peek(), "comparison operators are non-associative");
        }
      }
    }
    return lhs;
  }

  expression parse_prefix() {
    if (at_end()) fail_here("unexpected end of input, expected an operand");
    const token& t = next();
    switch (t.kind) {
      case token_kind::number: {
        double v = 0;
        auto [p, ec] =
            std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc() || p != t.text.data() + t.text.size())
          fail_at(t, "malformed number '" + t.text + "'");
        return number(v);
      }
      case token_kind::string:
        return text(decode_string(t.text));
      case token_kind::boolean_literal:
        return boolean(t.text == "TRUE");
      case token_kind::missing_literal:
        return missing();
      case token_kind::keyword: {
        expect("(");
        expression cond = parse_rule_body_inner();
        expect(")");
        expression consequent = parse_expr(0);
        return make_implication(std::move(cond), std::move(consequent));
      }
      case token_kind::identifier:
        if (!at_end() && peek().text == "(") return parse_call(t);
        return ident(t.text);
      case token_kind::punctuation:
        if (t.text == ".") return dataset();
        if (t.text == "(") {
          expression inner = parse_rule_body_inner();
          expect(")");
          return paren(std::move(inner));
        }
        break;
      case token_kind::op:
        if (t.text == "!")
          return make_unary(unary_op::logical_not, parse_expr(bp_compare));
        if (t.text == "-")
          return make_unary(unary_op::negate, parse_expr(bp_negate));
        break;
    }
    fail_at(t, "unexpected '" + t.text + "', expected an operand");
  }

  expression parse_rule_body_inner() { return parse_expr(0); }

  expression parse_call(const token& name) {
    expect("(");
    std::vector<expression> args;
    std::vector<named_arg> named;
    if (!at_end() && peek().text == ")") {
      next();
      return make_call(name.text, std::move(args), std::move(named));
    }
    while (true) {
      if (pos_ + 1 < tokens_.size() &&
          peek().kind == token_kind::identifier &&
          tokens_[pos_ + 1].text == "=" &&
          tokens_[pos_ + 1].kind == token_kind::punctuation) {
        const token& arg_name = next();
        next();
        for (const auto& n : named)
          if (n.name == arg_name.text)
            fail_at(arg_name,
                    "duplicate named argument '" + arg_name.text + "'");
        named.push_back(named_arg{arg_name.text, parse_expr(0)});
      } else {
        args.push_back(parse_expr(0));
      }
      if (at_end()) fail_here("expected ',' or ')'");
      const token& sep = next();
      if (sep.text == ")") break;
      if (sep.text != ",") fail_at(sep, "expected ',' or ')' but found '" +
                                            sep.text + "'");
    }
    return make_call(name.text, std::move(args), std::move(named));
  }

  bool at_end() const { return pos_ >= tokens_.size(); }
  const token& peek() const { return tokens_[pos_]; }
  const token& next() { return tokens_[pos_++]; }

  void expect(std::string_view text) {
    if (at_end())
      fail_here("expected '" + std::string(text) + "' but reached end");
    if (peek().text != text)
      fail_at(peek(), "expected '" + std::string(text) + "' but found '" +
                          peek().text + "'");
    next();
  }

  void expect_end() {
    if (!at_end())
      fail_at(peek(), "unexpected '" + peek().text + "' after expression");
  }

  [[noreturn]] void fail_at(const token& t, const std::string& msg) const {
    throw syntax_error(error_code::parse, msg, t.line, t.column);
  }

  [[noreturn]] void fail_here(const std::string& msg) const {
    throw syntax_error(error_code::parse, msg, end_line_, end_col_);
  }

  std::vector<token> tokens_;
  std::size_t pos_ = 0;
  int end_line_ = 1;
  int end_col_ = 1;
};

}  // namespace

directive parse(std::string_view source) {
  return parser(source).parse_directive();
}

expression parse_expression(std::string_view source) {
  return parser(source).parse_only_expression();
}

bool is_identifier_name(std::string_view name) {
  if (name.empty() || !is_ident_start(name.front())) return false;
  return std::all_of(name.begin(), name.end(), is_ident_char);
}

// ---------------------------------------------------------------------------
// Classification
// ---------------------------------------------------------------------------

bool is_validating(const expression& e) {
  if (auto g = e.as<group>()) return is_validating(g->inner);
  if (auto u = e.as<unary>()) return u->op == unary_op::logical_not;
  if (auto c = e.as<call>()) {
    const std::string& f = c->name;
    return f == "all" || f == "any" || f == "grepl" || f.starts_with("is.") ||
           f.starts_with("is_") || f == "all_unique" || f == "all_complete";
  }
  if (auto b = e.as<binary>())
    return is_comparison(b->op) || b->op == binary_op::logical_and ||
           b->op == binary_op::logical_or;
  return e.is<implication>() || e.is<func_dep>();
}

rule_class classify(const directive& d) {
  if (std::holds_alternative<macro_def>(d)) return rule_class::macro;
  if (std::holds_alternative<group_def>(d)) return rule_class::group;
  return is_validating(std::get<rule_expr>(d).body) ? rule_class::validating
                                                    : rule_class::invalid;
}

// ---------------------------------------------------------------------------
// Tree transforms
// ---------------------------------------------------------------------------

namespace {

// Precedence of the node as an operand; atoms bind tightest.
int precedence(const expression& e) {
  if (auto b = e.as<binary>()) return binding_power(b->op);
  if (auto u = e.as<unary>())
    return u->op == unary_op::logical_not ? bp_not : bp_negate;
  if (e.is<implication>() || e.is<func_dep>()) return 0;
  return bp_atom;
}

// Rebuilds `e` with `f` applied to each direct child expression.
expression map_children(const expression& e,
                        const std::function<expression(const expression&)>& f) {
  return std::visit(
      [&](const auto& n) -> expression {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, group>) {
          return paren(f(n.inner));
        } else if constexpr (std::is_same_v<T, unary>) {
          return make_unary(n.op, f(n.operand));
        } else if constexpr (std::is_same_v<T, binary>) {
          // Children are visited left to right.
          expression lhs = f(n.lhs);
          expression rhs = f(n.rhs);
          return make_binary(n.op, std::move(lhs), std::move(rhs));
        } else if constexpr (std::is_same_v<T, call>) {
          std::vector<expression> args;
          for (const auto& a : n.args) args.push_back(f(a));
          std::vector<named_arg> named;
          for (const auto& a : n.named) named.push_back({a.name, f(a.value)});
          return make_call(n.name, std::move(args), std::move(named));
        } else if constexpr (std::is_same_v<T, implication>) {
          expression condition = f(n.condition);
          expression consequent = f(n.consequent);
          return make_implication(std::move(condition), std::move(consequent));
        } else {
          return e;
        }
      },
      e.node().value);
}

expression substitute(const expression& e, const macro_table& macros,
                      int site_bp) {
  if (auto id = e.as<identifier>()) {
    for (const auto& [name, body] : macros) {
      if (name != id->name) continue;
      bool compound = body.is<binary>() || body.is<implication>();
      if (compound && site_bp >= precedence(body)) return paren(body);
      return body;
    }
    return e;
  }
  if (auto b = e.as<binary>()) {
    int bp = binding_power(b->op);
    expression lhs = substitute(b->lhs, macros, bp);
    expression rhs = substitute(b->rhs, macros, bp);
    return make_binary(b->op, std::move(lhs), std::move(rhs));
  }
  if (auto u = e.as<unary>())
    return make_unary(u->op, substitute(u->operand, macros, precedence(e)));
  return map_children(e, [&](const expression& c) {
    return substitute(c, macros, -1);
  });
}

expression rename_identifiers(const expression& e,
                              const std::map<std::string, std::string>& names) {
  if (auto id = e.as<identifier>()) {
    auto it = names.find(id->name);
    return it == names.end() ? e : ident(it->second);
  }
  if (auto fd = e.as<func_dep>()) {
    auto ren = [&](std::vector<std::string> v) {
      for (auto& s : v)
        if (auto it = names.find(s); it != names.end()) s = it->second;
      return v;
    };
    return make_func_dep(ren(fd->determinant), ren(fd->dependent));
  }
  return map_children(
      e, [&](const expression& c) { return rename_identifiers(c, names); });
}

void collect_names(const expression& e, std::vector<std::string>& out) {
  auto add = [&](const std::string& n) {
    if (std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
  };
  if (auto id = e.as<identifier>()) {
    add(id->name);
    return;
  }
  if (auto fd = e.as<func_dep>()) {
    for (const auto& n : fd->determinant) add(n);
    for (const auto& n : fd->dependent) add(n);
    return;
  }
  map_children(e, [&](const expression& c) {
    collect_names(c, out);
    return c;
  });
}

}  // namespace

expression substitute_macros(const expression& e, const macro_table& macros) {
  if (macros.empty()) return e;
  return substitute(e, macros, -1);
}

std::vector<std::string> referenced_groups(const expression& e,
                                           const group_table& groups) {
  std::vector<std::string> out;
  for (const auto& name : variables(e))
    for (const auto& g : groups)
      if (g.first == name) out.push_back(name);
  return out;
}

std::vector<expression> expand_groups(const expression& e,
                                      const group_table& groups) {
  auto used = referenced_groups(e, groups);
  if (used.empty()) return {e};
  std::vector<const std::vector<std::string>*> members;
  for (const auto& name : used)
    for (const auto& g : groups)
      if (g.first == name) members.push_back(&g.second);

  std::vector<expression> out;
  std::vector<std::size_t> idx(used.size(), 0);
  while (true) {
    std::map<std::string, std::string> names;
    for (std::size_t k = 0; k < used.size(); ++k)
      names[used[k]] = (*members[k])[idx[k]];
    out.push_back(rename_identifiers(e, names));
    // Odometer with the last group varying fastest.
    std::size_t k = used.size();
    while (k > 0) {
      --k;
      if (++idx[k] < members[k]->size()) break;
      idx[k] = 0;
      if (k == 0) return out;
    }
  }
}

expression rewrite_implication(const expression& e) {
  if (auto imp = e.as<implication>()) {
    auto wrap = [](expression x) {
      return x.is<group>() ? x : paren(std::move(x));
    };
    return make_binary(
        binary_op::logical_or,
        make_unary(unary_op::logical_not,
                   wrap(rewrite_implication(imp->condition))),
        wrap(rewrite_implication(imp->consequent)));
  }
  return map_children(e, rewrite_implication);
}

bool is_constant(const expression& e) {
  if (e.is<number_lit>()) return true;
  if (auto g = e.as<group>()) return is_constant(g->inner);
  if (auto u = e.as<unary>())
    return u->op == unary_op::negate && is_constant(u->operand);
  if (auto b = e.as<binary>()) {
    switch (b->op) {
      case binary_op::add:
      case binary_op::sub:
      case binary_op::mul:
      case binary_op::div:
      case binary_op::pow:
        return is_constant(b->lhs) && is_constant(b->rhs);
      default:
        return false;
    }
  }
  return false;
}

bool is_linear(const expression& e) {
  if (e.is<number_lit>() || e.is<identifier>()) return true;
  if (auto g = e.as<group>()) return is_linear(g->inner);
  if (auto u = e.as<unary>())
    return u->op == unary_op::negate && is_linear(u->operand);
  if (auto b = e.as<binary>()) {
    if (b->op == binary_op::add || b->op == binary_op::sub)
      return is_linear(b->lhs) && is_linear(b->rhs);
    if (b->op == binary_op::mul)
      return (is_constant(b->lhs) && is_linear(b->rhs)) ||
             (is_constant(b->rhs) && is_linear(b->lhs));
  }
  return false;
}

expression rewrite_tolerance(const expression& e, double eps_eq,
                             double eps_ineq) {
  auto b = e.as<binary>();
  if (!b) return e;
  bool equality = b->op == binary_op::eq;
  bool inequality = b->op == binary_op::lt || b->op == binary_op::le ||
                    b->op == binary_op::gt || b->op == binary_op::ge;
  if (!equality && !inequality) return e;
  double eps = equality ? eps_eq : eps_ineq;
  if (!(eps > 0) || !is_linear(b->lhs) || !is_linear(b->rhs)) return e;

  auto rb = b->rhs.as<binary>();
  bool additive =
      rb && (rb->op == binary_op::add || rb->op == binary_op::sub);
  expression rhs = additive ? paren(b->rhs) : b->rhs;
  expression diff = make_binary(binary_op::sub, b->lhs, rhs);
  if (equality)
    return make_binary(binary_op::lt, make_call("abs", {diff}), number(eps));
  expression bound = (b->op == binary_op::le || b->op == binary_op::lt)
                         ? number(eps)
                         : make_unary(unary_op::negate, number(eps));
  return make_binary(b->op, paren(diff), bound);
}

std::vector<std::string> variables(const expression& e) {
  std::vector<std::string> out;
  collect_names(e, out);
  return out;
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

std::string format_number(double v) {
  if (std::isnan(v)) return "NaN";
  if (std::isinf(v)) return v > 0 ? "Inf" : "-Inf";
  if (v == 0) return "0";
  char buf[64];
  double mag = std::fabs(v);
  auto fmt = (mag != 0 && (mag < 1e-4 || mag >= 1e15))
                 ? std::chars_format::scientific
                 : std::chars_format::fixed;
  auto res = std::to_chars(buf, buf + sizeof buf, v, fmt);
  return std::string(buf, res.ptr);
}

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out += c; break;
    }
  }
  return out + "\"";
}

std::string render_operand(const expression& e, bool parens) {
  std::string s = render(e);
  return parens ? "(" + s + ")" : s;
}

}  // namespace

std::string render(const expression& e) {
  return std::visit(
      [&](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, number_lit>) {
          return format_number(n.value);
        } else if constexpr (std::is_same_v<T, string_lit>) {
          return quote(n.value);
        } else if constexpr (std::is_same_v<T, bool_lit>) {
          return n.value ? "TRUE" : "FALSE";
        } else if constexpr (std::is_same_v<T, missing_lit>) {
          return "NA";
        } else if constexpr (std::is_same_v<T, identifier>) {
          return n.name;
        } else if constexpr (std::is_same_v<T, dataset_ref>) {
          return ".";
        } else if constexpr (std::is_same_v<T, group>) {
          return "(" + render(n.inner) + ")";
        } else if constexpr (std::is_same_v<T, unary>) {
          int need = n.op == unary_op::logical_not ? bp_compare : bp_negate;
          std::string op = n.op == unary_op::logical_not ? "!" : "-";
          return op + render_operand(n.operand,
                                     precedence(n.operand) < need &&
                                         !n.operand.template is<unary>());
        } else if constexpr (std::is_same_v<T, binary>) {
          int p = binding_power(n.op);
          bool right_assoc = n.op == binary_op::pow;
          int lp = precedence(n.lhs), rp = precedence(n.rhs);
          bool lparen = right_assoc ? lp <= p : lp < p;
          if (p == bp_compare) lparen = lp <= p;
          bool rparen = right_assoc ? rp < p : rp <= p;
          if (n.rhs.template is<unary>()) rparen = false;
          std::string sep = (n.op == binary_op::div || n.op == binary_op::pow)
                                ? ""
                                : " ";
          return render_operand(n.lhs, lparen) + sep + symbol(n.op) + sep +
                 render_operand(n.rhs, rparen);
        } else if constexpr (std::is_same_v<T, call>) {
          std::string out = n.name + "(";
          bool first = true;
          for (const auto& a : n.args) {
            if (!first) out += ", ";
            out += render(a);
            first = false;
          }
          for (const auto& a : n.named) {
            if (!first) out += ", ";
            out += a.name + " = " + render(a.value);
            first = false;
          }
          return out + ")";
        } else if constexpr (std::is_same_v<T, implication>) {
          return "if (" + render(n.condition) + ") " + render(n.consequent);
        } else {
          std::string out;
          for (std::size_t i = 0; i < n.determinant.size(); ++i)
            out += (i ? " + " : "") + n.determinant[i];
          out += " ~ ";
          for (std::size_t i = 0; i < n.dependent.size(); ++i)
            out += (i ? " + " : "") + n.dependent[i];
          return out;
        }
      },
      e.node().value);
}

std::string render(const directive& d) {
  if (auto m = std::get_if<macro_def>(&d))
    return m->name + " := " + render(m->body);
  if (auto g = std::get_if<group_def>(&d)) {
    std::string out = g->name + " := var_group(";
    for (std::size_t i = 0; i < g->members.size(); ++i)
      out += (i ? ", " : "") + g->members[i];
    return out + ")";
  }
  return render(std::get<rule_expr>(d).body);
}

}  // namespace checkmate::dsl
