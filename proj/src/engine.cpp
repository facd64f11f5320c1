#include "checkmate/engine.hpp"

#include "checkmate/error.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <regex>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include <fmt/format.h>

namespace checkmate {

void add_reference(ref_table& ref, const data_frame& frame) {
  for (const auto& c : frame.columns()) ref[c.name] = c.data;
}

namespace {

using dsl::binary_op;
using dsl::expression;

[[noreturn]] void type_fail(const std::string& msg) {
  throw error(error_code::type, msg);
}

std::string type_name(const value& v) {
  switch (v.index()) {
    case 0: return "logical";
    case 1: return "numeric";
    case 2: return "character";
    default: return "dataset";
  }
}

std::size_t length(const value& v) {
  return std::visit(
      [](const auto& x) -> std::size_t {
        if constexpr (std::is_same_v<std::decay_t<decltype(x)>, whole_frame>)
          return 1;
        else
          return x.size();
      },
      v);
}

// An all-NA logical vector stands in for a missing value of any type.
bool is_untyped_na(const value& v) {
  auto l = std::get_if<logical_vector>(&v);
  return l && std::all_of(l->begin(), l->end(),
                          [](tri t) { return t == tri::na; });
}

value promote_na(const value& v, std::size_t target_index) {
  std::size_t n = length(v);
  if (target_index == 1) return number_vector(n);
  if (target_index == 2) return text_vector(n);
  return v;
}

const number_vector& need_number(const value& v, const std::string& what,
                                 number_vector& scratch) {
  if (auto n = std::get_if<number_vector>(&v)) return *n;
  if (is_untyped_na(v)) {
    scratch.assign(length(v), std::nullopt);
    return scratch;
  }
  type_fail(what + " needs a numeric argument, got " + type_name(v));
}

const logical_vector& need_logical(const value& v, const std::string& what) {
  if (auto l = std::get_if<logical_vector>(&v)) return *l;
  type_fail(what + " needs a logical argument, got " + type_name(v));
}

const text_vector& need_text(const value& v, const std::string& what,
                             text_vector& scratch) {
  if (auto t = std::get_if<text_vector>(&v)) return *t;
  if (is_untyped_na(v)) {
    scratch.assign(length(v), std::nullopt);
    return scratch;
  }
  type_fail(what + " needs a character argument, got " + type_name(v));
}

std::size_t broadcast_size(std::size_t a, std::size_t b, const char* op) {
  if (a == b) return a;
  if (a == 1) return b;
  if (b == 1) return a;
  throw error(error_code::length,
              fmt::format("operands of '{}' have lengths {} and {}", op, a, b));
}

inline std::size_t at(std::size_t i, std::size_t n) { return n == 1 ? 0 : i; }

std::optional<double> clean(double x) {
  if (std::isnan(x)) return std::nullopt;
  return x;
}

value arithmetic(binary_op op, const value& a, const value& b) {
  number_vector sa, sb;
  const auto& x = need_number(a, std::string("'") + symbol(op) + "'", sa);
  const auto& y = need_number(b, std::string("'") + symbol(op) + "'", sb);
  std::size_t n = broadcast_size(x.size(), y.size(), symbol(op));
  number_vector out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& l = x[at(i, x.size())];
    const auto& r = y[at(i, y.size())];
    if (!l || !r) continue;
    switch (op) {
      case binary_op::add: out[i] = clean(*l + *r); break;
      case binary_op::sub: out[i] = clean(*l - *r); break;
      case binary_op::mul: out[i] = clean(*l * *r); break;
      case binary_op::div: out[i] = clean(*l / *r); break;
      case binary_op::pow: out[i] = clean(std::pow(*l, *r)); break;
      default: break;
    }
  }
  return out;
}

template <class T>
tri compare_cells(binary_op op, const T& l, const T& r) {
  switch (op) {
    case binary_op::lt: return to_tri(l < r);
    case binary_op::le: return to_tri(l <= r);
    case binary_op::eq: return to_tri(l == r);
    case binary_op::ne: return to_tri(l != r);
    case binary_op::ge: return to_tri(l >= r);
    case binary_op::gt: return to_tri(l > r);
    default: return tri::na;
  }
}

template <class Vec, class Get>
logical_vector compare_vectors(binary_op op, const Vec& x, const Vec& y,
                               Get get) {
  std::size_t n = broadcast_size(x.size(), y.size(), symbol(op));
  logical_vector out(n, tri::na);
  for (std::size_t i = 0; i < n; ++i) {
    auto l = get(x, at(i, x.size()));
    auto r = get(y, at(i, y.size()));
    if (l && r) out[i] = compare_cells(op, *l, *r);
  }
  return out;
}

// Brings two operands to a common type, resolving untyped NA.
std::pair<value, value> unify(const value& a, const value& b, const char* op) {
  if (a.index() == b.index()) return {a, b};
  if (is_untyped_na(a) && b.index() < 3) return {promote_na(a, b.index()), b};
  if (is_untyped_na(b) && a.index() < 3) return {a, promote_na(b, a.index())};
  type_fail(fmt::format("cannot compare {} with {} in '{}'", type_name(a),
                        type_name(b), op));
}

value comparison(binary_op op, const value& a0, const value& b0) {
  auto [a, b] = unify(a0, b0, symbol(op));
  if (auto x = std::get_if<number_vector>(&a))
    return compare_vectors(op, *x, std::get<number_vector>(b),
                           [](const number_vector& v, std::size_t i) {
                             return v[i];
                           });
  if (auto x = std::get_if<text_vector>(&a))
    return compare_vectors(op, *x, std::get<text_vector>(b),
                           [](const text_vector& v, std::size_t i) {
                             return v[i] ? &*v[i] : nullptr;
                           });
  if (auto x = std::get_if<logical_vector>(&a))
    return compare_vectors(op, *x, std::get<logical_vector>(b),
                           [](const logical_vector& v, std::size_t i) {
                             return v[i] == tri::na
                                        ? std::optional<int>()
                                        : std::optional<int>(
                                              v[i] == tri::true_ ? 1 : 0);
                           });
  type_fail("'.' cannot be compared");
}

// Typed key of one cell; missing cells share one key.
std::string cell_key(const column_data& d, std::size_t i) {
  if (is_missing(d, i)) return "\x01NA";
  switch (d.index()) {
    case 0: return std::string("b:") + std::string(to_string(std::get<0>(d)[i]));
    case 1: return "n:" + dsl::format_number(*std::get<1>(d)[i]);
    default: return "s:" + *std::get<2>(d)[i];
  }
}

column_data to_column(const value& v, const std::string& what) {
  switch (v.index()) {
    case 0: return std::get<0>(v);
    case 1: return std::get<1>(v);
    case 2: return std::get<2>(v);
    default: type_fail(what + " cannot take '.' as an argument");
  }
}

value membership(const value& a0, const value& b0) {
  auto [a, b] = unify(a0, b0, "%in%");
  column_data lhs = to_column(a, "%in%");
  column_data rhs = to_column(b, "%in%");
  std::unordered_set<std::string> set;
  for (std::size_t i = 0; i < size_of(rhs); ++i)
    if (!is_missing(rhs, i)) set.insert(cell_key(rhs, i));
  logical_vector out(size_of(lhs), tri::na);
  for (std::size_t i = 0; i < out.size(); ++i)
    if (!is_missing(lhs, i)) out[i] = to_tri(set.count(cell_key(lhs, i)) > 0);
  return out;
}

value logical_op(binary_op op, const value& a, const value& b) {
  const char* sym = symbol(op);
  const auto& x = need_logical(a, std::string("'") + sym + "'");
  const auto& y = need_logical(b, std::string("'") + sym + "'");
  std::size_t n = broadcast_size(x.size(), y.size(), sym);
  logical_vector out(n);
  for (std::size_t i = 0; i < n; ++i) {
    tri l = x[at(i, x.size())], r = y[at(i, y.size())];
    out[i] = op == binary_op::logical_and ? (l & r) : (l | r);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Built-in functions
// ---------------------------------------------------------------------------

class evaluator;

using builtin = std::function<value(const dsl::call&, evaluator&)>;

class evaluator {
public:
  explicit evaluator(const scope& env) : env_(env) {}

  value eval(const expression& e);

  const data_frame& frame() const { return env_.frame; }
  void warn(std::string msg) {
    if (env_.warnings) env_.warnings->push_back(std::move(msg));
  }

private:
  value eval_identifier(const std::string& name) {
    if (auto c = env_.frame.find(name)) return from_column(c->data);
    if (env_.ref) {
      auto it = env_.ref->find(name);
      if (it != env_.ref->end()) return from_column(it->second);
    }
    throw error(error_code::unknown_variable,
                "object '" + name + "' not found");
  }

  static value from_column(const column_data& d) {
    return std::visit([](const auto& v) -> value { return v; }, d);
  }

  value eval_call(const dsl::call& c);

  const scope& env_;
};

void check_arity(const dsl::call& c, std::size_t min, std::size_t max,
                 std::initializer_list<std::string_view> named = {}) {
  if (c.args.size() < min || c.args.size() > max) {
    std::string want = min == max ? std::to_string(min)
                       : max == SIZE_MAX
                           ? "at least " + std::to_string(min)
                           : fmt::format("{} to {}", min, max);
    throw error(error_code::arity,
                fmt::format("{}() takes {} argument(s), got {}", c.name, want,
                            c.args.size()));
  }
  for (const auto& n : c.named)
    if (std::find(named.begin(), named.end(), n.name) == named.end())
      throw error(error_code::arity,
                  fmt::format("{}() has no argument '{}'", c.name, n.name));
}

bool na_rm(const dsl::call& c, evaluator& ev) {
  const expression* arg = c.find_named("na.rm");
  if (!arg) return false;
  value v = ev.eval(*arg);
  auto l = std::get_if<logical_vector>(&v);
  if (!l || l->size() != 1 || (*l)[0] == tri::na)
    type_fail(c.name + "(): na.rm must be TRUE or FALSE");
  return (*l)[0] == tri::true_;
}

value metadata_call(const dsl::call& c, evaluator& ev) {
  bool allow_empty = c.name == "nrow" || c.name == "number_of_records";
  check_arity(c, allow_empty ? 0 : 1, 1);
  if (!c.args.empty() && !std::holds_alternative<whole_frame>(ev.eval(c.args[0])))
    type_fail(c.name + "() expects '.' (the dataset)");
  const data_frame& f = ev.frame();
  if (c.name == "ncol") return number_vector{static_cast<double>(f.cols())};
  if (c.name == "names") {
    text_vector out;
    for (const auto& n : f.names()) out.emplace_back(n);
    return out;
  }
  return number_vector{static_cast<double>(f.rows())};
}

value quantifier(const dsl::call& c, evaluator& ev) {
  check_arity(c, 1, 1, {"na.rm"});
  bool drop = na_rm(c, ev);
  value v = ev.eval(c.args[0]);
  const auto& x = need_logical(v, c.name + "()");
  bool is_all = c.name == "all";
  tri acc = is_all ? tri::true_ : tri::false_;
  for (tri t : x) {
    if (drop && t == tri::na) continue;
    acc = is_all ? (acc & t) : (acc | t);
  }
  return logical_vector{acc};
}

value abs_call(const dsl::call& c, evaluator& ev) {
  check_arity(c, 1, 1);
  value v = ev.eval(c.args[0]);
  number_vector scratch;
  number_vector out = need_number(v, "abs()", scratch);
  for (auto& x : out)
    if (x) x = std::fabs(*x);
  return out;
}

value reduce_call(const dsl::call& c, evaluator& ev) {
  check_arity(c, 1, 1, {"na.rm"});
  bool drop = na_rm(c, ev);
  value v = ev.eval(c.args[0]);
  number_vector scratch;
  const auto& x = need_number(v, c.name + "()", scratch);
  std::vector<double> xs;
  for (const auto& e : x) {
    if (!e) {
      if (drop) continue;
      return number_vector{std::nullopt};
    }
    xs.push_back(*e);
  }
  const std::string& f = c.name;
  if (f == "sum")
    return number_vector{clean(std::accumulate(xs.begin(), xs.end(), 0.0))};
  if (xs.empty()) return number_vector{std::nullopt};
  if (f == "mean")
    return number_vector{
        clean(std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size())};
  if (f == "min") return number_vector{*std::min_element(xs.begin(), xs.end())};
  if (f == "max") return number_vector{*std::max_element(xs.begin(), xs.end())};
  std::sort(xs.begin(), xs.end());
  std::size_t m = xs.size() / 2;
  double med = xs.size() % 2 ? xs[m] : (xs[m - 1] + xs[m]) / 2;
  return number_vector{med};
}

value cor_call(const dsl::call& c, evaluator& ev) {
  check_arity(c, 2, 2);
  value va = ev.eval(c.args[0]), vb = ev.eval(c.args[1]);
  number_vector sa, sb;
  const auto& x = need_number(va, "cor()", sa);
  const auto& y = need_number(vb, "cor()", sb);
  if (x.size() != y.size())
    throw error(error_code::length,
                fmt::format("cor() arguments have lengths {} and {}",
                            x.size(), y.size()));
  std::vector<std::pair<double, double>> pairs;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] && y[i]) pairs.emplace_back(*x[i], *y[i]);
  if (pairs.size() < 2) return number_vector{std::nullopt};
  double mx = 0, my = 0;
  for (auto [a, b] : pairs) {
    mx += a;
    my += b;
  }
  mx /= pairs.size();
  my /= pairs.size();
  double sxy = 0, sxx = 0, syy = 0;
  for (auto [a, b] : pairs) {
    sxy += (a - mx) * (b - my);
    sxx += (a - mx) * (a - mx);
    syy += (b - my) * (b - my);
  }
  if (sxx == 0 || syy == 0) return number_vector{std::nullopt};
  return number_vector{sxy / std::sqrt(sxx * syy)};
}

value grepl_call(const dsl::call& c, evaluator& ev) {
  check_arity(c, 2, 2);
  value vp = ev.eval(c.args[0]), vx = ev.eval(c.args[1]);
  text_vector sp, sx;
  const auto& p = need_text(vp, "grepl() pattern", sp);
  if (p.size() != 1 || !p[0]) type_fail("grepl() pattern must be one string");
  const auto& x = need_text(vx, "grepl()", sx);
  std::optional<std::regex> re;
  try {
    re.emplace(*p[0], std::regex::ECMAScript);
  } catch (const std::regex_error&) {
    ev.warn("invalid regular expression '" + *p[0] +
            "', matched as a literal string");
  }
  logical_vector out(x.size(), tri::na);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!x[i]) continue;
    out[i] = to_tri(re ? std::regex_search(*x[i], *re)
                       : x[i]->find(*p[0]) != std::string::npos);
  }
  return out;
}

// Per-record composite keys over the call's arguments.
std::vector<std::string> record_keys(const dsl::call& c, evaluator& ev,
                                     std::vector<bool>* incomplete) {
  check_arity(c, 1, SIZE_MAX);
  std::vector<column_data> cols;
  for (const auto& a : c.args) cols.push_back(to_column(ev.eval(a), c.name + "()"));
  std::size_t n = size_of(cols[0]);
  for (const auto& col : cols)
    if (size_of(col) != n)
      throw error(error_code::length,
                  c.name + "() arguments must have equal lengths");
  std::vector<std::string> keys(n);
  if (incomplete) incomplete->assign(n, false);
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& col : cols) {
      keys[i] += cell_key(col, i);
      keys[i] += '\x1f';
      if (incomplete && is_missing(col, i)) (*incomplete)[i] = true;
    }
  return keys;
}

value duplicated_call(const dsl::call& c, evaluator& ev) {
  auto keys = record_keys(c, ev, nullptr);
  std::unordered_set<std::string> seen;
  logical_vector out(keys.size());
  for (std::size_t i = 0; i < keys.size(); ++i)
    out[i] = to_tri(!seen.insert(keys[i]).second);
  return out;
}

value unique_call(const dsl::call& c, evaluator& ev) {
  std::vector<bool> incomplete;
  auto keys = record_keys(c, ev, &incomplete);
  std::unordered_map<std::string, std::size_t> counts;
  for (std::size_t i = 0; i < keys.size(); ++i)
    if (!incomplete[i]) ++counts[keys[i]];
  logical_vector out(keys.size(), tri::na);
  for (std::size_t i = 0; i < keys.size(); ++i)
    if (!incomplete[i]) out[i] = to_tri(counts[keys[i]] == 1);
  if (c.name == "is_unique") return out;
  tri acc = tri::true_;
  for (tri t : out) acc = acc & t;
  return logical_vector{acc};
}

value complete_call(const dsl::call& c, evaluator& ev) {
  std::vector<bool> incomplete;
  auto keys = record_keys(c, ev, &incomplete);
  logical_vector out(keys.size());
  for (std::size_t i = 0; i < keys.size(); ++i) out[i] = to_tri(!incomplete[i]);
  if (c.name == "is_complete") return out;
  tri acc = tri::true_;
  for (tri t : out) acc = acc & t;
  return logical_vector{acc};
}

value type_test_call(const dsl::call& c, evaluator& ev) {
  check_arity(c, 1, 1);
  value v = ev.eval(c.args[0]);
  std::string_view kind = std::string_view(c.name).substr(3);
  if (kind == "na") {
    logical_vector out;
    std::visit(
        [&](const auto& x) {
          if constexpr (!std::is_same_v<std::decay_t<decltype(x)>,
                                        whole_frame>) {
            for (std::size_t i = 0; i < x.size(); ++i)
              out.push_back(to_tri(is_missing(column_data(x), i)));
          } else {
            type_fail("is.na() cannot take '.'");
          }
        },
        v);
    return out;
  }
  std::size_t want = kind == "numeric" ? 1 : kind == "character" ? 2 : 0;
  return logical_vector{to_tri(v.index() == want)};
}

value concat_call(const dsl::call& c, evaluator& ev) {
  check_arity(c, 0, SIZE_MAX);
  std::vector<value> parts;
  std::size_t type = 0;
  bool typed = false;
  for (const auto& a : c.args) {
    parts.push_back(ev.eval(a));
    if (parts.back().index() == 3) type_fail("c() cannot take '.'");
    if (is_untyped_na(parts.back())) continue;
    if (typed && parts.back().index() != type)
      type_fail("c() arguments must share one type");
    type = parts.back().index();
    typed = true;
  }
  value out = typed ? promote_na(logical_vector{}, type) : logical_vector{};
  for (const auto& p : parts) {
    value q = p.index() == type ? p : promote_na(p, type);
    std::visit(
        [&](auto& dst) {
          using V = std::decay_t<decltype(dst)>;
          if constexpr (!std::is_same_v<V, whole_frame>) {
            const auto& src = std::get<V>(q);
            dst.insert(dst.end(), src.begin(), src.end());
          }
        },
        out);
  }
  return out;
}

const std::unordered_map<std::string, builtin>& builtins() {
  static const std::unordered_map<std::string, builtin> table = [] {
    std::unordered_map<std::string, builtin> t;
    for (auto n : {"nrow", "ncol", "names", "number_of_records"})
      t[n] = metadata_call;
    t["all"] = quantifier;
    t["any"] = quantifier;
    t["abs"] = abs_call;
    for (auto n : {"mean", "sum", "min", "max", "median"}) t[n] = reduce_call;
    t["cor"] = cor_call;
    t["grepl"] = grepl_call;
    t["duplicated"] = duplicated_call;
    for (auto n : {"is_unique", "all_unique"}) t[n] = unique_call;
    for (auto n : {"is_complete", "all_complete"}) t[n] = complete_call;
    for (auto kind : {"numeric", "character", "logical", "na"}) {
      t[std::string("is.") + kind] = type_test_call;
      t[std::string("is_") + kind] = type_test_call;
    }
    t["c"] = concat_call;
    return t;
  }();
  return table;
}

value evaluator::eval_call(const dsl::call& c) {
  auto it = builtins().find(c.name);
  if (it == builtins().end())
    throw error(error_code::unknown_function,
                "could not find function \"" + c.name + "\"");
  return it->second(c, *this);
}

value evaluator::eval(const expression& e) {
  return std::visit(
      [&](const auto& n) -> value {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, dsl::number_lit>) {
          return number_vector{clean(n.value)};
        } else if constexpr (std::is_same_v<T, dsl::string_lit>) {
          return text_vector{n.value};
        } else if constexpr (std::is_same_v<T, dsl::bool_lit>) {
          return logical_vector{to_tri(n.value)};
        } else if constexpr (std::is_same_v<T, dsl::missing_lit>) {
          return logical_vector{tri::na};
        } else if constexpr (std::is_same_v<T, dsl::identifier>) {
          return eval_identifier(n.name);
        } else if constexpr (std::is_same_v<T, dsl::dataset_ref>) {
          return whole_frame{};
        } else if constexpr (std::is_same_v<T, dsl::group>) {
          return eval(n.inner);
        } else if constexpr (std::is_same_v<T, dsl::unary>) {
          value v = eval(n.operand);
          if (n.op == dsl::unary_op::logical_not) {
            logical_vector out = need_logical(v, "'!'");
            for (auto& t : out) t = !t;
            return out;
          }
          number_vector scratch;
          number_vector out = need_number(v, "unary '-'", scratch);
          for (auto& x : out)
            if (x) x = -*x;
          return out;
        } else if constexpr (std::is_same_v<T, dsl::binary>) {
          value a = eval(n.lhs);
          value b = eval(n.rhs);
          switch (n.op) {
            case binary_op::add:
            case binary_op::sub:
            case binary_op::mul:
            case binary_op::div:
            case binary_op::pow:
              return arithmetic(n.op, a, b);
            case binary_op::logical_and:
            case binary_op::logical_or:
              return logical_op(n.op, a, b);
            case binary_op::in:
              return membership(a, b);
            default:
              return comparison(n.op, a, b);
          }
        } else if constexpr (std::is_same_v<T, dsl::call>) {
          return eval_call(n);
        } else if constexpr (std::is_same_v<T, dsl::implication>) {
          return eval(dsl::rewrite_implication(e));
        } else {
          type_fail("a functional dependency must be a whole rule");
        }
      },
      e.node().value);
}

}  // namespace

value eval_expr(const dsl::expression& e, const scope& env) {
  evaluator ev(env);
  return ev.eval(e);
}

logical_vector eval_fd(const dsl::func_dep& fd, const data_frame& frame) {
  auto columns_of = [&](const std::vector<std::string>& names) {
    std::vector<const column*> out;
    for (const auto& n : names) {
      auto c = frame.find(n);
      if (!c)
        throw error(error_code::unknown_variable,
                    "object '" + n + "' not found");
      out.push_back(c);
    }
    return out;
  };
  auto det = columns_of(fd.determinant);
  auto dep = columns_of(fd.dependent);
  auto key = [](const std::vector<const column*>& cols, std::size_t i) {
    std::string k;
    for (auto c : cols) k += cell_key(c->data, i) + '\x1f';
    return k;
  };

  logical_vector out(frame.rows(), tri::na);
  std::unordered_map<std::string, std::string> reference;
  for (std::size_t i = 0; i < frame.rows(); ++i) {
    bool complete = std::none_of(dep.begin(), dep.end(), [&](const column* c) {
      return c->missing(i);
    });
    if (!complete) continue;
    std::string dep_key = key(dep, i);
    auto [it, inserted] = reference.emplace(key(det, i), dep_key);
    out[i] = to_tri(inserted || it->second == dep_key);
  }
  return out;
}

validation validation::subset(std::span<const std::size_t> indices) const {
  validation out = *this;
  out.outcomes.clear();
  for (auto i : indices) {
    if (i >= outcomes.size())
      throw error(error_code::index_out_of_range,
                  fmt::format("outcome index {} out of range (size {})", i + 1,
                              outcomes.size()));
    out.outcomes.push_back(outcomes[i]);
  }
  return out;
}

validation validation::subset(std::span<const std::string> names) const {
  std::vector<std::size_t> idx;
  for (const auto& n : names) {
    auto it = std::find_if(outcomes.begin(), outcomes.end(),
                           [&](const outcome& o) { return o.name == n; });
    if (it == outcomes.end())
      throw error(error_code::unknown_name, "no rule named '" + n + "'");
    idx.push_back(static_cast<std::size_t>(it - outcomes.begin()));
  }
  return subset(idx);
}

dsl::expression prepare_rule(const dsl::expression& body,
                             const option_set& opts) {
  return dsl::rewrite_tolerance(dsl::rewrite_implication(body),
                                opts.lin_eq_eps, opts.lin_ineq_eps);
}

validation confront(const data_frame& frame, const rule_set& rules,
                    const confront_options& opts) {
  option_set resolved =
      resolve(global_options(), rules.local_options(), opts.overrides);

  validation v;
  v.records = frame.rows();
  v.created = opts.now ? *opts.now : now_seconds();
  v.call_text = fmt::format("confront(dat = {}, x = {}", opts.data_label,
                            opts.rules_label);
  if (opts.key) {
    const column* key = frame.find(*opts.key);
    if (!key)
      throw error(error_code::unknown_key,
                  "key column '" + *opts.key + "' not found");
    for (std::size_t i = 0; i < frame.rows(); ++i) {
      if (key->missing(i))
        throw error(error_code::unknown_key,
                    "key column '" + *opts.key + "' has missing values");
      v.key_values.push_back(cell_text(key->data, i));
    }
    v.key_name = *opts.key;
    v.call_text += fmt::format(", key = \"{}\"", *opts.key);
  }
  v.call_text += ")";

  for (const auto& r : rules) {
    outcome o;
    o.name = r.name;
    dsl::expression expr = prepare_rule(r.body, resolved);
    o.expression = dsl::render(expr);
    try {
      logical_vector result;
      if (auto fd = expr.as<dsl::func_dep>()) {
        result = eval_fd(*fd, frame);
      } else {
        value val = eval_expr(expr, scope{frame, &opts.ref, &o.warnings});
        auto l = std::get_if<logical_vector>(&val);
        if (!l)
          throw error(error_code::type,
                      "rule does not evaluate to a logical value (got " +
                          type_name(val) + ")");
        result = std::move(*l);
      }
      if (resolved.raise == raise_mode::all && !o.warnings.empty())
        throw error(error_code::raised_warning,
                    "warning in rule '" + r.name + "': " + o.warnings.front());
      if (resolved.na_value != tri::na)
        for (auto& t : result)
          if (t == tri::na) t = resolved.na_value;
      o.result = std::move(result);
    } catch (const error& e) {
      if (resolved.raise != raise_mode::none) throw;
      o.result = rule_error{e.what()};
    }
    v.outcomes.push_back(std::move(o));
  }
  return v;
}

validation check_that(const data_frame& frame,
                      const std::vector<std::string>& sources,
                      const confront_options& opts) {
  if (sources.empty())
    throw error(error_code::empty_ruleset,
                "a ruleset must contain at least one rule");
  std::vector<std::pair<std::optional<std::string>, std::string>> entries;
  for (const auto& s : sources) entries.emplace_back(std::nullopt, s);
  timestamp now = opts.now ? *opts.now : now_seconds();
  auto built = new_ruleset(entries, "command-line", now);
  return confront(frame, built.rules, opts);
}

std::string format_banner(const validation& v) {
  std::size_t fails = 0, warnings = 0, errors = 0;
  for (const auto& o : v.outcomes) {
    if (o.failed()) ++errors;
    if (!o.warnings.empty()) ++warnings;
    if (auto r = o.values();
        r && std::find(r->begin(), r->end(), tri::false_) != r->end())
      ++fails;
  }
  return fmt::format(
      "Object of class 'validation'\n"
      "Call:\n"
      "    {}\n"
      "\n"
      "Confrontations: {}\n"
      "With fails    : {}\n"
      "Warnings      : {}\n"
      "Errors        : {}\n",
      v.call_text, v.outcomes.size(), fails, warnings, errors);
}

}  // namespace checkmate
