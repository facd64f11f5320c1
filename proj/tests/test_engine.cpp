#include "checkmate/engine.hpp"
#include "checkmate/error.hpp"
#include "checkmate/results.hpp"

#include "support.hpp"

#include <cmath>
#include <map>
#include <random>

#include <gtest/gtest.h>

using namespace checkmate;
using namespace checkmate::testing;

namespace {

value eval(const std::string& src, const data_frame& df,
           std::vector<std::string>* warnings = nullptr,
           const ref_table* ref = nullptr) {
  auto e = dsl::rewrite_implication(dsl::parse_expression(src));
  return eval_expr(e, scope{df, ref, warnings});
}

logical_vector lv(const std::string& src, const data_frame& df) {
  return std::get<logical_vector>(eval(src, df));
}

constexpr tri T = tri::true_, F = tri::false_, N = tri::na;

data_frame small() {
  return data_frame({num("x", {1, -2, std::nullopt, 4}),
                     num("y", {1, 2, 3, std::nullopt}),
                     txt("s", {"sc1", "sc2", std::nullopt, "xx"}),
                     lgl("b", {T, F, N, T})});
}

error_code code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const error& e) {
    return e.code();
  }
  return error_code::usage;
}

}  // namespace

TEST(Eval, ComparisonsPropagateMissing) {
  auto df = small();
  EXPECT_EQ(lv("x >= 0", df), (logical_vector{T, F, N, T}));
  EXPECT_EQ(lv("x == y", df), (logical_vector{T, F, N, N}));
  EXPECT_EQ(lv("s == 'sc1'", df), (logical_vector{T, F, N, F}));
  EXPECT_EQ(lv("b == TRUE", df), (logical_vector{T, F, N, T}));
  EXPECT_EQ(lv("x > NA", df), (logical_vector{N, N, N, N}));
}

TEST(Eval, KleeneConnectives) {
  auto df = small();
  EXPECT_EQ(lv("b & x > 0", df), (logical_vector{T, F, N, T}));
  EXPECT_EQ(lv("b | x > 0", df), (logical_vector{T, F, N, T}));
  EXPECT_EQ(lv("!b", df), (logical_vector{F, T, N, F}));
  EXPECT_EQ(lv("FALSE & NA", df), (logical_vector{F}));
  EXPECT_EQ(lv("TRUE | NA", df), (logical_vector{T}));
}

TEST(Eval, Arithmetic) {
  auto df = small();
  auto v = std::get<number_vector>(eval("x * 2 + y^2 - 1 / 2", df));
  ASSERT_EQ(v.size(), 4u);
  EXPECT_DOUBLE_EQ(*v[0], 2.5);
  EXPECT_FALSE(v[2].has_value());
  auto d = std::get<number_vector>(eval("0 / 0", df));
  EXPECT_FALSE(d[0].has_value());
}

TEST(Eval, BroadcastOnlyScalars) {
  data_frame df({num("x", {1, 2, 3})});
  ref_table ref;
  ref["pair"] = number_vector{1, 2};
  EXPECT_EQ(code_of([&] { eval("x > pair", df, nullptr, &ref); }),
            error_code::length);
}

TEST(Eval, TypeAndNameErrors) {
  auto df = small();
  EXPECT_EQ(code_of([&] { eval("s > 1", df); }), error_code::type);
  EXPECT_EQ(code_of([&] { eval("x & b", df); }), error_code::type);
  EXPECT_EQ(code_of([&] { eval("employees >= 0", df); }),
            error_code::unknown_variable);
  EXPECT_EQ(code_of([&] { eval("nosuch(x)", df); }),
            error_code::unknown_function);
  EXPECT_EQ(code_of([&] { eval("abs(x, y)", df); }), error_code::arity);
  EXPECT_EQ(code_of([&] { eval("mean(x, trim = 1)", df); }), error_code::arity);
}

TEST(Eval, ReferenceData) {
  auto df = small();
  ref_table ref;
  add_reference(ref, data_frame({txt("codes", {"sc1", "sc2"})}));
  EXPECT_EQ(std::get<logical_vector>(eval("s %in% codes", df, nullptr, &ref)),
            (logical_vector{T, T, N, F}));
}

TEST(Functions, Aggregates) {
  auto df = small();
  auto n = [&](const std::string& src) {
    auto v = std::get<number_vector>(eval(src, df));
    return v[0];
  };
  EXPECT_FALSE(n("mean(x)").has_value());
  EXPECT_DOUBLE_EQ(*n("mean(x, na.rm = TRUE)"), 1.0);
  EXPECT_DOUBLE_EQ(*n("sum(y, na.rm = TRUE)"), 6.0);
  EXPECT_DOUBLE_EQ(*n("min(x, na.rm = TRUE)"), -2.0);
  EXPECT_DOUBLE_EQ(*n("max(x, na.rm = TRUE)"), 4.0);
  EXPECT_DOUBLE_EQ(*n("median(x, na.rm = TRUE)"), 1.0);
  EXPECT_DOUBLE_EQ(*n("nrow(.)"), 4.0);
  EXPECT_DOUBLE_EQ(*n("number_of_records()"), 4.0);
  EXPECT_DOUBLE_EQ(*n("ncol(.)"), 4.0);
  EXPECT_EQ(lv("all(x > -5)", df), (logical_vector{N}));
  EXPECT_EQ(lv("all(x > -5, na.rm = TRUE)", df), (logical_vector{T}));
  EXPECT_EQ(lv("any(x > 3)", df), (logical_vector{T}));
  EXPECT_EQ(lv("names(.) %in% c('x', 'b')", df), (logical_vector{T, F, F, T}));
}

TEST(Functions, Correlation) {
  data_frame df({num("h", {58, 59, 60, 61, 62}),
                 num("w", {115, 117, 120, 123, 126})});
  auto r = std::get<number_vector>(eval("cor(h, w)", df))[0];
  ASSERT_TRUE(r.has_value());
  // Hand computation: dx = -2..2, dy = -5.2,-3.2,-0.2,2.8,5.8.
  double sxy = 2 * 5.2 + 3.2 + 0 + 2.8 + 2 * 5.8;
  double sxx = 10, syy = 5.2 * 5.2 + 3.2 * 3.2 + 0.04 + 2.8 * 2.8 + 5.8 * 5.8;
  EXPECT_NEAR(*r, sxy / std::sqrt(sxx * syy), 1e-12);
}

TEST(Functions, PatternsTypesUniqueness) {
  auto df = small();
  EXPECT_EQ(lv("grepl('^sc[0-9]$', s)", df), (logical_vector{T, T, N, F}));
  std::vector<std::string> warnings;
  auto bad = std::get<logical_vector>(eval("grepl('sc[', s)", df, &warnings));
  EXPECT_EQ(warnings.size(), 1u);
  EXPECT_EQ(bad, (logical_vector{F, F, N, F}));
  EXPECT_EQ(lv("is.numeric(x)", df), (logical_vector{T}));
  EXPECT_EQ(lv("is.character(x)", df), (logical_vector{F}));
  EXPECT_EQ(lv("is.na(y)", df), (logical_vector{F, F, F, T}));

  data_frame ids({txt("id", {"a", "b", "a", std::nullopt}),
                  num("v", {1, 2, 1, 1})});
  EXPECT_EQ(lv("duplicated(id)", ids), (logical_vector{F, F, T, F}));
  EXPECT_EQ(lv("!any(duplicated(id))", ids), (logical_vector{F}));
  EXPECT_EQ(lv("is_unique(id)", ids), (logical_vector{F, T, F, N}));
  EXPECT_EQ(lv("all_unique(id, v)", ids), (logical_vector{F}));
  EXPECT_EQ(lv("is_complete(id, v)", ids), (logical_vector{T, T, T, F}));
  EXPECT_EQ(lv("all_complete(v)", ids), (logical_vector{T}));
}

TEST(Implication, TwoValuedTruthTable) {
  for (bool p : {false, true})
    for (bool q : {false, true}) {
      data_frame df({lgl("p", {to_tri(p)}), lgl("q", {to_tri(q)})});
      EXPECT_EQ(lv("if (p) q", df), (logical_vector{to_tri(!p || q)}));
    }
}

// Brute-force reference: each record compares to the first complete
// record with the same determinant.
namespace {

logical_vector fd_oracle(const std::vector<std::vector<std::optional<int>>>& det,
                         const std::vector<std::vector<std::optional<int>>>& dep,
                         std::size_t n) {
  logical_vector out(n, tri::na);
  for (std::size_t i = 0; i < n; ++i) {
    bool complete = true;
    for (const auto& c : dep) complete = complete && c[i].has_value();
    if (!complete) continue;
    for (std::size_t j = 0; j <= i; ++j) {
      bool same_det = true, dep_complete = true, same_dep = true;
      for (const auto& c : det) same_det = same_det && c[j] == c[i];
      for (const auto& c : dep) dep_complete = dep_complete && c[j].has_value();
      if (!same_det || !dep_complete) continue;
      for (const auto& c : dep) same_dep = same_dep && c[j] == c[i];
      out[i] = to_tri(same_dep);
      break;
    }
  }
  return out;
}

}  // namespace

TEST(FunctionalDependency, MatchesOracleOnRandomFramesWithMissing) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 3000; ++trial) {
    std::size_t n = 1 + rng() % 8;
    std::vector<std::vector<std::optional<int>>> det(2), dep(2);
    std::vector<column> cols;
    const char* names[] = {"a", "b", "c", "d"};
    for (int k = 0; k < 4; ++k) {
      auto& target = k < 2 ? det[k] : dep[k - 2];
      number_vector v;
      for (std::size_t i = 0; i < n; ++i) {
        int r = static_cast<int>(rng() % 4);
        target.push_back(r == 3 ? std::nullopt : std::optional<int>(r));
        v.push_back(r == 3 ? std::nullopt : std::optional<double>(r));
      }
      cols.push_back(num(names[k], v));
    }
    data_frame df(cols);
    auto got = eval_fd(dsl::func_dep{{"a", "b"}, {"c", "d"}}, df);
    ASSERT_EQ(got, fd_oracle(det, dep, n)) << "trial " << trial;
  }
}

TEST(Confront, PaperStyleBanner) {
  data_frame df({num("x", {1, -1, std::nullopt})});
  confront_options o;
  o.data_label = "d";
  o.rules_label = "r";
  auto v = confront(df, make_rules({"x >= 0", "employees >= 0"}), o);
  EXPECT_EQ(format_banner(v),
            "Object of class 'validation'\n"
            "Call:\n"
            "    confront(dat = d, x = r)\n"
            "\n"
            "Confrontations: 2\n"
            "With fails    : 1\n"
            "Warnings      : 0\n"
            "Errors        : 1\n");
  ASSERT_TRUE(v.outcomes[1].failed());
  EXPECT_EQ(std::get<rule_error>(v.outcomes[1].result).message,
            "object 'employees' not found");
}

TEST(Confront, RaiseModes) {
  data_frame df({txt("s", {"a"})});
  auto rules = make_rules({"employees >= 0"});
  confront_options o;
  o.overrides.set("raise", "error");
  EXPECT_THROW(confront(df, rules, o), error);

  auto warn = make_rules({"grepl('[', s)"});
  EXPECT_NO_THROW(confront(df, warn, o));
  o.overrides.set("raise", "all");
  EXPECT_THROW(confront(df, warn, o), error);
  confront_options none;
  auto v = confront(df, warn, none);
  EXPECT_EQ(v.outcomes[0].warnings.size(), 1u);
}

TEST(Confront, KeyChecks) {
  data_frame df({txt("id", {"a", std::nullopt}), num("x", {1, 2})});
  confront_options o;
  o.key = "nope";
  EXPECT_THROW(confront(df, make_rules({"x > 0"}), o), error);
  o.key = "id";
  EXPECT_THROW(confront(df, make_rules({"x > 0"}), o), error);
}

TEST(Confront, TypeErrorIsCaptured) {
  data_frame df({num("x", {1})});
  auto v = confront(df, make_rules({"all(x)", "x > 0"}));
  ASSERT_TRUE(v.outcomes[0].failed());
  EXPECT_FALSE(v.outcomes[1].failed());
}

TEST(Confront, CheckThatNeedsRules) {
  data_frame df({num("x", {1})});
  EXPECT_THROW(check_that(df, {}), error);
  auto v = check_that(df, {"x > 0", "x < 0"});
  EXPECT_EQ(v.outcomes[1].name, "V2");
}

TEST(Tolerance, IntegerDataWithZeroEpsMatchesExact) {
  std::mt19937 rng(3);
  const char* ops[] = {"<", "<=", "==", ">=", ">"};
  confront_options zero;
  zero.overrides.set("lin.eq.eps", "0");
  zero.overrides.set("lin.ineq.eps", "0");
  for (int trial = 0; trial < 300; ++trial) {
    number_vector x, y;
    for (int i = 0; i < 20; ++i) {
      x.push_back(static_cast<double>(static_cast<int>(rng() % 11) - 5));
      y.push_back(static_cast<double>(static_cast<int>(rng() % 11) - 5));
    }
    data_frame df({num("x", x), num("y", y)});
    std::string op = ops[trial % 5];
    std::string src = "x + 2 * y " + op + " 3";
    auto plain = std::get<logical_vector>(
        eval_expr(dsl::parse_expression(src), scope{df}));
    auto exact = check_that(df, {src}, zero);
    EXPECT_EQ(*exact.outcomes[0].values(), plain) << src;
    EXPECT_EQ(exact.outcomes[0].expression, src);
    // Integer differences are never within 1e-8 of a nonzero value, so the
    // non-strict forms agree with exact comparison under the default too.
    if (op == "<=" || op == "==" || op == ">=")
      EXPECT_EQ(*check_that(df, {src}).outcomes[0].values(), plain) << src;
  }
}

TEST(Tolerance, AbsorbsRounding) {
  data_frame df({num("a", {0.1}), num("b", {0.2}), num("c", {0.3})});
  auto v = check_that(df, {"a + b == c"});
  EXPECT_EQ(*v.outcomes[0].values(), (logical_vector{T}));
  confront_options o;
  o.overrides.set("lin.eq.eps", "0");
  EXPECT_EQ(*check_that(df, {"a + b == c"}, o).outcomes[0].values(),
            (logical_vector{F}));
}

TEST(Options, ShadowingAcrossAllLevels) {
  // Per option: is it set locally, and is it set in the call. Every level
  // uses a distinct value so the winner is identifiable.
  const char* names[] = {"na.value", "raise", "lin.eq.eps", "lin.ineq.eps"};
  const char* at_global[] = {"NA", "none", "0.5", "0.25"};
  const char* at_local[] = {"FALSE", "error", "0", "2"};
  const char* at_call[] = {"TRUE", "all", "3", "0"};
  for (int combo = 0; combo < 256; ++combo) {
    option_overrides global, local, call, expected;
    for (int opt = 0; opt < 4; ++opt) {
      int state = (combo >> (2 * opt)) & 3;
      global.set(names[opt], at_global[opt]);
      expected.set(names[opt], at_global[opt]);
      if (state & 1) {
        local.set(names[opt], at_local[opt]);
        expected.set(names[opt], at_local[opt]);
      }
      if (state & 2) {
        call.set(names[opt], at_call[opt]);
        expected.set(names[opt], at_call[opt]);
      }
    }
    EXPECT_EQ(resolve(global.applied_to(option_set{}), local, call),
              expected.applied_to(option_set{}))
        << "combination " << combo;
  }
}

TEST(Options, LocalSnapshotIgnoresLaterGlobalChanges) {
  reset_global_options();
  auto rs = make_rules({"x >= 0"}).with_options(
      parse_option_pairs({{"na.value", "FALSE"}}));
  option_overrides g;
  g.set("lin.ineq.eps", "0");
  set_global_options(g);
  data_frame df({num("x", {std::nullopt})});
  auto v = confront(df, rs);
  EXPECT_EQ(v.outcomes[0].expression, "(x - 0) >= -1e-08");
  EXPECT_EQ(*v.outcomes[0].values(), (logical_vector{F}));
  auto plain = confront(df, make_rules({"x >= 0"}));
  EXPECT_EQ(plain.outcomes[0].expression, "x >= 0");
  reset_global_options();
}

TEST(Options, RejectsUnknownAndInvalid) {
  option_overrides o;
  EXPECT_THROW(o.set("nope", "1"), error);
  EXPECT_THROW(o.set("lin.eq.eps", "-1"), error);
  EXPECT_THROW(o.set("raise", "sometimes"), error);
}
