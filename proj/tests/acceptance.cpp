// Acceptance run: one line per criterion, nonzero exit on any failure.

#include "checkmate/csv.hpp"
#include "checkmate/diffs.hpp"
#include "checkmate/dsl.hpp"
#include "checkmate/engine.hpp"
#include "checkmate/error.hpp"
#include "checkmate/results.hpp"
#include "checkmate/rule_io.hpp"

#include "support.hpp"

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace checkmate;
using namespace checkmate::testing;
namespace fs = std::filesystem;

namespace {

const fs::path demo_dir = CHECKMATE_DEMO_DIR;
const std::string cli_path = CHECKMATE_CLI;

// Collects failed expectations for one criterion.
struct checker {
  std::vector<std::string> failures;

  void expect(bool ok, const std::string& what) {
    if (!ok && failures.size() < 20) failures.push_back(what);
  }
  template <class A, class B>
  void equal(const A& a, const B& b, const std::string& what) {
    if (a == b) return;
    std::ostringstream os;
    os << what << ": got " << a << ", want " << b;
    expect(false, os.str());
  }
};

struct criterion {
  int id;
  std::string name;
  double limit_seconds;
  std::function<void(checker&)> body;
};

struct counts {
  std::size_t passes = 0, fails = 0, nNA = 0;
  friend bool operator==(const counts&, const counts&) = default;
  friend std::ostream& operator<<(std::ostream& os, const counts& c) {
    return os << "(" << c.passes << "," << c.fails << "," << c.nNA << ")";
  }
};

counts counts_of(const summary_row& s) { return {s.passes, s.fails, s.nNA}; }

std::string rewritten(std::string_view src, double eq = 1e-8,
                      double ineq = 1e-8) {
  return dsl::render(dsl::rewrite_tolerance(
      dsl::rewrite_implication(dsl::parse_expression(src)), eq, ineq));
}

// Kleene order F < NA < T.
int rank(tri t) {
  switch (t) {
    case tri::false_: return 0;
    case tri::na: return 1;
    default: return 2;
  }
}
tri from_rank(int r) {
  return r == 0 ? tri::false_ : r == 1 ? tri::na : tri::true_;
}

std::optional<double> cell_for(tri t) {
  if (t == tri::na) return std::nullopt;
  return t == tri::true_ ? 1.0 : 0.0;
}

// ---------------------------------------------------------------------------

void rewrite_strings(checker& c) {
  c.equal(rewritten("staff >= 0"), std::string("(staff - 0) >= -1e-08"),
          "staff >= 0");
  c.equal(rewritten("turnover + other.rev == total.rev"),
          std::string("abs(turnover + other.rev - total.rev) < 1e-08"),
          "balance");
  c.equal(rewritten("if (staff > 0) staff.costs > 0"),
          std::string("!(staff > 0) | (staff.costs > 0)"), "implication");
  c.equal(rewritten("mean(profit, na.rm = TRUE) >= 1"),
          std::string("mean(profit, na.rm = TRUE) >= 1"), "mean");

  // The same strings reach the summary table through confront.
  data_frame df({num("staff", {1.0}), num("staff.costs", {1.0}),
                 num("turnover", {1.0}), num("other.rev", {1.0}),
                 num("total.rev", {2.0}), num("profit", {1.0})});
  auto rs = make_rules({"staff >= 0", "turnover + other.rev == total.rev",
                        "if (staff > 0) staff.costs > 0",
                        "mean(profit, na.rm = TRUE) >= 1"});
  auto s = summarize(confront(df, rs));
  std::vector<std::string> got;
  for (const auto& row : s) got.push_back(row.expression);
  c.expect(got == std::vector<std::string>{
                      "(staff - 0) >= -1e-08",
                      "abs(turnover + other.rev - total.rev) < 1e-08",
                      "!(staff > 0) | (staff.costs > 0)",
                      "mean(profit, na.rm = TRUE) >= 1"},
           "summary expressions differ from the rewritten strings");
}

void implication_table(checker& c) {
  auto rs = make_rules({"if (p == 1) q == 1"});
  c.equal(rs.at(0).expression_text(), std::string("if (p == 1) q == 1"),
          "stored rule");
  const tri all[] = {tri::false_, tri::true_, tri::na};
  number_vector p, q;
  std::vector<tri> ps, qs;
  for (tri a : all)
    for (tri b : all) {
      ps.push_back(a);
      qs.push_back(b);
      p.push_back(cell_for(a));
      q.push_back(cell_for(b));
    }
  data_frame df({num("p", p), num("q", q)});
  auto v = confront(df, rs);
  const auto* got = v.outcomes[0].values();
  c.expect(got && got->size() == 9, "nine results");
  if (!got) return;
  for (std::size_t i = 0; i < 9; ++i) {
    tri want = from_rank(std::max(2 - rank(ps[i]), rank(qs[i])));
    std::string label = std::string(to_string(ps[i])) + "," +
                        std::string(to_string(qs[i]));
    c.expect((*got)[i] == want, "Kleene case " + label);
    if (ps[i] != tri::na && qs[i] != tri::na) {
      // Only P true with Q false violates the implication.
      bool violated = ps[i] == tri::true_ && qs[i] == tri::false_;
      c.expect((*got)[i] == to_tri(!violated), "boolean case " + label);
    }
  }
}

const std::vector<std::string> rule_pool{
    "x >= 0",
    "x + y == z",
    "if (x > 0) y > 0",
    "y <= 2 * z",
    "mean(x, na.rm = TRUE) >= 0",
    "x %in% c(1, 2, 3)",
    "abs(x - y) < 5",
    "z > x | y > x",
};

number_vector random_numbers(std::mt19937& rng, std::size_t n,
                             double na_rate) {
  std::uniform_real_distribution<double> u(0, 1);
  std::uniform_int_distribution<int> val(-5, 9);
  number_vector out(n);
  for (auto& x : out)
    if (u(rng) >= na_rate) x = val(rng);
  return out;
}

data_frame random_xyz(std::mt19937& rng, std::size_t n) {
  double na_rate = std::uniform_real_distribution<double>(0, 0.5)(rng);
  return data_frame({num("x", random_numbers(rng, n, na_rate)),
                     num("y", random_numbers(rng, n, na_rate)),
                     num("z", random_numbers(rng, n, na_rate))});
}

rule_set random_rules(std::mt19937& rng, std::size_t max_rules) {
  std::size_t k = 1 + rng() % max_rules;
  std::vector<std::string> src;
  for (std::size_t i = 0; i < k; ++i)
    src.push_back(rule_pool[rng() % rule_pool.size()]);
  return make_rules(src);
}

void na_transposition(checker& c) {
  std::mt19937 rng(20180605);
  confront_options as_false;
  as_false.overrides.na_value = tri::false_;
  for (int trial = 0; trial < 250; ++trial) {
    auto df = random_xyz(rng, 1 + rng() % 40);
    auto rs = random_rules(rng, 6);
    auto base = summarize(confront(df, rs));
    auto moved = summarize(confront(df, rs, as_false));
    for (std::size_t i = 0; i < base.size(); ++i) {
      std::string at = "trial " + std::to_string(trial) + " rule " +
                       base[i].expression;
      c.equal(moved[i].passes, base[i].passes, at + " passes");
      c.equal(moved[i].fails, base[i].fails + base[i].nNA, at + " fails");
      c.equal(moved[i].nNA, std::size_t{0}, at + " nNA");
    }
  }

  auto df = ingest_csv(demo_dir / "retailers.csv");
  auto rs = make_rules({"turnover >= 0", "turnover + other.rev == total.rev"});
  auto base = summarize(confront(df, rs));
  auto moved = summarize(confront(df, rs, as_false));
  c.equal(counts_of(base[0]), counts{56, 0, 4}, "V1 default");
  c.equal(counts_of(moved[0]), counts{56, 4, 0}, "V1 na.value=FALSE");
  c.equal(counts_of(base[1]), counts{19, 4, 37}, "V2 default");
  c.equal(counts_of(moved[1]), counts{19, 41, 0}, "V2 na.value=FALSE");
}

void tolerance_off(checker& c) {
  auto df = ingest_csv(demo_dir / "retailers.csv");
  std::vector<std::string> src{"turnover >= 0",
                               "turnover + other.rev == total.rev"};
  option_overrides zero;
  zero.lin_eq_eps = 0;
  zero.lin_ineq_eps = 0;
  auto rs = make_rules(src).with_options(zero);
  c.expect(rs.has_local_options(), "local options set");
  auto s = summarize(confront(df, rs));
  for (std::size_t i = 0; i < src.size(); ++i)
    c.equal(s[i].expression, src[i], "expression " + std::to_string(i + 1));
  c.equal(counts_of(s[0]), counts{56, 0, 4}, "V1 counts");
  c.equal(counts_of(s[1]), counts{19, 4, 37}, "V2 counts");
  c.expect(format_ruleset(rs).find(
               "Rules are evaluated using locally defined options") !=
               std::string::npos,
           "listing notes local options");
}

void check_validation_partitions(checker& c, const status_table& t,
                                 const std::string& at) {
  for (std::size_t k = 0; k < t.versions.size(); ++k) {
    auto g = [&](std::string_view s) { return t.at(s, k); };
    std::string col = at + " column " + std::to_string(k);
    c.equal(g("verifiable") + g("unverifiable"), g("validations"),
            col + " validations");
    c.equal(g("still_unverifiable") + g("new_unverifiable"),
            g("unverifiable"), col + " unverifiable");
    c.equal(g("still_satisfied") + g("new_satisfied"), g("satisfied"),
            col + " satisfied");
    c.equal(g("still_violated") + g("new_violated"), g("violated"),
            col + " violated");
    c.equal(g("satisfied") + g("violated"), g("verifiable"),
            col + " verifiable");
  }
}

// Flips, blanks or fills a few cells of `df`.
data_frame perturb(std::mt19937& rng, const data_frame& df) {
  std::vector<column> cols;
  std::uniform_real_distribution<double> u(0, 1);
  std::uniform_int_distribution<int> val(-5, 9);
  for (const auto& col : df.columns()) {
    auto v = std::get<number_vector>(col.data);
    for (auto& x : v) {
      double r = u(rng);
      if (r < 0.1) x.reset();
      else if (r < 0.25) x = val(rng);
    }
    cols.push_back(num(col.name, v));
  }
  return data_frame(std::move(cols));
}

void compare_partitions(checker& c) {
  std::mt19937 rng(42);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t n = 1 + rng() % 30;
    auto rs = random_rules(rng, 6);
    std::vector<named_frame> versions{{"v1", random_xyz(rng, n)}};
    std::size_t k = 1 + rng() % 5;
    while (versions.size() < k)
      versions.push_back({"v" + std::to_string(versions.size() + 1),
                          perturb(rng, versions.back().frame)});
    std::string at = "trial " + std::to_string(trial);
    for (auto how : {compare_mode::sequential, compare_mode::to_first}) {
      auto t = compare_validations(rs, versions, how);
      check_validation_partitions(c, t, at);
      for (std::string_view s : {"still_unverifiable", "still_satisfied",
                                 "still_violated"}) {
        std::string total(s.substr(6));
        c.equal(t.at(s, 0), t.at(total, 0), at + " first column " + total);
      }
    }
    auto same = compare_validations(
        rs, {versions[0], {"again", versions[0].frame}});
    for (std::string_view s :
         {"new_unverifiable", "new_satisfied", "new_violated"})
      c.equal(same.at(s, 1), std::size_t{0}, at + " self " + std::string(s));
  }

  // A raw/modified pair engineered to give the published transition table.
  const std::size_t records = 60, nrules = 18, cells = records * nrules;
  std::vector<std::size_t> order(cells);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), std::mt19937(5));
  // 0 = missing, -1 = negative, +1 = nonnegative
  std::vector<int> raw(cells), mod(cells);
  for (std::size_t i = 0; i < cells; ++i) {
    std::size_t cell = order[i];
    if (i < 291) raw[cell] = mod[cell] = 0;
    else if (i < 291 + 14) raw[cell] = -1, mod[cell] = 1;
    else if (i < 291 + 43) raw[cell] = mod[cell] = -1;
    else if (i < 291 + 43 + 5) raw[cell] = 1, mod[cell] = -1;
    else raw[cell] = mod[cell] = 1;
  }
  auto build = [&](const std::vector<int>& sign) {
    std::vector<column> cols;
    for (std::size_t k = 0; k < nrules; ++k) {
      number_vector v(records);
      for (std::size_t r = 0; r < records; ++r) {
        int s = sign[r * nrules + k];
        if (s != 0) v[r] = s * double(1 + (r * 7 + k * 3) % 50);
      }
      cols.push_back(num("x" + std::to_string(k + 1), v));
    }
    return data_frame(std::move(cols));
  };
  std::vector<std::string> src;
  for (std::size_t k = 0; k < nrules; ++k)
    src.push_back("x" + std::to_string(k + 1) + " >= 0");
  auto t = compare_validations(
      make_rules(src), {{"raw", build(raw)}, {"modified", build(mod)}});

  // Independent tally straight from the placed signs.
  std::map<std::string, std::size_t> tally;
  for (std::size_t i = 0; i < cells; ++i) {
    int a = raw[i], b = mod[i];
    ++tally["validations"];
    if (b == 0) {
      ++tally["unverifiable"];
      ++tally[a == 0 ? "still_unverifiable" : "new_unverifiable"];
      continue;
    }
    ++tally["verifiable"];
    const char* kind = b > 0 ? "satisfied" : "violated";
    ++tally[kind];
    ++tally[std::string(a == b ? "still_" : "new_") + kind];
  }
  for (auto s : validation_statuses) {
    std::string key(s);
    c.equal(t.at(s, 1), tally[key], "engineered tally " + key);
  }
  const std::map<std::string, std::pair<std::size_t, std::size_t>> published{
      {"validations", {1080, 1080}},      {"verifiable", {789, 789}},
      {"unverifiable", {291, 291}},       {"still_unverifiable", {291, 291}},
      {"new_unverifiable", {0, 0}},       {"satisfied", {746, 755}},
      {"still_satisfied", {746, 741}},    {"new_satisfied", {0, 14}},
      {"violated", {43, 34}},             {"still_violated", {43, 29}},
      {"new_violated", {0, 5}}};
  for (const auto& [s, want] : published) {
    c.equal(t.at(s, 0), want.first, "raw " + s);
    c.equal(t.at(s, 1), want.second, "modified " + s);
  }
  c.equal(t.at("verifiable", 1) + t.at("unverifiable", 1), std::size_t{1080},
          "1080 = 789 + 291");
  c.equal(t.at("still_satisfied", 1) + t.at("new_satisfied", 1),
          std::size_t{755}, "755 = 741 + 14");
  c.equal(t.at("still_violated", 1) + t.at("new_violated", 1),
          std::size_t{34}, "34 = 29 + 5");
  check_validation_partitions(c, t, "engineered");
}

void cells_partitions(checker& c) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 600; ++trial) {
    std::size_t n = rng() % 25;
    auto a = random_xyz(rng, n);
    auto b = perturb(rng, a);
    auto t = compare_cells({{"a", a}, {"b", b}});
    std::string at = "trial " + std::to_string(trial);
    for (std::size_t k = 0; k < 2; ++k) {
      auto g = [&](std::string_view s) { return t.at(s, k); };
      std::string col = at + " column " + std::to_string(k);
      c.equal(g("available") + g("missing"), g("cells"), col + " cells");
      c.equal(g("still_available") + g("imputed"), g("available"),
              col + " available");
      c.equal(g("unadapted") + g("adapted"), g("still_available"),
              col + " still_available");
      c.equal(g("still_missing") + g("removed"), g("missing"),
              col + " missing");
    }
    // Cell-by-cell tally of the second column.
    std::map<std::string, std::size_t> tally;
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const auto& x = std::get<number_vector>(a.columns()[j].data);
      const auto& y = std::get<number_vector>(b.columns()[j].data);
      for (std::size_t i = 0; i < n; ++i) {
        ++tally["cells"];
        if (y[i]) {
          ++tally["available"];
          if (!x[i]) ++tally["imputed"];
          else {
            ++tally["still_available"];
            ++tally[*x[i] == *y[i] ? "unadapted" : "adapted"];
          }
        } else {
          ++tally["missing"];
          ++tally[x[i] ? "removed" : "still_missing"];
        }
      }
    }
    for (auto s : cell_statuses)
      c.equal(t.at(s, 1), tally[std::string(s)], at + " " + std::string(s));
  }
}

// Reference combination: the first record with an equal determinant whose
// dependent cells are all present.
logical_vector fd_oracle(const std::vector<std::vector<int>>& det,
                         const std::vector<std::vector<int>>& dep,
                         std::size_t n) {
  auto row = [](const std::vector<std::vector<int>>& cols, std::size_t i) {
    std::vector<int> r;
    for (const auto& col : cols) r.push_back(col[i]);
    return r;
  };
  auto complete = [](const std::vector<int>& r) {
    return std::find(r.begin(), r.end(), -1) == r.end();
  };
  logical_vector out(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto di = row(dep, i);
    if (!complete(di)) {
      out[i] = tri::na;
      continue;
    }
    for (std::size_t j = 0; j <= i; ++j) {
      auto dj = row(dep, j);
      if (row(det, j) == row(det, i) && complete(dj)) {
        out[i] = to_tri(dj == di);
        break;
      }
    }
  }
  return out;
}

// Enumerates every frame with `ndet` text and `ndep` number columns over
// the given symbol counts (-1 codes a missing cell).
void fd_shape(checker& c, std::size_t ndet, std::size_t ndep, bool det_na,
              bool dep_na, std::size_t max_n, std::size_t& frames) {
  std::vector<std::string> det_names, dep_names;
  for (std::size_t k = 0; k < ndet; ++k)
    det_names.push_back("d" + std::to_string(k + 1));
  for (std::size_t k = 0; k < ndep; ++k)
    dep_names.push_back("y" + std::to_string(k + 1));
  auto fd = dsl::make_func_dep(det_names, dep_names);
  const auto& spec = *fd.as<dsl::func_dep>();
  int det_sym = det_na ? 3 : 2, dep_sym = dep_na ? 3 : 2;
  for (std::size_t n = 1; n <= max_n; ++n) {
    std::size_t ncells_det = ndet * n, ncells_dep = ndep * n;
    std::size_t total = 1;
    for (std::size_t i = 0; i < ncells_det; ++i) total *= det_sym;
    for (std::size_t i = 0; i < ncells_dep; ++i) total *= dep_sym;
    for (std::size_t code = 0; code < total; ++code) {
      std::size_t rest = code;
      std::vector<std::vector<int>> det(ndet, std::vector<int>(n)),
          dep(ndep, std::vector<int>(n));
      for (auto& col : det)
        for (auto& x : col) x = int(rest % det_sym) - (det_na ? 1 : 0), rest /= det_sym;
      for (auto& col : dep)
        for (auto& x : col) x = int(rest % dep_sym) - (dep_na ? 1 : 0), rest /= dep_sym;
      std::vector<column> cols;
      for (std::size_t k = 0; k < ndet; ++k) {
        text_vector v(n);
        for (std::size_t i = 0; i < n; ++i)
          if (det[k][i] >= 0) v[i] = det[k][i] ? "b" : "a";
        cols.push_back(txt(det_names[k], v));
      }
      for (std::size_t k = 0; k < ndep; ++k) {
        number_vector v(n);
        for (std::size_t i = 0; i < n; ++i)
          if (dep[k][i] >= 0) v[i] = dep[k][i];
        cols.push_back(num(dep_names[k], v));
      }
      auto got = eval_fd(spec, data_frame(std::move(cols)));
      ++frames;
      if (got != fd_oracle(det, dep, n))
        c.expect(false, "frame mismatch: shape " + std::to_string(ndet) +
                            "~" + std::to_string(ndep) + " n=" +
                            std::to_string(n) + " code " +
                            std::to_string(code));
    }
  }
}

void fd_exhaustive(checker& c) {
  std::size_t frames = 0;
  fd_shape(c, 1, 1, false, false, 6, frames);  // 4^n
  fd_shape(c, 1, 1, false, true, 6, frames);   // 6^n
  fd_shape(c, 1, 1, true, true, 5, frames);    // 9^n
  fd_shape(c, 2, 1, false, false, 5, frames);  // 8^n
  fd_shape(c, 1, 2, false, false, 5, frames);  // 8^n
  fd_shape(c, 2, 2, false, false, 4, frames);  // 16^n
  c.expect(frames > 100000, "enumerated " + std::to_string(frames));
}

void round_trips(checker& c) {
  auto fig = read_rules(demo_dir / "general_rules.yml", fixed_time);
  c.equal(fig.rules.size(), std::size_t{3}, "Fig. 3 rule count");
  c.expect(fig.rules.metadata(metadata_field::label) ==
               std::vector<std::string>{"nonnegative staff",
                                        "nonnegative income", "Balance check"},
           "Fig. 3 labels");
  c.expect(fig.rules.metadata(metadata_field::name) ==
               std::vector<std::string>{"G1", "G2", "G3"},
           "Fig. 3 names");

  auto tmp = fs::temp_directory_path() / "checkmate_acceptance_io";
  fs::remove_all(tmp);
  fs::create_directories(tmp);
  std::string yaml = to_yaml(fig.rules);
  write_file(tmp / "out.yml", yaml);
  auto again = read_rules(tmp / "out.yml", fixed_time);
  c.expect(again.rules == fig.rules, "YAML import of export equals original");
  c.equal(to_yaml(again.rules), yaml, "YAML export is byte-stable");
  std::string text = to_text(fig.rules);
  write_file(tmp / "out.txt", text);
  c.equal(to_text(read_rules(tmp / "out.txt", fixed_time).rules), text,
          "text export is byte-stable");
  fs::remove_all(tmp);

  auto here = fs::current_path();
  fs::current_path(demo_dir);
  auto inc = read_rules("rules.txt", fixed_time);
  fs::current_path(here);
  c.expect(inc.rules.metadata(metadata_field::name) ==
               std::vector<std::string>{"G1", "G2", "G3", "V1", "V2"},
           "include order G1,G2,G3,V1,V2");
  c.expect(inc.rules.metadata(metadata_field::origin) ==
               std::vector<std::string>{"./general_rules.yml",
                                        "./general_rules.yml",
                                        "./general_rules.yml", "rules.txt",
                                        "rules.txt"},
           "origin map");
}

void cycles(checker& c) {
  auto tmp = fs::temp_directory_path() / "checkmate_acceptance_cycles";
  fs::remove_all(tmp);
  fs::create_directories(tmp / "sub");
  auto put = [&](const std::string& name, const std::string& body) {
    write_file(tmp / name, body);
  };
  put("a.txt", "---\ninclude:\n  - b.txt\n---\nx > 0\n");
  put("b.txt", "---\ninclude:\n  - a.txt\n---\ny > 0\n");
  put("p.yml", "include: [q.txt]\nrules: []\n");
  put("q.txt", "---\ninclude:\n  - sub/r.txt\n---\nz > 0\n");
  put("sub/r.txt", "---\ninclude:\n  - ../p.yml\n---\nw > 0\n");
  auto expect_cycle = [&](const std::string& root,
                          const std::vector<std::string>& files) {
    try {
      read_rules(tmp / root);
      c.expect(false, root + " loaded without a cycle error");
    } catch (const cycle_error& e) {
      std::string what = e.what();
      for (const auto& f : files)
        c.expect(what.find(f) != std::string::npos,
                 root + " cycle message lacks " + f + ": " + what);
      c.equal(e.chain().size(), files.size() + 1, root + " chain length");
    } catch (const std::exception& e) {
      c.expect(false, root + " threw a different error: " + e.what());
    }
  };
  expect_cycle("a.txt", {"a.txt", "b.txt"});
  expect_cycle("p.yml", {"p.yml", "q.txt", "r.txt"});
  fs::remove_all(tmp);
}

void aggregate_sort(checker& c) {
  // Rows 0-3: turnover missing. Rows 0-35: other.rev missing. Row 36:
  // other.rev negative, total.rev missing. Rows 37-59 are complete; the
  // last four break the balance.
  const std::size_t n = 60;
  number_vector turnover(n), other(n), total(n);
  text_vector id(n);
  for (std::size_t i = 0; i < n; ++i) {
    id[i] = "R" + std::to_string(i + 1);
    if (i >= 4) turnover[i] = 100.0 + i;
    if (i == 36) other[i] = -3.0;
    else if (i > 36) other[i] = 10.0 + i % 7;
    if (i > 36 && turnover[i] && other[i])
      total[i] = *turnover[i] + *other[i] + (i >= 56 ? 5.0 : 0.0);
    else if (i != 36) total[i] = 1.0;
  }
  data_frame df({txt("id", id), num("turnover", turnover),
                 num("other.rev", other), num("total.rev", total)});

  // Direct tally of the placed cells.
  std::vector<counts> want(3);
  auto bump = [](counts& k, std::optional<bool> ok) {
    if (!ok) ++k.nNA;
    else if (*ok) ++k.passes;
    else ++k.fails;
  };
  for (std::size_t i = 0; i < n; ++i) {
    bump(want[0], other[i] ? std::optional<bool>(*other[i] >= 0)
                           : std::nullopt);
    bump(want[1], turnover[i] ? std::optional<bool>(*turnover[i] >= 0)
                              : std::nullopt);
    bool complete = turnover[i] && other[i] && total[i];
    bump(want[2], complete ? std::optional<bool>(*turnover[i] + *other[i] ==
                                                 *total[i])
                           : std::nullopt);
  }
  c.equal(want[0], counts{23, 1, 36}, "placed V1");
  c.equal(want[1], counts{56, 0, 4}, "placed V2");
  c.equal(want[2], counts{19, 4, 37}, "placed V3");

  auto rs = make_rules({"other.rev >= 0", "turnover >= 0",
                        "turnover + other.rev == total.rev"});
  confront_options opts;
  opts.key = "id";
  auto v = confront(df, rs, opts);
  auto s = summarize(v);
  for (std::size_t i = 0; i < 3; ++i)
    c.equal(counts_of(s[i]), want[i], "confronted " + s[i].name);

  auto sorted = sort_results(v, aggregate_by::rule);
  std::vector<std::string> order;
  for (const auto& r : sorted) order.push_back(r.label);
  c.expect(order == std::vector<std::string>{"V3", "V1", "V2"},
           "sort order V3,V1,V2");
  const double rel[] = {19.0 / 60, 23.0 / 60, 56.0 / 60};
  for (std::size_t i = 0; i < sorted.size() && i < 3; ++i) {
    c.expect(std::abs(sorted[i].rel_pass - rel[i]) <= 1e-12,
             "rel.pass of " + sorted[i].label);
    c.expect(std::abs(sorted[i].rel_pass + sorted[i].rel_fail +
                      sorted[i].rel_NA - 1.0) <= 1e-12,
             "relative shares of " + sorted[i].label);
  }
}

// values(v, false) rebuilt from the outcomes.
result_list values_oracle(const validation& v) {
  result_list out;
  for (const auto& o : v.outcomes) {
    if (o.failed()) continue;
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const auto& e) { return e.first == o.items(); });
    if (it == out.end()) {
      out.push_back({o.items(), result_matrix{o.items(), {}, {}}});
      it = std::prev(out.end());
    }
    it->second.names.push_back(o.name);
    it->second.columns.push_back(*o.values());
  }
  return out;
}

void values_shapes(checker& c) {
  std::mt19937 rng(60);
  auto df = random_xyz(rng, 60);
  auto two = confront(df, make_rules({"x >= 0", "y >= 0"}));
  auto three = confront(df, make_rules({"x >= 0", "y >= 0",
                                        "mean(x, na.rm = TRUE) > 0"}));
  c.expect(std::holds_alternative<result_matrix>(values(two)),
           "{60,60} gives a matrix");
  c.expect(std::holds_alternative<result_list>(values(three)),
           "{60,60,1} gives a list");
  auto three_values = values(three);
  auto two_values = values(two);
  if (auto* l = std::get_if<result_list>(&three_values))
    c.equal(l->size(), std::size_t{2}, "{60,60,1} list size");
  if (auto* m = std::get_if<result_matrix>(&two_values))
    c.equal(m->rows, std::size_t{60}, "matrix rows");

  for (int trial = 0; trial < 100; ++trial) {
    auto frame = random_xyz(rng, 1 + rng() % 30);
    auto v = confront(frame, random_rules(rng, 8));
    auto want = values_oracle(v);
    auto list = values(v, false);
    auto simple = values(v, true);
    std::string at = "trial " + std::to_string(trial);
    c.expect(std::holds_alternative<result_list>(list) &&
                 std::get<result_list>(list) == want,
             at + " simplify=FALSE matches the grouped outcomes");
    if (want.size() == 1)
      c.expect(std::holds_alternative<result_matrix>(simple) &&
                   std::get<result_matrix>(simple) == want[0].second,
               at + " single length gives the matrix");
    else
      c.expect(std::holds_alternative<result_list>(simple) &&
                   std::get<result_list>(simple) == want,
               at + " mixed lengths give the list");
  }
}

struct process_result {
  int code = -1;
  std::string output;
};

process_result run(const std::string& args) {
  process_result r;
  std::string cmd = "'" + cli_path + "' " + args + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, p)) > 0) r.output.append(buf, got);
  int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string quote(const fs::path& p) { return "'" + p.string() + "'"; }

void cli_end_to_end(checker& c) {
  auto check = run("check " + quote(demo_dir / "retailers.csv") +
                   " --rules " + quote(demo_dir / "retailer_rules.txt") +
                   " --key id");
  c.equal(check.code, 1, "check exit code");
  const std::string banner =
      "Object of class 'validation'\n"
      "Call:\n"
      "    confront(dat = retailers, x = retailer_rules, key = \"id\")\n"
      "\n"
      "Confrontations: 6\n"
      "With fails    : 2\n"
      "Warnings      : 0\n"
      "Errors        : 0\n";
  c.expect(check.output.rfind(banner, 0) == 0,
           "check banner:\n" + check.output.substr(0, 300));

  auto lint = run("lint --rules " + quote(demo_dir / "lint_example.txt"));
  c.equal(lint.code, 2, "lint exit code");
  c.expect(lint.output.find(invalid_syntax_header) != std::string::npos,
           "lint header");
  c.expect(lint.output.find("[002] mean(x)") != std::string::npos,
           "lint listing: " + lint.output);
}

}  // namespace

int main() {
  const std::vector<criterion> criteria{
      {1, "rewrite strings are byte-exact", 1, rewrite_strings},
      {2, "implication truth table", 1, implication_table},
      {3, "na.value transposition", 10, na_transposition},
      {4, "tolerance off-switch", 1, tolerance_off},
      {5, "compare partition identities", 30, compare_partitions},
      {6, "cells partition identities", 10, cells_partitions},
      {7, "FD oracle equivalence", 60, fd_exhaustive},
      {8, "YAML/text round trips and includes", 1, round_trips},
      {9, "cycle detection", 1, cycles},
      {10, "aggregate/sort semantics", 1, aggregate_sort},
      {11, "values shape law", 5, values_shapes},
      {12, "CLI end-to-end", 2, cli_end_to_end},
  };
  int failed = 0;
  for (const auto& cr : criteria) {
    checker c;
    auto start = std::chrono::steady_clock::now();
    try {
      cr.body(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("uncaught: ") + e.what());
    }
    double secs = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - start)
                      .count();
    if (secs > cr.limit_seconds)
      c.expect(false, "took " + std::to_string(secs) + " s, limit " +
                          std::to_string(cr.limit_seconds) + " s");
    bool ok = c.failures.empty();
    failed += !ok;
    std::printf("[%s] %2d %s (%.3f s)\n", ok ? "PASS" : "FAIL", cr.id,
                cr.name.c_str(), secs);
    for (const auto& f : c.failures) std::printf("       %s\n", f.c_str());
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
