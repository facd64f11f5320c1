#include "checkmate/cli.hpp"

#include "checkmate/csv.hpp"
#include "checkmate/error.hpp"
#include "checkmate/results.hpp"
#include "checkmate/rule_io.hpp"

#include <cstdlib>
#include <filesystem>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

namespace fs = std::filesystem;

namespace checkmate::cli {

int exit_status(const validation& v, bool strict) {
  bool any_fail = false, any_na = false;
  for (const auto& o : v.outcomes) {
    if (o.failed()) return rule_errors;
    for (tri t : *o.values()) {
      any_fail = any_fail || t == tri::false_;
      any_na = any_na || t == tri::na;
    }
  }
  if (any_fail) return fails;
  if (strict && any_na) return rule_errors;
  return ok;
}

std::string locate_rules(const std::string& path) {
  fs::path p(path);
  if (p.is_absolute() || fs::exists(p)) return path;
  if (const char* dir = std::getenv("CHECKMATE_RULES_PATH"); dir && *dir) {
    fs::path candidate = fs::path(dir) / p;
    if (fs::exists(candidate)) return candidate.string();
  }
  return path;
}

namespace {

struct usage_error : error {
  explicit usage_error(const std::string& msg) : error(error_code::usage, msg) {}
};

// Raised while loading rules; reported with exit code 2.
struct rules_failure {
  std::string message;
};

void need_data(const config& cfg, std::size_t min, std::size_t max) {
  if (cfg.data.size() < min || cfg.data.size() > max) {
    std::string want = min == max ? std::to_string(min)
                                  : "at least " + std::to_string(min);
    throw usage_error(cfg.command + " needs " + want + " data file(s), got " +
                      std::to_string(cfg.data.size()));
  }
}

build_result load(const config& cfg, std::ostream& err) {
  if (cfg.rules.empty()) throw usage_error(cfg.command + " needs --rules");
  std::string path = locate_rules(cfg.rules);
  if (!fs::exists(path))
    throw error(error_code::io, "rules file '" + cfg.rules + "' not found");
  build_result b;
  try {
    b = read_rules(path);
  } catch (const error& e) {
    if (e.code() == error_code::io) throw;
    throw rules_failure{e.what()};
  }
  if (!b.warnings.empty()) {
    err << invalid_syntax_header << "\n";
    for (const auto& w : b.warnings) err << w << "\n";
  }
  return b;
}

void write(const config& cfg, std::ostream& out, const std::string& text) {
  if (cfg.out)
    write_file(*cfg.out, text);
  else
    out << text;
}

std::string stem(const std::string& path) {
  return fs::path(path).stem().string();
}

std::vector<named_frame> versions(const config& cfg) {
  std::vector<named_frame> out;
  for (const auto& d : cfg.data) out.push_back({stem(d), ingest_csv(d)});
  // Same stems would give ambiguous column names.
  for (std::size_t i = 0; i < out.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (out[i].name == out[j].name) {
        out[i].name = cfg.data[i];
        break;
      }
  return out;
}

confront_options confront_opts(const config& cfg) {
  confront_options o;
  o.key = cfg.key;
  o.overrides = parse_option_pairs(cfg.set);
  o.rules_label = stem(cfg.rules);
  return o;
}

validation confront_one(const config& cfg, std::ostream& err) {
  need_data(cfg, 1, 1);
  auto rules = load(cfg, err).rules;
  auto frame = ingest_csv(cfg.data[0]);
  auto opts = confront_opts(cfg);
  opts.data_label = stem(cfg.data[0]);
  return confront(frame, rules, opts);
}

void report_errors(const validation& v, std::ostream& err) {
  for (const auto& e : collect_errors(v)) err << "error in " << e << "\n";
  for (const auto& w : collect_warnings(v)) err << "warning in " << w << "\n";
}

int do_check(const config& cfg, std::ostream& out, std::ostream& err) {
  validation v = confront_one(cfg, err);
  std::string banner = format_banner(v);
  std::string body = emit_check(summarize(v), to_records(v), cfg.format);
  if (cfg.out) {
    out << banner;
    write_file(*cfg.out, body);
  } else if (cfg.format == output_format::text) {
    out << banner << "\n" << body;
  } else {
    // Keep stdout machine readable.
    err << banner;
    out << body;
  }
  report_errors(v, err);
  return exit_status(v, cfg.strict);
}

int do_summary(const config& cfg, std::ostream& out, std::ostream& err) {
  validation v = confront_one(cfg, err);
  write(cfg, out, emit_summary(summarize(v), cfg.format));
  report_errors(v, err);
  return exit_status(v, cfg.strict);
}

int do_lint(const config& cfg, std::ostream& out, std::ostream& err) {
  if (!cfg.data.empty()) throw usage_error("lint does not take data files");
  std::ostringstream listing;
  auto b = load(cfg, listing);
  out << listing.str();
  if (!b.warnings.empty()) return rule_errors;
  (void)err;
  out << b.rules.size() << " rule(s), no issues\n";
  return ok;
}

int do_export(const config& cfg, std::ostream& out, std::ostream& err) {
  if (!cfg.data.empty()) throw usage_error("export does not take data files");
  auto rules = load(cfg, err).rules;
  std::string to = cfg.to.value_or("");
  if (to.empty() && cfg.out) {
    auto ext = fs::path(*cfg.out).extension().string();
    to = ext == ".csv" ? "csv" : ext == ".txt" ? "text" : "yaml";
  }
  if (to.empty()) to = "yaml";
  std::string text;
  if (to == "yaml") {
    text = to_yaml(rules);
  } else if (to == "text") {
    text = to_text(rules);
  } else if (to == "csv") {
    auto t = rules_to_table(rules);
    csv_rows rows{t.header};
    rows.insert(rows.end(), t.rows.begin(), t.rows.end());
    text = format_csv(rows);
  } else {
    throw usage_error("unknown export target '" + to + "' (yaml, csv, text)");
  }
  write(cfg, out, text);
  return ok;
}

int do_compare(const config& cfg, std::ostream& out, std::ostream& err) {
  need_data(cfg, 2, SIZE_MAX);
  auto rules = load(cfg, err).rules;
  auto t = compare_validations(rules, versions(cfg), cfg.how,
                               confront_opts(cfg));
  write(cfg, out, emit_status(t, cfg.format));
  return ok;
}

int do_cells(const config& cfg, std::ostream& out, std::ostream&) {
  need_data(cfg, 2, SIZE_MAX);
  write(cfg, out, emit_status(compare_cells(versions(cfg), cfg.how), cfg.format));
  return ok;
}

int do_plot(const config& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.cells) {
    need_data(cfg, 2, SIZE_MAX);
    write(cfg, out, svg_lines(compare_cells(versions(cfg), cfg.how)));
    return ok;
  }
  if (cfg.data.size() >= 2) {
    auto rules = load(cfg, err).rules;
    write(cfg, out,
          svg_lines(compare_validations(rules, versions(cfg), cfg.how,
                                        confront_opts(cfg))));
    return ok;
  }
  validation v = confront_one(cfg, err);
  write(cfg, out, svg_bars(summarize(v)));
  return exit_status(v, cfg.strict);
}

}  // namespace

int run(const config& cfg, std::ostream& out, std::ostream& err) {
  try {
    // Reject bad --set values before any file is read.
    parse_option_pairs(cfg.set);
    if (cfg.command == "check") return do_check(cfg, out, err);
    if (cfg.command == "summary") return do_summary(cfg, out, err);
    if (cfg.command == "lint") return do_lint(cfg, out, err);
    if (cfg.command == "export") return do_export(cfg, out, err);
    if (cfg.command == "compare") return do_compare(cfg, out, err);
    if (cfg.command == "cells") return do_cells(cfg, out, err);
    if (cfg.command == "plot") return do_plot(cfg, out, err);
    throw usage_error("unknown command '" + cfg.command + "'");
  } catch (const rules_failure& f) {
    err << "checkmate: " << f.message << "\n";
    return rule_errors;
  } catch (const error& e) {
    err << "checkmate: " << e.what() << "\n";
    // With raise set, evaluation errors escape confront.
    switch (e.code()) {
      case error_code::unknown_variable:
      case error_code::unknown_function:
      case error_code::arity:
      case error_code::type:
      case error_code::length:
      case error_code::raised_warning:
        return rule_errors;
      default:
        return usage;
    }
  } catch (const std::exception& e) {
    err << "checkmate: " << e.what() << "\n";
    return usage;
  }
}

int main_entry(int argc, const char* const* argv, std::ostream& out,
               std::ostream& err) {
  CLI::App app{"Rule-based data validation for tabular data", "checkmate"};
  app.require_subcommand(1);
  config cfg;
  std::string format = "text", how = "sequential";
  std::vector<std::string> sets;

  auto common = [&](CLI::App* sub, bool data) {
    sub->add_option("--rules,-r", cfg.rules, "Rule file (text or YAML)");
    sub->add_option("--out,-o", cfg.out, "Write output to this file");
    sub->add_option("--format,-f", format, "csv, json or text")
        ->check(CLI::IsMember({"csv", "json", "text"}));
    if (data) {
      sub->add_option("data", cfg.data, "CSV data file(s)");
      sub->add_option("--key,-k", cfg.key, "Record identifier column");
      sub->add_option("--set", sets, "option=value, repeatable");
      sub->add_option("--how", how, "sequential or to_first")
          ->check(CLI::IsMember({"sequential", "to_first"}));
      sub->add_flag("--strict", cfg.strict, "Unverifiable results exit 2");
    }
  };
  common(app.add_subcommand("check", "Confront data with rules"), true);
  common(app.add_subcommand("summary", "Per-rule summary"), true);
  common(app.add_subcommand("lint", "Check a rule file"), false);
  auto exp = app.add_subcommand("export", "Convert a rule file");
  common(exp, false);
  exp->add_option("--to", cfg.to, "yaml, csv or text")
      ->check(CLI::IsMember({"yaml", "csv", "text"}));
  common(app.add_subcommand("compare", "Compare validation across versions"),
         true);
  common(app.add_subcommand("cells", "Compare cells across versions"), true);
  auto plot = app.add_subcommand("plot", "Write an SVG chart");
  common(plot, true);
  plot->add_flag("--cells", cfg.cells, "Chart the cell decomposition");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "checkmate: " << e.what() << "\n" << app.help();
    return usage;
  }

  cfg.command = app.get_subcommands().front()->get_name();
  cfg.format = parse_format(format);
  cfg.how = how == "to_first" ? compare_mode::to_first
                              : compare_mode::sequential;
  for (const auto& s : sets) {
    auto eq = s.find('=');
    if (eq == std::string::npos) {
      err << "checkmate: --set expects option=value, got '" << s << "'\n";
      return usage;
    }
    cfg.set.emplace_back(s.substr(0, eq), s.substr(eq + 1));
  }
  return run(cfg, out, err);
}

}  // namespace checkmate::cli
