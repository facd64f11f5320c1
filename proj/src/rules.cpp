#include "checkmate/rules.hpp"

#include "checkmate/error.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include <fmt/format.h>

namespace checkmate {

timestamp now_seconds() {
  return std::chrono::time_point_cast<std::chrono::seconds>(
      std::chrono::system_clock::now());
}

std::string format_timestamp(timestamp t) {
  auto day = std::chrono::floor<std::chrono::days>(t);
  std::chrono::year_month_day ymd{day};
  std::chrono::hh_mm_ss hms{t - day};
  return fmt::format("{:04d}-{:02d}-{:02d} {:02d}:{:02d}:{:02d}",
                     static_cast<int>(ymd.year()),
                     static_cast<unsigned>(ymd.month()),
                     static_cast<unsigned>(ymd.day()), hms.hours().count(),
                     hms.minutes().count(), hms.seconds().count());
}

timestamp parse_timestamp(std::string_view text) {
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
  char tail = 0;
  std::string buf(text);
  int n = std::sscanf(buf.c_str(), "%4d-%2d-%2d %2d:%2d:%2d%c", &y, &mo, &d,
                      &h, &mi, &s, &tail);
  if (n == 3) h = mi = s = 0;
  using namespace std::chrono;
  year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)},
                     day{static_cast<unsigned>(d)}};
  if ((n != 6 && n != 3) || !ymd.ok() || h > 23 || mi > 59 || s > 60)
    throw error(error_code::invalid_value,
                "malformed timestamp '" + buf +
                    "', expected YYYY-MM-DD HH:MM:SS");
  return sys_days{ymd} + hours{h} + minutes{mi} + seconds{s};
}

const std::string* rule::meta_value(std::string_view key) const {
  for (const auto& [k, v] : meta)
    if (k == key) return &v;
  return nullptr;
}

void rule::set_meta(const std::string& key, std::string value) {
  for (auto& [k, v] : meta)
    if (k == key) {
      v = std::move(value);
      return;
    }
  meta.emplace_back(key, std::move(value));
}

namespace {

void check_unique(const std::vector<rule>& rules) {
  std::set<std::string_view> seen;
  for (const auto& r : rules) {
    if (r.name.empty())
      throw error(error_code::invalid_value, "rule names must be non-empty");
    if (!seen.insert(r.name).second)
      throw error(error_code::duplicate_name,
                  "duplicate rule name '" + r.name + "'");
  }
}

void check_length(std::size_t got, std::size_t want) {
  if (got != want)
    throw error(error_code::length_mismatch,
                fmt::format("expected {} values, got {}", want, got));
}

void ensure_default_meta(rule& r) {
  if (!r.meta_value("language")) r.set_meta("language", "dsl/1");
  if (!r.meta_value("severity")) r.set_meta("severity", "error");
}

}  // namespace

rule_set rule_set::from_rules(std::vector<rule> rules,
                              option_overrides local_options) {
  check_unique(rules);
  for (auto& r : rules) {
    if (!dsl::is_validating(r.body))
      throw error(error_code::invalid_value,
                  "rule '" + r.name + "' is not a validating expression: " +
                      dsl::render(r.body));
    ensure_default_meta(r);
  }
  rule_set out;
  out.rules_ = std::move(rules);
  out.local_options_ = local_options;
  return out;
}

const rule& rule_set::at(std::size_t index) const {
  if (index >= rules_.size())
    throw error(error_code::index_out_of_range,
                fmt::format("rule index {} out of range (size {})", index + 1,
                            rules_.size()));
  return rules_[index];
}

const rule& rule_set::at(std::string_view name) const {
  auto i = index_of(name);
  if (!i)
    throw error(error_code::unknown_name,
                "no rule named '" + std::string(name) + "'");
  return rules_[*i];
}

std::optional<std::size_t> rule_set::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < rules_.size(); ++i)
    if (rules_[i].name == name) return i;
  return std::nullopt;
}

rule_set rule_set::subset(std::span<const std::size_t> indices) const {
  std::vector<rule> picked;
  for (auto i : indices) picked.push_back(at(i));
  return from_rules(std::move(picked), local_options_);
}

rule_set rule_set::subset(std::span<const std::string> names) const {
  std::vector<rule> picked;
  for (const auto& n : names) picked.push_back(at(n));
  return from_rules(std::move(picked), local_options_);
}

std::vector<std::string> rule_set::metadata(metadata_field field) const {
  std::vector<std::string> out;
  for (const auto& r : rules_) {
    switch (field) {
      case metadata_field::name: out.push_back(r.name); break;
      case metadata_field::label: out.push_back(r.label); break;
      case metadata_field::description: out.push_back(r.description); break;
      case metadata_field::origin: out.push_back(r.origin); break;
      case metadata_field::created:
        out.push_back(format_timestamp(r.created));
        break;
    }
  }
  return out;
}

rule_set rule_set::with_metadata(metadata_field field,
                                 const std::vector<std::string>& values) const {
  check_length(values.size(), rules_.size());
  rule_set out = *this;
  for (std::size_t i = 0; i < values.size(); ++i) {
    rule& r = out.rules_[i];
    switch (field) {
      case metadata_field::name: r.name = values[i]; break;
      case metadata_field::label: r.label = values[i]; break;
      case metadata_field::description: r.description = values[i]; break;
      case metadata_field::origin: r.origin = values[i]; break;
      case metadata_field::created:
        r.created = parse_timestamp(values[i]);
        break;
    }
  }
  check_unique(out.rules_);
  return out;
}

std::vector<timestamp> rule_set::created() const {
  std::vector<timestamp> out;
  for (const auto& r : rules_) out.push_back(r.created);
  return out;
}

rule_set rule_set::with_created(const std::vector<timestamp>& values) const {
  check_length(values.size(), rules_.size());
  rule_set out = *this;
  for (std::size_t i = 0; i < values.size(); ++i)
    out.rules_[i].created = values[i];
  return out;
}

std::vector<std::string> rule_set::meta(std::string_view key) const {
  std::vector<std::string> out;
  for (const auto& r : rules_) {
    auto v = r.meta_value(key);
    out.push_back(v ? *v : std::string());
  }
  return out;
}

rule_set rule_set::with_meta(const std::string& key,
                             const std::vector<std::string>& values) const {
  check_length(values.size(), rules_.size());
  rule_set out = *this;
  for (std::size_t i = 0; i < values.size(); ++i)
    out.rules_[i].set_meta(key, values[i]);
  return out;
}

rule_set rule_set::with_options(const option_overrides& changes) const {
  rule_set out = *this;
  option_overrides base = has_local_options()
                              ? local_options_
                              : option_overrides::from(global_options());
  out.local_options_ = base.merged_with(changes);
  return out;
}

rule_set rule_set::without_options() const {
  rule_set out = *this;
  out.local_options_ = {};
  return out;
}

rule_set concat(const rule_set& a, const rule_set& b) {
  std::vector<rule> rules = a.rules_;
  std::set<std::string> taken;
  for (const auto& r : a.rules_) taken.insert(r.name);
  for (const auto& r : b.rules_) taken.insert(r.name);
  std::set<std::string> a_names;
  for (const auto& r : a.rules_) a_names.insert(r.name);
  for (rule r : b.rules_) {
    if (a_names.count(r.name)) {
      std::string base = r.name;
      std::string candidate = base + ".1";
      for (int k = 2; taken.count(candidate); ++k)
        candidate = base + "." + std::to_string(k);
      r.name = candidate;
      taken.insert(candidate);
    }
    rules.push_back(std::move(r));
  }
  rule_set out;
  out.rules_ = std::move(rules);
  out.local_options_ =
      a.has_local_options() ? a.local_options_ : b.local_options_;
  return out;
}

build_result new_ruleset(
    const std::vector<std::pair<std::optional<std::string>, std::string>>&
        entries,
    const std::string& origin, timestamp now) {
  std::vector<rule_entry> full;
  for (const auto& [name, source] : entries) {
    rule_entry e;
    e.name = name;
    e.source = source;
    full.push_back(std::move(e));
  }
  return build_ruleset(full, origin, now);
}

build_result build_ruleset(const std::vector<rule_entry>& entries,
                           const std::string& default_origin, timestamp now,
                           option_overrides local_options) {
  build_result out;
  dsl::macro_table macros;
  dsl::group_table groups;
  std::vector<rule> rules;
  int unnamed = 0;

  for (std::size_t i = 0; i < entries.size(); ++i) {
    const rule_entry& entry = entries[i];
    dsl::directive d;
    try {
      d = dsl::parse(entry.source);
    } catch (const syntax_error& e) {
      if (entry.file.empty()) throw;
      throw syntax_error(e.code(), entry.file + ": " + e.message(),
                         entry.line + e.line() - 1, e.column());
    }

    switch (dsl::classify(d)) {
      case dsl::rule_class::macro: {
        auto& m = std::get<dsl::macro_def>(d);
        macros.emplace_back(m.name, dsl::substitute_macros(m.body, macros));
        continue;
      }
      case dsl::rule_class::group: {
        auto& g = std::get<dsl::group_def>(d);
        groups.emplace_back(g.name, g.members);
        continue;
      }
      case dsl::rule_class::invalid:
        out.warnings.push_back(
            fmt::format("[{:03d}] {}", i + 1, dsl::render(d)));
        continue;
      case dsl::rule_class::validating:
        break;
    }

    dsl::expression body =
        dsl::substitute_macros(std::get<dsl::rule_expr>(d).body, macros);
    // A macro may expand to something that no longer validates.
    if (!dsl::is_validating(body)) {
      out.warnings.push_back(fmt::format("[{:03d}] {}", i + 1,
                                         dsl::render(body)));
      continue;
    }

    std::string name =
        entry.name && !entry.name->empty() ? *entry.name
                                           : "V" + std::to_string(++unnamed);
    auto expanded = dsl::expand_groups(body, groups);
    bool grouped = !dsl::referenced_groups(body, groups).empty();

    for (std::size_t k = 0; k < expanded.size(); ++k) {
      rule r;
      r.body = expanded[k];
      r.name = grouped ? name + "." + std::to_string(k + 1) : name;
      r.label = entry.label;
      r.description = entry.description;
      r.origin = entry.origin ? *entry.origin : default_origin;
      r.created = entry.created ? *entry.created : now;
      for (const auto& [key, value] : entry.meta) r.set_meta(key, value);
      rules.push_back(std::move(r));
    }
  }

  out.rules = rule_set::from_rules(std::move(rules), local_options);
  return out;
}

std::vector<std::string> variables(const rule_set& rs) {
  return variables_matrix(rs).variables;
}

variable_matrix variables_matrix(const rule_set& rs) {
  variable_matrix out;
  std::vector<std::vector<std::string>> per_rule;
  for (const auto& r : rs) {
    per_rule.push_back(dsl::variables(r.body));
    for (const auto& v : per_rule.back())
      if (std::find(out.variables.begin(), out.variables.end(), v) ==
          out.variables.end())
        out.variables.push_back(v);
  }
  for (const auto& vars : per_rule) {
    std::vector<bool> row(out.variables.size(), false);
    for (const auto& v : vars) {
      auto it = std::find(out.variables.begin(), out.variables.end(), v);
      row[static_cast<std::size_t>(it - out.variables.begin())] = true;
    }
    out.incidence.push_back(std::move(row));
  }
  return out;
}

std::string format_ruleset(const rule_set& rs) {
  std::string out = fmt::format("Object of class 'validator' with {} elements:\n",
                                rs.size());
  std::vector<std::string> heads;
  std::size_t width = 0;
  for (const auto& r : rs) {
    heads.push_back(r.label.empty() ? r.name : r.name + " [" + r.label + "]");
    width = std::max(width, heads.back().size());
  }
  for (std::size_t i = 0; i < rs.size(); ++i)
    out += fmt::format(" {:<{}}: {}\n", heads[i], width,
                       rs.rules()[i].expression_text());
  if (rs.has_local_options())
    out += "Rules are evaluated using locally defined options\n";
  return out;
}

std::string format_rule(const rule& r) {
  std::string meta;
  for (const auto& [k, v] : r.meta) meta += (meta.empty() ? "" : ", ") + k + "<chr>";
  return fmt::format(
      "Object of class rule.\n"
      " expr       : {}\n"
      " name       : {}\n"
      " label      : {}\n"
      " description: {}\n"
      " origin     : {}\n"
      " created    : {}\n"
      " meta       : {}\n",
      r.expression_text(), r.name, r.label, r.description, r.origin,
      format_timestamp(r.created), meta);
}

}  // namespace checkmate
