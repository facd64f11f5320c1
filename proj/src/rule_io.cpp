#include "checkmate/rule_io.hpp"

#include "checkmate/error.hpp"

#include <algorithm>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

namespace fs = std::filesystem;

namespace checkmate {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw error(error_code::io, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text))
    throw error(error_code::io, "cannot write '" + path.string() + "'");
}

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string line;
  std::istringstream in(text);
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

bool is_yaml_path(const fs::path& p) {
  auto ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), ::tolower);
  return ext == ".yml" || ext == ".yaml";
}

// What one file contributes before include resolution.
struct file_contents {
  option_overrides options;
  std::vector<std::string> includes;
  std::vector<rule_entry> entries;
};

option_overrides options_from(const YAML::Node& node, const std::string& file) {
  option_overrides out;
  if (!node || node.IsNull()) return out;
  if (!node.IsMap())
    throw error(error_code::yaml_syntax, file + ": 'options' must be a map");
  for (const auto& kv : node)
    out.set(kv.first.as<std::string>(),
            kv.second.IsNull() ? "" : kv.second.as<std::string>());
  return out;
}

std::vector<std::string> includes_from(const YAML::Node& node,
                                       const std::string& file) {
  std::vector<std::string> out;
  if (!node || node.IsNull()) return out;
  if (node.IsScalar()) return {node.as<std::string>()};
  if (!node.IsSequence())
    throw error(error_code::yaml_syntax, file + ": 'include' must be a list");
  for (const auto& n : node) out.push_back(n.as<std::string>());
  return out;
}

std::vector<YAML::Node> load_yaml(const std::string& text,
                                  const std::string& file) {
  try {
    return YAML::LoadAll(text);
  } catch (const YAML::Exception& e) {
    throw error(error_code::yaml_syntax,
                fmt::format("{}: {} at line {}, column {}", file, e.msg,
                            e.mark.line + 1, e.mark.column + 1));
  }
}

std::string scalar(const YAML::Node& n) {
  if (!n || n.IsNull()) return {};
  return n.as<std::string>();
}

file_contents parse_yaml_file(const std::string& text, const std::string& file,
                              const std::string& origin) {
  file_contents out;
  try {
    for (const auto& doc : load_yaml(text, file)) {
      if (!doc || doc.IsNull()) continue;
      if (!doc.IsMap())
        throw error(error_code::yaml_syntax,
                    file + ": top level must be a map");
      for (const auto& kv : doc) {
        auto key = kv.first.as<std::string>();
        if (key == "options") {
          out.options = out.options.merged_with(options_from(kv.second, file));
        } else if (key == "include") {
          auto inc = includes_from(kv.second, file);
          out.includes.insert(out.includes.end(), inc.begin(), inc.end());
        } else if (key == "rules") {
          const auto& rules = kv.second;
          if (rules.IsNull()) continue;
          if (!rules.IsSequence())
            throw error(error_code::yaml_syntax,
                        file + ": 'rules' must be a list");
          std::size_t index = 0;
          for (const auto& r : rules) {
            ++index;
            if (!r.IsMap() || !r["expr"] || r["expr"].IsNull())
              throw error(error_code::missing_expr,
                          fmt::format("{}: rule entry {} has no 'expr'", file,
                                      index));
            rule_entry e;
            e.source = r["expr"].as<std::string>();
            e.file = file;
            e.line = r["expr"].Mark().line + 1;
            if (auto n = scalar(r["name"]); !n.empty()) e.name = n;
            e.label = trim(scalar(r["label"]));
            e.description = trim(scalar(r["description"]));
            auto o = scalar(r["origin"]);
            e.origin = o.empty() ? origin : o;
            if (auto c = scalar(r["created"]); !c.empty())
              e.created = parse_timestamp(c);
            if (const auto& m = r["meta"]; m && m.IsMap())
              for (const auto& kv2 : m)
                e.meta.emplace_back(kv2.first.as<std::string>(),
                                    scalar(kv2.second));
            out.entries.push_back(std::move(e));
          }
        } else {
          throw error(error_code::yaml_syntax,
                      file + ": unknown top-level key '" + key + "'");
        }
      }
    }
  } catch (const YAML::Exception& e) {
    throw error(error_code::yaml_syntax,
                fmt::format("{}: {} at line {}", file, e.msg, e.mark.line + 1));
  }
  return out;
}

// Strips a trailing comment, leaving string literals alone.
std::string code_part(const std::string& line) {
  char quote = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quote) {
      if (c == '\\') ++i;
      else if (c == quote) quote = 0;
    } else if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '#') {
      return line.substr(0, i);
    }
  }
  return line;
}

int bracket_depth(const std::string& code) {
  int depth = 0;
  char quote = 0;
  for (std::size_t i = 0; i < code.size(); ++i) {
    char c = code[i];
    if (quote) {
      if (c == '\\') ++i;
      else if (c == quote) quote = 0;
    } else if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '(') {
      ++depth;
    } else if (c == ')') {
      --depth;
    }
  }
  return depth;
}

bool needs_more(const std::string& statement) {
  std::string s = trim(statement);
  if (s.empty()) return false;
  if (bracket_depth(s) > 0) return true;
  static const std::string tails = "+-*/^&|<>=!,~";
  if (tails.find(s.back()) != std::string::npos) return true;
  if (s.size() >= 4 && s.compare(s.size() - 4, 4, "%in%") == 0) return true;
  static const std::regex bare_if(R"(^if\s*\(.*\)$)");
  return std::regex_match(s, bare_if);
}

file_contents parse_text_file(const std::string& text, const std::string& file,
                              const std::string& origin) {
  file_contents out;
  auto lines = split_lines(text);
  std::size_t i = 0;
  while (i < lines.size() && trim(lines[i]).empty()) ++i;
  if (i < lines.size() && trim(lines[i]) == "---") {
    std::size_t end = i + 1;
    while (end < lines.size() && trim(lines[end]) != "---") ++end;
    if (end == lines.size())
      throw error(error_code::yaml_syntax,
                  file + ": front matter is not closed by '---'");
    std::string block;
    for (std::size_t k = i + 1; k < end; ++k) block += lines[k] + "\n";
    for (const auto& doc : load_yaml(block, file)) {
      if (!doc || doc.IsNull()) continue;
      if (!doc.IsMap())
        throw error(error_code::yaml_syntax,
                    file + ": front matter must be a map");
      for (const auto& kv : doc) {
        auto key = kv.first.as<std::string>();
        if (key == "options")
          out.options = options_from(kv.second, file);
        else if (key == "include")
          out.includes = includes_from(kv.second, file);
        else
          throw error(error_code::yaml_syntax,
                      file + ": unknown front matter key '" + key + "'");
      }
    }
    i = end + 1;
  }

  static const std::regex named(R"(^\s*([A-Za-z.][A-Za-z0-9._]*)\s*:(?!=)\s*(.*)$)");
  std::vector<std::string> comments;
  while (i < lines.size()) {
    std::string t = trim(lines[i]);
    if (t.empty()) {
      comments.clear();
      ++i;
      continue;
    }
    if (t[0] == '#') {
      // Trailing spaces in comments are kept; they may be description text.
      std::string c = lines[i].substr(lines[i].find('#') + 1);
      if (!c.empty() && c[0] == ' ') c.erase(0, 1);
      comments.push_back(c);
      ++i;
      continue;
    }
    rule_entry e;
    e.file = file;
    e.line = static_cast<int>(i) + 1;
    e.origin = origin;
    std::string statement = lines[i];
    std::smatch m;
    if (std::regex_match(lines[i], m, named)) {
      e.name = m[1];
      statement = m[2];
    }
    std::string code = code_part(statement);
    while (needs_more(code) && i + 1 < lines.size()) {
      ++i;
      statement += "\n" + lines[i];
      code += "\n" + code_part(lines[i]);
    }
    ++i;
    e.source = statement;
    for (std::size_t k = 0; k < comments.size(); ++k)
      e.description += (k ? "\n" : "") + comments[k];
    comments.clear();
    out.entries.push_back(std::move(e));
  }
  return out;
}

struct loader {
  std::vector<fs::path> stack;
  std::vector<std::string> stack_names;
  std::set<fs::path> done;
  std::vector<rule_entry> entries;
  option_overrides root_options;

  void load(const fs::path& path, const std::string& display, bool root) {
    std::error_code ec;
    fs::path canonical = fs::weakly_canonical(path, ec);
    if (ec) canonical = path;
    auto on_stack = std::find(stack.begin(), stack.end(), canonical);
    if (on_stack != stack.end()) {
      std::vector<std::string> chain(
          stack_names.begin() + (on_stack - stack.begin()), stack_names.end());
      chain.push_back(display);
      throw cycle_error(chain);
    }
    if (done.count(canonical)) return;

    std::string text = read_file(path);
    file_contents c = is_yaml_path(path)
                          ? parse_yaml_file(text, display, display)
                          : parse_text_file(text, display, display);
    if (root) root_options = c.options;

    stack.push_back(canonical);
    stack_names.push_back(display);
    fs::path dir = fs::path(display).parent_path();
    fs::path real_dir = path.parent_path();
    for (const auto& inc : c.includes) {
      fs::path shown = (dir.empty() ? fs::path(".") : dir) / inc;
      fs::path real = fs::path(inc).is_absolute()
                          ? fs::path(inc)
                          : (real_dir.empty() ? fs::path(".") : real_dir) / inc;
      load(real, fs::path(inc).is_absolute() ? inc : shown.string(), false);
    }
    stack.pop_back();
    stack_names.pop_back();
    done.insert(canonical);
    for (auto& e : c.entries) entries.push_back(std::move(e));
  }
};

build_result load_rules(const fs::path& path, std::optional<timestamp> now) {
  loader l;
  l.load(path, path.string(), true);
  return build_ruleset(l.entries, path.string(), now ? *now : now_seconds(),
                       l.root_options);
}

std::string yaml_quote(std::string_view s) {
  std::string out = "\"";
  for (unsigned char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (c < 0x20) out += fmt::format("\\x{:02x}", c);
        else out += static_cast<char>(c);
    }
  }
  return out + "\"";
}

}  // namespace

build_result read_rules_text(const fs::path& path,
                             std::optional<timestamp> now) {
  return load_rules(path, now);
}

build_result read_rules_yaml(const fs::path& path,
                             std::optional<timestamp> now) {
  return load_rules(path, now);
}

build_result read_rules(const fs::path& path, std::optional<timestamp> now) {
  return load_rules(path, now);
}

std::string to_yaml(const rule_set& rs) {
  std::string out;
  if (rs.has_local_options()) {
    out += "---\noptions:\n";
    for (const auto& [k, v] : rs.local_options().entries())
      out += fmt::format("  {}: {}\n", k, yaml_quote(v));
    out += "---\n";
  }
  if (rs.empty()) return out + "rules: []\n";
  out += "rules:\n";
  for (const auto& r : rs) {
    out += "- expr: " + yaml_quote(r.expression_text()) + "\n";
    out += "  name: " + yaml_quote(r.name) + "\n";
    out += "  label: " + yaml_quote(r.label) + "\n";
    out += "  description: " + yaml_quote(r.description) + "\n";
    out += "  created: " + yaml_quote(format_timestamp(r.created)) + "\n";
    out += "  origin: " + yaml_quote(r.origin) + "\n";
    if (r.meta.empty()) {
      out += "  meta: {}\n";
    } else {
      out += "  meta:\n";
      for (const auto& [k, v] : r.meta)
        out += "    " + yaml_quote(k) + ": " + yaml_quote(v) + "\n";
    }
  }
  return out;
}

void export_yaml(const rule_set& rs, const fs::path& path) {
  write_file(path, to_yaml(rs));
}

std::string to_text(const rule_set& rs) {
  std::string out;
  if (rs.has_local_options()) {
    out += "---\noptions:\n";
    for (const auto& [k, v] : rs.local_options().entries())
      out += fmt::format("  {}: {}\n", k, yaml_quote(v));
    out += "---\n";
  }
  for (const auto& r : rs) {
    out += "\n";
    if (!r.description.empty())
      for (const auto& line : split_lines(r.description))
        out += "# " + line + "\n";
    out += r.name + ": " + r.expression_text() + "\n";
  }
  return out;
}

void export_text(const rule_set& rs, const fs::path& path) {
  write_file(path, to_text(rs));
}

rule_table rules_to_table(const rule_set& rs) {
  rule_table t;
  t.header = {"name", "rule", "label", "description", "origin", "created"};
  for (const auto& r : rs)
    t.rows.push_back({r.name, r.expression_text(), r.label, r.description,
                      r.origin, format_timestamp(r.created)});
  return t;
}

build_result table_to_rules(const rule_table& table,
                            std::optional<timestamp> now) {
  auto column = [&](std::string_view name) -> std::optional<std::size_t> {
    auto it = std::find(table.header.begin(), table.header.end(), name);
    if (it == table.header.end()) return std::nullopt;
    return static_cast<std::size_t>(it - table.header.begin());
  };
  auto name_col = column("name"), rule_col = column("rule");
  if (!name_col || !rule_col)
    throw error(error_code::invalid_value,
                "rule table needs columns 'name' and 'rule'");
  auto label_col = column("label"), desc_col = column("description"),
       origin_col = column("origin"), created_col = column("created");

  std::vector<rule_entry> entries;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    if (row.size() != table.header.size())
      throw error(error_code::ragged_row,
                  fmt::format("row {} has {} fields, expected {}", i + 1,
                              row.size(), table.header.size()));
    rule_entry e;
    if (!row[*name_col].empty()) e.name = row[*name_col];
    e.source = row[*rule_col];
    e.file = fmt::format("row {}", i + 1);
    if (label_col) e.label = row[*label_col];
    if (desc_col) e.description = row[*desc_col];
    if (origin_col && !row[*origin_col].empty()) e.origin = row[*origin_col];
    if (created_col && !row[*created_col].empty())
      e.created = parse_timestamp(row[*created_col]);
    entries.push_back(std::move(e));
  }
  return build_ruleset(entries, "table", now ? *now : now_seconds());
}

}  // namespace checkmate
