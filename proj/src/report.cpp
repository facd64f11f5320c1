#include "checkmate/report.hpp"

#include "checkmate/csv.hpp"
#include "checkmate/error.hpp"

#include <algorithm>

#include <fmt/format.h>
#include <json.hpp>

namespace checkmate {

using nlohmann::json;

output_format parse_format(std::string_view name) {
  if (name == "csv") return output_format::csv;
  if (name == "json") return output_format::json;
  if (name == "text") return output_format::text;
  throw error(error_code::usage,
              "unknown format '" + std::string(name) + "' (csv, json, text)");
}

namespace {

const std::vector<std::string> summary_header{
    "name", "items", "passes", "fails", "nNA", "error", "warning",
    "expression"};
const std::vector<std::string> record_header{"id", "name", "value",
                                             "expression"};

std::string flag(bool b) { return b ? "TRUE" : "FALSE"; }

std::vector<std::string> summary_cells(const summary_row& r) {
  return {r.name,
          std::to_string(r.items),
          std::to_string(r.passes),
          std::to_string(r.fails),
          std::to_string(r.nNA),
          flag(r.error),
          flag(r.warning),
          r.expression};
}

std::vector<std::string> record_cells(const record_row& r) {
  return {r.id ? *r.id : "NA", r.name, std::string(to_string(r.value)),
          r.expression};
}

json summary_json(const std::vector<summary_row>& rows) {
  json out = json::array();
  for (const auto& r : rows)
    out.push_back({{"name", r.name},
                   {"items", r.items},
                   {"passes", r.passes},
                   {"fails", r.fails},
                   {"nNA", r.nNA},
                   {"error", r.error},
                   {"warning", r.warning},
                   {"expression", r.expression}});
  return out;
}

json tri_json(tri t) {
  if (t == tri::na) return nullptr;
  return t == tri::true_;
}

json records_json(const std::vector<record_row>& rows) {
  json out = json::array();
  for (const auto& r : rows)
    out.push_back({{"id", r.id ? json(*r.id) : json(nullptr)},
                   {"name", r.name},
                   {"value", tri_json(r.value)},
                   {"expression", r.expression}});
  return out;
}

template <class Row, class Cells>
std::string tabulate(const std::vector<std::string>& header,
                     const std::vector<Row>& rows, Cells cells,
                     output_format f) {
  std::vector<std::vector<std::string>> body;
  for (const auto& r : rows) body.push_back(cells(r));
  if (f == output_format::text) return format_table(header, body);
  csv_rows all{header};
  all.insert(all.end(), body.begin(), body.end());
  return format_csv(all);
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string format_table(const std::vector<std::string>& header,
                         const std::vector<std::vector<std::string>>& rows,
                         bool row_labels) {
  std::size_t cols = header.size() + (row_labels ? 1 : 0);
  std::vector<std::vector<std::string>> grid;
  auto with_label = [&](std::string label, const std::vector<std::string>& r) {
    std::vector<std::string> line;
    if (row_labels) line.push_back(std::move(label));
    line.insert(line.end(), r.begin(), r.end());
    return line;
  };
  grid.push_back(with_label("", header));
  for (std::size_t i = 0; i < rows.size(); ++i)
    grid.push_back(with_label(std::to_string(i + 1), rows[i]));
  std::vector<std::size_t> width(cols, 0);
  for (const auto& line : grid)
    for (std::size_t j = 0; j < cols; ++j)
      width[j] = std::max(width[j], line[j].size());
  std::string out;
  for (const auto& line : grid) {
    for (std::size_t j = 0; j < cols; ++j)
      out += fmt::format("{}{:>{}}", j ? " " : "", line[j], width[j]);
    out += "\n";
  }
  return out;
}

std::string emit_summary(const std::vector<summary_row>& rows,
                         output_format f) {
  if (f == output_format::json)
    return json{{"summary", summary_json(rows)}}.dump(2) + "\n";
  return tabulate(summary_header, rows, summary_cells, f);
}

std::string emit_records(const std::vector<record_row>& rows,
                         output_format f) {
  if (f == output_format::json)
    return json{{"records", records_json(rows)}}.dump(2) + "\n";
  if (f == output_format::csv)
    return tabulate(record_header, rows, record_cells, f);
  // Missing ids print as <NA>, as R does for character columns.
  return tabulate(record_header, rows,
                  [](const record_row& r) {
                    auto cells = record_cells(r);
                    if (!r.id) cells[0] = "<NA>";
                    return cells;
                  },
                  f);
}

std::string emit_check(const std::vector<summary_row>& summary,
                       const std::vector<record_row>& records,
                       output_format f) {
  if (f == output_format::json)
    return json{{"summary", summary_json(summary)},
                {"records", records_json(records)}}
               .dump(2) +
           "\n";
  return emit_records(records, f);
}

std::string emit_status(const status_table& t, output_format f) {
  if (f == output_format::json) {
    json statuses = json::array();
    for (std::size_t s = 0; s < t.statuses.size(); ++s)
      statuses.push_back({{"status", t.statuses[s]}, {"counts", t.counts[s]}});
    return json{{"mode", std::string(to_string(t.mode))},
                {"versions", t.versions},
                {"statuses", statuses}}
               .dump(2) +
           "\n";
  }
  std::vector<std::string> header{"status"};
  header.insert(header.end(), t.versions.begin(), t.versions.end());
  std::vector<std::vector<std::string>> body;
  for (std::size_t s = 0; s < t.statuses.size(); ++s) {
    std::vector<std::string> row{t.statuses[s]};
    for (auto c : t.counts[s]) row.push_back(std::to_string(c));
    body.push_back(std::move(row));
  }
  if (f == output_format::csv) {
    csv_rows all{header};
    all.insert(all.end(), body.begin(), body.end());
    return format_csv(all);
  }
  // Status names act as row labels, left aligned.
  std::size_t w = 0;
  for (const auto& s : t.statuses) w = std::max(w, s.size());
  std::vector<std::size_t> cw;
  for (std::size_t v = 0; v < t.versions.size(); ++v) {
    std::size_t m = t.versions[v].size();
    for (const auto& row : body) m = std::max(m, row[v + 1].size());
    cw.push_back(m);
  }
  std::string out = std::string(w, ' ');
  for (std::size_t v = 0; v < t.versions.size(); ++v)
    out += fmt::format(" {:>{}}", t.versions[v], cw[v]);
  out += "\n";
  for (const auto& row : body) {
    out += fmt::format("{:<{}}", row[0], w);
    for (std::size_t v = 0; v < cw.size(); ++v)
      out += fmt::format(" {:>{}}", row[v + 1], cw[v]);
    out += "\n";
  }
  return out;
}

std::string svg_bars(const std::vector<summary_row>& rows) {
  const int label_w = 120, bar_w = 400, bar_h = 20, gap = 8, top = 30;
  int height = top + static_cast<int>(rows.size()) * (bar_h + gap) + 30;
  int width = label_w + bar_w + 40;
  std::string out = fmt::format(
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
      "width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\" "
      "font-family=\"sans-serif\" font-size=\"11\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      "<text x=\"{2}\" y=\"18\" font-size=\"13\">Validation results "
      "per rule</text>\n",
      width, height, label_w);
  std::size_t max_items = 1;
  for (const auto& r : rows) max_items = std::max(max_items, r.items);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    int y = top + static_cast<int>(i) * (bar_h + gap);
    out += fmt::format(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n",
        label_w - 6, y + bar_h * 0.7, xml_escape(r.name));
    if (r.error) {
      out += fmt::format("<text x=\"{}\" y=\"{}\" fill=\"#b00\">error</text>\n",
                         label_w + 4, y + bar_h * 0.7);
      continue;
    }
    double x = label_w;
    struct part {
      std::size_t n;
      const char* colour;
      const char* what;
    };
    for (part p : {part{r.passes, "#4daf4a", "passes"},
                   part{r.fails, "#e41a1c", "fails"},
                   part{r.nNA, "#999999", "NA"}}) {
      if (p.n == 0) continue;
      double w = bar_w * static_cast<double>(p.n) / max_items;
      out += fmt::format(
          "<rect x=\"{:.2f}\" y=\"{}\" width=\"{:.2f}\" height=\"{}\" "
          "fill=\"{}\"><title>{} {}: {}</title></rect>\n",
          x, y, w, bar_h, p.colour, xml_escape(r.name), p.what, p.n);
      if (w >= 18)
        out += fmt::format(
            "<text x=\"{:.2f}\" y=\"{}\" text-anchor=\"middle\" "
            "fill=\"white\">{}</text>\n",
            x + w / 2, y + bar_h * 0.7, p.n);
      x += w;
    }
  }
  int ly = height - 12;
  out += fmt::format(
      "<rect x=\"{0}\" y=\"{1}\" width=\"10\" height=\"10\" fill=\"#4daf4a\"/>"
      "<text x=\"{2}\" y=\"{3}\">passes</text>\n"
      "<rect x=\"{4}\" y=\"{1}\" width=\"10\" height=\"10\" fill=\"#e41a1c\"/>"
      "<text x=\"{5}\" y=\"{3}\">fails</text>\n"
      "<rect x=\"{6}\" y=\"{1}\" width=\"10\" height=\"10\" fill=\"#999999\"/>"
      "<text x=\"{7}\" y=\"{3}\">NA</text>\n",
      label_w, ly - 9, label_w + 14, ly, label_w + 70, label_w + 84,
      label_w + 130, label_w + 144);
  return out + "</svg>\n";
}

std::string svg_lines(const status_table& t) {
  static const char* palette[] = {"#1b9e77", "#d95f02", "#7570b3", "#e7298a",
                                  "#66a61e", "#e6ab02", "#a6761d", "#666666",
                                  "#1f78b4", "#b2df8a", "#fb9a99"};
  const int left = 60, plot_w = 420, plot_h = 260, top = 30, legend_w = 170;
  int width = left + plot_w + legend_w, height = top + plot_h + 50;
  std::size_t max_count = 1;
  for (const auto& row : t.counts)
    for (auto c : row) max_count = std::max(max_count, c);
  std::size_t n = t.versions.size();
  auto px = [&](std::size_t v) {
    return left + (n > 1 ? plot_w * static_cast<double>(v) / (n - 1)
                         : plot_w / 2.0);
  };
  auto py = [&](std::size_t c) {
    return top + plot_h - plot_h * static_cast<double>(c) / max_count;
  };
  std::string out = fmt::format(
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
      "width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\" "
      "font-family=\"sans-serif\" font-size=\"11\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      "<text x=\"{2}\" y=\"18\" font-size=\"13\">Status counts per version "
      "({3})</text>\n"
      "<line x1=\"{2}\" y1=\"{4}\" x2=\"{5}\" y2=\"{4}\" stroke=\"black\"/>\n"
      "<line x1=\"{2}\" y1=\"{6}\" x2=\"{2}\" y2=\"{4}\" stroke=\"black\"/>\n"
      "<text x=\"{7}\" y=\"{8}\" text-anchor=\"end\">{9}</text>\n"
      "<text x=\"{7}\" y=\"{4}\" text-anchor=\"end\">0</text>\n",
      width, height, left, to_string(t.mode), top + plot_h, left + plot_w, top,
      left - 4, top + 4, max_count);
  for (std::size_t v = 0; v < n; ++v)
    out += fmt::format(
        "<text x=\"{:.2f}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
        px(v), top + plot_h + 16, xml_escape(t.versions[v]));
  for (std::size_t s = 0; s < t.statuses.size(); ++s) {
    const char* colour = palette[s % std::size(palette)];
    std::string points;
    for (std::size_t v = 0; v < n; ++v)
      points += fmt::format("{}{:.2f},{:.2f}", v ? " " : "", px(v),
                            py(t.counts[s][v]));
    out += fmt::format(
        "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"2\" "
        "points=\"{}\"><title>{}</title></polyline>\n",
        colour, points, xml_escape(t.statuses[s]));
    for (std::size_t v = 0; v < n; ++v)
      out += fmt::format(
          "<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3\" fill=\"{}\">"
          "<title>{} {}: {}</title></circle>\n",
          px(v), py(t.counts[s][v]), colour, xml_escape(t.statuses[s]),
          xml_escape(t.versions[v]), t.counts[s][v]);
    int ly = top + 10 + static_cast<int>(s) * 18;
    out += fmt::format(
        "<rect x=\"{}\" y=\"{}\" width=\"10\" height=\"10\" fill=\"{}\"/>"
        "<text x=\"{}\" y=\"{}\">{}</text>\n",
        left + plot_w + 20, ly - 9, colour, left + plot_w + 34, ly,
        xml_escape(t.statuses[s]));
  }
  return out + "</svg>\n";
}

}  // namespace checkmate
