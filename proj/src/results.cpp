#include "checkmate/results.hpp"

#include "checkmate/error.hpp"

#include <algorithm>

namespace checkmate {

std::vector<summary_row> summarize(const validation& v) {
  std::vector<summary_row> out;
  for (const auto& o : v.outcomes) {
    summary_row r;
    r.name = o.name;
    r.expression = o.expression;
    r.warning = !o.warnings.empty();
    r.error = o.failed();
    if (auto vals = o.values()) {
      r.items = vals->size();
      for (tri t : *vals) {
        if (t == tri::true_) ++r.passes;
        else if (t == tri::false_) ++r.fails;
        else ++r.nNA;
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

tri all_pass(const validation& v, bool na_rm) {
  tri acc = tri::true_;
  for (const auto& o : v.outcomes)
    if (auto vals = o.values())
      for (tri t : *vals)
        if (!(na_rm && t == tri::na)) acc = acc & t;
  return acc;
}

tri any_fail(const validation& v, bool na_rm) {
  tri acc = tri::false_;
  for (const auto& o : v.outcomes)
    if (auto vals = o.values())
      for (tri t : *vals)
        if (!(na_rm && t == tri::na)) acc = acc | !t;
  return acc;
}

std::variant<result_matrix, result_list> values(const validation& v,
                                                bool simplify) {
  result_list list;
  for (const auto& o : v.outcomes) {
    auto vals = o.values();
    if (!vals) continue;
    auto it = std::find_if(list.begin(), list.end(), [&](const auto& p) {
      return p.first == vals->size();
    });
    if (it == list.end()) {
      list.emplace_back(vals->size(), result_matrix{vals->size(), {}, {}});
      it = std::prev(list.end());
    }
    it->second.names.push_back(o.name);
    it->second.columns.push_back(*vals);
  }
  if (simplify && list.size() == 1) return std::move(list.front().second);
  return list;
}

namespace {

aggregate_row make_row(std::string label, std::size_t pass, std::size_t fail,
                       std::size_t na) {
  aggregate_row r{std::move(label), pass, fail, na, 0, 0, 0};
  double n = static_cast<double>(pass + fail + na);
  if (n > 0) {
    r.rel_pass = pass / n;
    r.rel_fail = fail / n;
    r.rel_NA = na / n;
  }
  return r;
}

}  // namespace

std::vector<aggregate_row> aggregate_results(const validation& v,
                                             aggregate_by by) {
  std::vector<aggregate_row> out;
  if (by == aggregate_by::rule) {
    for (const auto& s : summarize(v))
      out.push_back(make_row(s.name, s.passes, s.fails, s.nNA));
    return out;
  }
  std::vector<const logical_vector*> aligned;
  for (const auto& o : v.outcomes)
    if (v.record_aligned(o)) aligned.push_back(o.values());
  if (aligned.empty())
    throw error(error_code::no_record_aligned_outcomes,
                "no rule yields one result per record");
  for (std::size_t i = 0; i < v.records; ++i) {
    std::size_t counts[3] = {0, 0, 0};
    for (auto col : aligned) ++counts[static_cast<int>((*col)[i])];
    std::string label = v.key_values.empty() ? std::to_string(i + 1)
                                             : v.key_values[i];
    out.push_back(make_row(std::move(label), counts[1], counts[0], counts[2]));
  }
  return out;
}

std::vector<aggregate_row> sort_results(const validation& v, aggregate_by by,
                                        bool decreasing) {
  auto rows = aggregate_results(v, by);
  std::stable_sort(rows.begin(), rows.end(),
                   [&](const aggregate_row& a, const aggregate_row& b) {
                     return decreasing ? a.npass > b.npass : a.npass < b.npass;
                   });
  return rows;
}

std::vector<record_row> to_records(const validation& v) {
  std::vector<record_row> out;
  for (const auto& o : v.outcomes) {
    auto vals = o.values();
    if (!vals) continue;
    bool keyed = v.record_aligned(o) && !v.key_values.empty();
    for (std::size_t i = 0; i < vals->size(); ++i) {
      record_row r;
      if (keyed) r.id = v.key_values[i];
      r.name = o.name;
      r.value = (*vals)[i];
      r.expression = o.expression;
      out.push_back(std::move(r));
    }
  }
  return out;
}

std::vector<std::string> collect_errors(const validation& v) {
  std::vector<std::string> out;
  for (const auto& o : v.outcomes)
    if (auto e = std::get_if<rule_error>(&o.result))
      out.push_back(o.name + ": " + e->message);
  return out;
}

std::vector<std::string> collect_warnings(const validation& v) {
  std::vector<std::string> out;
  for (const auto& o : v.outcomes)
    for (const auto& w : o.warnings) out.push_back(o.name + ": " + w);
  return out;
}

}  // namespace checkmate
