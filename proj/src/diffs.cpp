#include "checkmate/diffs.hpp"

#include "checkmate/error.hpp"

#include <algorithm>

#include <fmt/format.h>

namespace checkmate {

std::string_view to_string(compare_mode m) {
  return m == compare_mode::sequential ? "sequential" : "to_first";
}

std::size_t status_table::at(std::string_view status,
                             std::size_t version) const {
  auto it = std::find(statuses.begin(), statuses.end(), status);
  if (it == statuses.end())
    throw error(error_code::unknown_name,
                "no status '" + std::string(status) + "'");
  return counts[static_cast<std::size_t>(it - statuses.begin())].at(version);
}

namespace {

template <std::size_t N>
status_table empty_table(const std::array<std::string_view, N>& statuses,
                         std::vector<std::string> versions, compare_mode how) {
  status_table t;
  for (auto s : statuses) t.statuses.emplace_back(s);
  t.counts.assign(N, std::vector<std::size_t>(versions.size(), 0));
  t.versions = std::move(versions);
  t.mode = how;
  return t;
}

std::size_t reference_of(std::size_t i, compare_mode how) {
  if (i == 0) return 0;
  return how == compare_mode::sequential ? i - 1 : 0;
}

void check_frames(const std::vector<named_frame>& versions) {
  if (versions.empty())
    throw error(error_code::shape_mismatch, "no dataset versions given");
  const data_frame& first = versions.front().frame;
  auto names = first.names();
  std::sort(names.begin(), names.end());
  for (const auto& v : versions) {
    auto other = v.frame.names();
    std::sort(other.begin(), other.end());
    if (v.frame.rows() != first.rows() || other != names)
      throw error(error_code::shape_mismatch,
                  fmt::format("version '{}' differs in shape from '{}'",
                              v.name, versions.front().name));
  }
}

bool same_cell(const column_data& a, const column_data& b, std::size_t i) {
  if (a.index() != b.index()) return false;
  switch (a.index()) {
    case 0: return std::get<0>(a)[i] == std::get<0>(b)[i];
    case 1: return *std::get<1>(a)[i] == *std::get<1>(b)[i];
    default: return *std::get<2>(a)[i] == *std::get<2>(b)[i];
  }
}

}  // namespace

status_table compare_validations(const std::vector<validation>& runs,
                                 const std::vector<std::string>& names,
                                 compare_mode how) {
  auto t = empty_table(validation_statuses, names, how);
  if (runs.empty()) return t;
  const auto& base = runs.front().outcomes;
  for (const auto& run : runs) {
    bool aligned = run.outcomes.size() == base.size();
    for (std::size_t r = 0; aligned && r < base.size(); ++r)
      aligned = run.outcomes[r].items() == base[r].items() &&
                run.outcomes[r].failed() == base[r].failed();
    if (!aligned)
      throw error(error_code::shape_mismatch,
                  "rule results cannot be aligned across versions");
  }

  enum row {
    validations, verifiable, unverifiable, still_unverifiable,
    new_unverifiable, satisfied, still_satisfied, new_satisfied, violated,
    still_violated, new_violated
  };
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto& cur = runs[i].outcomes;
    const auto& ref = runs[reference_of(i, how)].outcomes;
    auto bump = [&](int row) { ++t.counts[row][i]; };
    for (std::size_t r = 0; r < cur.size(); ++r) {
      auto now = cur[r].values();
      if (!now) continue;
      auto before = ref[r].values();
      for (std::size_t k = 0; k < now->size(); ++k) {
        tri a = (*now)[k];
        bool kept = a == (*before)[k];
        bump(validations);
        if (a == tri::na) {
          bump(unverifiable);
          bump(kept ? still_unverifiable : new_unverifiable);
          continue;
        }
        bump(verifiable);
        if (a == tri::true_) {
          bump(satisfied);
          bump(kept ? still_satisfied : new_satisfied);
        } else {
          bump(violated);
          bump(kept ? still_violated : new_violated);
        }
      }
    }
  }
  return t;
}

status_table compare_validations(const rule_set& rs,
                                 const std::vector<named_frame>& versions,
                                 compare_mode how,
                                 const confront_options& opts) {
  check_frames(versions);
  std::vector<validation> runs;
  std::vector<std::string> names;
  for (const auto& v : versions) {
    runs.push_back(confront(v.frame, rs, opts));
    names.push_back(v.name);
  }
  return compare_validations(runs, names, how);
}

status_table compare_cells(const std::vector<named_frame>& versions,
                           compare_mode how) {
  check_frames(versions);
  std::vector<std::string> names;
  for (const auto& v : versions) names.push_back(v.name);
  auto t = empty_table(cell_statuses, names, how);

  enum row {
    cells, available, still_available, unadapted, adapted, imputed, missing,
    still_missing, removed
  };
  for (std::size_t i = 0; i < versions.size(); ++i) {
    const data_frame& cur = versions[i].frame;
    const data_frame& ref = versions[reference_of(i, how)].frame;
    auto bump = [&](int row) { ++t.counts[row][i]; };
    for (const auto& col : cur.columns()) {
      const column* old = ref.find(col.name);
      for (std::size_t k = 0; k < cur.rows(); ++k) {
        bool was = !old->missing(k), is = !col.missing(k);
        bump(cells);
        if (is) {
          bump(available);
          if (was) {
            bump(still_available);
            bump(same_cell(col.data, old->data, k) ? unadapted : adapted);
          } else {
            bump(imputed);
          }
        } else {
          bump(missing);
          bump(was ? removed : still_missing);
        }
      }
    }
  }
  return t;
}

std::vector<chart_point> chart_data(const status_table& t) {
  std::vector<chart_point> out;
  for (std::size_t s = 0; s < t.statuses.size(); ++s)
    for (std::size_t v = 0; v < t.versions.size(); ++v)
      out.push_back({t.statuses[s], t.versions[v], t.counts[s][v]});
  return out;
}

}  // namespace checkmate
