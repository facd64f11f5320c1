#include "checkmate/options.hpp"

#include "checkmate/dsl.hpp"
#include "checkmate/error.hpp"

#include <charconv>
#include <cmath>
#include <mutex>
#include <shared_mutex>

namespace checkmate {

std::string_view to_string(raise_mode m) {
  switch (m) {
    case raise_mode::none: return "none";
    case raise_mode::error: return "error";
    case raise_mode::all: return "all";
  }
  return "none";
}

namespace {

double parse_eps(std::string_view name, std::string_view value) {
  double v = 0;
  auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || p != value.data() + value.size() ||
      !std::isfinite(v) || v < 0)
    throw error(error_code::invalid_value,
                "option '" + std::string(name) +
                    "' needs a nonnegative number, got '" +
                    std::string(value) + "'");
  return v;
}

}  // namespace

void option_overrides::set(std::string_view name, std::string_view value) {
  if (name == "na.value") {
    if (value == "NA")
      na_value = tri::na;
    else if (value == "TRUE" || value == "true")
      na_value = tri::true_;
    else if (value == "FALSE" || value == "false")
      na_value = tri::false_;
    else
      throw error(error_code::invalid_value,
                  "option 'na.value' must be NA, TRUE or FALSE, got '" +
                      std::string(value) + "'");
  } else if (name == "raise") {
    if (value == "none")
      raise = raise_mode::none;
    else if (value == "error")
      raise = raise_mode::error;
    else if (value == "all")
      raise = raise_mode::all;
    else
      throw error(error_code::invalid_value,
                  "option 'raise' must be none, error or all, got '" +
                      std::string(value) + "'");
  } else if (name == "lin.eq.eps") {
    lin_eq_eps = parse_eps(name, value);
  } else if (name == "lin.ineq.eps") {
    lin_ineq_eps = parse_eps(name, value);
  } else {
    throw error(error_code::unknown_option,
                "unknown option '" + std::string(name) + "'");
  }
}

option_overrides option_overrides::merged_with(
    const option_overrides& other) const {
  option_overrides out = *this;
  if (other.na_value) out.na_value = other.na_value;
  if (other.raise) out.raise = other.raise;
  if (other.lin_eq_eps) out.lin_eq_eps = other.lin_eq_eps;
  if (other.lin_ineq_eps) out.lin_ineq_eps = other.lin_ineq_eps;
  return out;
}

option_set option_overrides::applied_to(option_set base) const {
  if (na_value) base.na_value = *na_value;
  if (raise) base.raise = *raise;
  if (lin_eq_eps) base.lin_eq_eps = *lin_eq_eps;
  if (lin_ineq_eps) base.lin_ineq_eps = *lin_ineq_eps;
  return base;
}

std::vector<std::pair<std::string, std::string>> option_overrides::entries()
    const {
  std::vector<std::pair<std::string, std::string>> out;
  if (na_value) out.emplace_back("na.value", std::string(to_string(*na_value)));
  if (raise) out.emplace_back("raise", std::string(to_string(*raise)));
  if (lin_eq_eps)
    out.emplace_back("lin.eq.eps", dsl::format_number(*lin_eq_eps));
  if (lin_ineq_eps)
    out.emplace_back("lin.ineq.eps", dsl::format_number(*lin_ineq_eps));
  return out;
}

option_overrides option_overrides::from(const option_set& s) {
  return option_overrides{s.na_value, s.raise, s.lin_eq_eps, s.lin_ineq_eps};
}

option_overrides parse_option_pairs(
    const std::vector<std::pair<std::string, std::string>>& pairs) {
  option_overrides out;
  for (const auto& [k, v] : pairs) out.set(k, v);
  return out;
}

option_set resolve(const option_set& global, const option_overrides& local,
                   const option_overrides& call) {
  return call.applied_to(local.applied_to(global));
}

namespace {

std::shared_mutex global_mutex;
option_set global_table;

}  // namespace

option_set global_options() {
  std::shared_lock lock(global_mutex);
  return global_table;
}

void set_global_options(const option_overrides& changes) {
  std::unique_lock lock(global_mutex);
  global_table = changes.applied_to(global_table);
}

void reset_global_options() {
  std::unique_lock lock(global_mutex);
  global_table = option_set{};
}

}  // namespace checkmate
