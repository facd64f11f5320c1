#pragma once

#include "checkmate/tri.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace checkmate {

enum class raise_mode { none, error, all };

std::string_view to_string(raise_mode m);

/// Fully resolved confrontation options.
struct option_set {
  tri na_value = tri::na;
  raise_mode raise = raise_mode::none;
  double lin_eq_eps = 1e-8;
  double lin_ineq_eps = 1e-8;

  friend bool operator==(const option_set&, const option_set&) = default;
};

/// A partial option set. Unset fields defer to the next level out
/// (call -> rule set -> global).
struct option_overrides {
  std::optional<tri> na_value;
  std::optional<raise_mode> raise;
  std::optional<double> lin_eq_eps;
  std::optional<double> lin_ineq_eps;

  bool empty() const {
    return !na_value && !raise && !lin_eq_eps && !lin_ineq_eps;
  }

  /// Sets an option from its user-facing name ("na.value", "raise",
  /// "lin.eq.eps", "lin.ineq.eps"). Throws unknown-option or invalid-value.
  void set(std::string_view name, std::string_view value);

  /// `other`'s set fields win.
  option_overrides merged_with(const option_overrides& other) const;

  option_set applied_to(option_set base) const;

  /// (name, rendered value) for every set field, in canonical order.
  std::vector<std::pair<std::string, std::string>> entries() const;

  static option_overrides from(const option_set& s);

  friend bool operator==(const option_overrides&,
                         const option_overrides&) = default;
};

option_overrides parse_option_pairs(
    const std::vector<std::pair<std::string, std::string>>& pairs);

/// call value if set, else local if set, else global.
option_set resolve(const option_set& global, const option_overrides& local,
                   const option_overrides& call);

// Process-wide defaults, guarded for concurrent access.
option_set global_options();
void set_global_options(const option_overrides& changes);
void reset_global_options();

}  // namespace checkmate
