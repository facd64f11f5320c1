#pragma once

#include "checkmate/engine.hpp"
#include "checkmate/frame.hpp"
#include "checkmate/rules.hpp"

#include <chrono>
#include <random>
#include <string>
#include <vector>

namespace checkmate::testing {

inline const timestamp fixed_time =
    std::chrono::sys_days{std::chrono::year{2018} / 6 / 5} +
    std::chrono::hours{14} + std::chrono::minutes{44} +
    std::chrono::seconds{6};

inline column num(std::string name, number_vector v) {
  return {std::move(name), std::move(v)};
}
inline column txt(std::string name, text_vector v) {
  return {std::move(name), std::move(v)};
}
inline column lgl(std::string name, logical_vector v) {
  return {std::move(name), std::move(v)};
}

inline rule_set named_rules(
    const std::vector<std::pair<std::optional<std::string>, std::string>>& src) {
  return new_ruleset(src, "test", fixed_time).rules;
}

inline rule_set make_rules(const std::vector<std::string>& sources) {
  std::vector<std::pair<std::optional<std::string>, std::string>> src;
  for (const auto& s : sources) src.emplace_back(std::nullopt, s);
  return named_rules(src);
}

inline tri random_tri(std::mt19937& rng) {
  return static_cast<tri>(std::uniform_int_distribution<int>(0, 2)(rng));
}

}  // namespace checkmate::testing
