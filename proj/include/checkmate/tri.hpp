#pragma once

#include <cstdint>
#include <string_view>

namespace checkmate {

// Kleene three-valued truth: na means "unverifiable".
enum class tri : std::uint8_t { false_, true_, na };

constexpr tri to_tri(bool b) { return b ? tri::true_ : tri::false_; }

constexpr tri operator!(tri a) {
  switch (a) {
    case tri::true_: return tri::false_;
    case tri::false_: return tri::true_;
    default: return tri::na;
  }
}

constexpr tri operator&(tri a, tri b) {
  if (a == tri::false_ || b == tri::false_) return tri::false_;
  if (a == tri::na || b == tri::na) return tri::na;
  return tri::true_;
}

constexpr tri operator|(tri a, tri b) {
  if (a == tri::true_ || b == tri::true_) return tri::true_;
  if (a == tri::na || b == tri::na) return tri::na;
  return tri::false_;
}

constexpr std::string_view to_string(tri t) {
  switch (t) {
    case tri::true_: return "TRUE";
    case tri::false_: return "FALSE";
    default: return "NA";
  }
}

}  // namespace checkmate
