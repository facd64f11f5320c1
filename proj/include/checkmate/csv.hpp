#pragma once

#include "checkmate/frame.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace checkmate {

using csv_rows = std::vector<std::vector<std::string>>;

/// RFC-4180 records, header included. Throws ragged-row with the line a
/// short or long record starts on.
csv_rows parse_csv(std::string_view text);

std::string csv_field(std::string_view s);
std::string format_csv(const csv_rows& rows);

/// Infers column types boolean, then number, then text. Empty cells and
/// `NA` are missing.
data_frame frame_from_csv(std::string_view text);
data_frame ingest_csv(const std::filesystem::path& path);

/// Missing cells are written as NA, booleans as TRUE/FALSE.
std::string frame_to_csv(const data_frame& frame);

}  // namespace checkmate
