#pragma once

// Text and JSON forms of observation sets.
//
// Text: one observation per block, one row per line over {0, 1, ?}, blocks
// separated by blank lines. JSON:
//   {"observations": [["010", "0?1", "11?"], ...],
//    "metadata": {"rule": 150, "T": 3, "seed": 7, "k": 0}}
// with every metadata field optional.

#include <filesystem>
#include <string>
#include <string_view>

#include "caid/observation.hpp"

namespace caid {

ObservationSet parse_text(std::string_view text);
std::string serialize_text(const ObservationSet& set);

ObservationSet parse_json(std::string_view text);
std::string serialize_json(const ObservationSet& set);

// Chooses the format by extension (.json) or, failing that, by a leading '{'.
ObservationSet load_observations(const std::filesystem::path& path);
void save_observations(const std::filesystem::path& path, const ObservationSet& set);

}  // namespace caid
