#pragma once

// Table files are JSON:
//   {"outer": {"word": "ENWNWS", "lengths": ["2/1", "1/1", ...]},
//    "holes": [{"word": "WNES", "lengths": [...], "anchor": ["1/4", "1/4"]}]}
// Rationals are written as "num/den" strings. On input, plain integers and
// decimal literals are accepted too; decimals mark the table inexact.

#include "vhb/geometry.hpp"

#include <cstdint>
#include <filesystem>
#include <string>

namespace vhb {

VHTable table_from_json(const std::string& text);
std::string table_to_json(const VHTable& table, int indent = 2);

VHTable read_table(const std::filesystem::path& path);
void write_table(const std::filesystem::path& path, const VHTable& table);

/// FNV-1a over the compact JSON form; stable across runs and platforms.
std::uint64_t table_hash(const VHTable& table);
std::string hex_hash(std::uint64_t h);

}  // namespace vhb
