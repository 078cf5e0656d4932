#pragma once

#include <string>
#include <string_view>

#include "collatt/dynamics.hpp"

namespace collatt {

inline constexpr int kRecordVersion = 1;

// FNV-1a, 64 bit. Stable content digest for record self-validation.
uint64_t fnv1a64(std::string_view data);

// Canonical text serialization. The last line is a digest over every
// preceding byte; parse_record recomputes and compares it.
std::string serialize_record(const RunRecord& rec);
RunRecord parse_record(const std::string& text);

RunRecord load_record(const std::string& path);
void save_record(const RunRecord& rec, const std::string& path);

}  // namespace collatt
