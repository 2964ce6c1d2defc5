#pragma once

#include <cstddef>
#include <cstdint>

namespace semzip::uni {

// Character-class flags for the pre-tokenization patterns. Generated from
// scripts/gen_unicode_tables.py (which probes the same regex engine the
// reference counter uses).
inline constexpr std::uint8_t kLu = 1 << 0;
inline constexpr std::uint8_t kLl = 1 << 1;
inline constexpr std::uint8_t kLt = 1 << 2;
inline constexpr std::uint8_t kLm = 1 << 3;
inline constexpr std::uint8_t kLo = 1 << 4;
inline constexpr std::uint8_t kM = 1 << 5;
inline constexpr std::uint8_t kN = 1 << 6;
inline constexpr std::uint8_t kWs = 1 << 7;
inline constexpr std::uint8_t kLetter = kLu | kLl | kLt | kLm | kLo;

struct CharRange {
    std::uint32_t lo;
    std::uint32_t hi;
    std::uint8_t flags;
};

extern const CharRange kCharRanges[];
extern const std::size_t kCharRangeCount;

std::uint8_t char_flags(std::uint32_t cp);

inline bool is_letter(std::uint32_t cp) { return char_flags(cp) & kLetter; }
inline bool is_number(std::uint32_t cp) { return char_flags(cp) & kN; }
inline bool is_space(std::uint32_t cp) { return char_flags(cp) & kWs; }

}  // namespace semzip::uni
