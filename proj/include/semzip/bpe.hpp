#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "semzip/util.hpp"

namespace semzip {

// The two supported pre-tokenization patterns, written exactly as the
// reference counter pins them. The engine implements these two patterns
// natively; load_vocabulary accepts the short name or the full text.
enum class PatternId { Cl100k, O200k };

inline constexpr std::string_view kCl100kPattern =
    R"('(?i:[sdmt]|ll|ve|re)|[^\r\n\p{L}\p{N}]?+\p{L}+|\p{N}{1,3}| ?[^\s\p{L}\p{N}]++[\r\n]*|\s*[\r\n]+|\s+(?!\S)|\s+)";

inline constexpr std::string_view kO200kPattern =
    R"([^\r\n\p{L}\p{N}]?[\p{Lu}\p{Lt}\p{Lm}\p{Lo}\p{M}]*[\p{Ll}\p{Lm}\p{Lo}\p{M}]+(?i:'s|'t|'re|'ve|'m|'ll|'d)?|[^\r\n\p{L}\p{N}]?[\p{Lu}\p{Lt}\p{Lm}\p{Lo}\p{M}]+[\p{Ll}\p{Lm}\p{Lo}\p{M}]*(?i:'s|'t|'re|'ve|'m|'ll|'d)?|\p{N}{1,3}| ?[^\s\p{L}\p{N}]+[\r\n/]*|\s*[\r\n]+|\s+(?!\S)|\s+)";

struct TransparentStringHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
    std::size_t operator()(const std::string& s) const { return std::hash<std::string_view>{}(s); }
};

struct BpeVocabulary {
    std::string name;
    std::unordered_map<std::string, std::uint32_t, TransparentStringHash, std::equal_to<>> ranks;
    std::string pretokenization_pattern;
    PatternId pattern_id = PatternId::Cl100k;
    std::map<std::string, std::uint32_t> special_tokens;
};

struct TokenCount {
    std::string vocabulary;
    std::uint64_t count = 0;
};

// Rank file format: one entry per line, base64(byte-sequence) space
// integer-rank. Requires unique ranks, unique byte sequences, and all 256
// single-byte entries. `pattern` is "cl100k", "o200k", or the full
// documented pattern text.
Result<BpeVocabulary> load_vocabulary(const std::string& rank_file, std::string_view pattern);

// Splits text into pre-token byte spans (views into `text`). Total: every
// byte lands in exactly one span. Exposed for conformance tests.
std::vector<std::string_view> pretokenize(std::string_view text, PatternId pattern);

// Standard BPE count: pre-tokenize, then within each span repeatedly
// merge the adjacent pair with the lowest rank. Plain text only: special
// tokens are never produced.
TokenCount count_tokens(std::string_view text, const BpeVocabulary& vocab);

// 1 - tokens(compressed)/tokens(original). Positive = compression.
// Rejects an original that tokenizes to zero tokens (empty text).
Result<double> token_gain(std::string_view original, std::string_view compressed,
                          const BpeVocabulary& vocab);

}  // namespace semzip
