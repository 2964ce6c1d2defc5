#include "semzip/bpe.hpp"

#include <algorithm>
#include <filesystem>
#include <limits>

#include "semzip/unicode_tables.hpp"

namespace semzip {

namespace uni {
std::uint8_t char_flags(std::uint32_t cp) {
    std::size_t lo = 0, hi = kCharRangeCount;
    while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        if (cp < kCharRanges[mid].lo)
            hi = mid;
        else if (cp > kCharRanges[mid].hi)
            lo = mid + 1;
        else
            return kCharRanges[mid].flags;
    }
    return 0;
}
}  // namespace uni

namespace {

using uni::char_flags;
using uni::kLetter;
using uni::kLl;
using uni::kLm;
using uni::kLo;
using uni::kLt;
using uni::kLu;
using uni::kM;
using uni::kN;
using uni::kWs;

// Decoded view of the input: codepoints plus the byte offset of each.
struct CodepointString {
    std::vector<std::uint32_t> cps;
    std::vector<std::size_t> offsets;  // offsets.size() == cps.size() + 1

    explicit CodepointString(std::string_view text) {
        offsets.push_back(0);
        std::size_t i = 0;
        while (i < text.size()) {
            unsigned char b0 = static_cast<unsigned char>(text[i]);
            std::uint32_t cp = 0;
            std::size_t len = 1;
            if (b0 < 0x80) {
                cp = b0;
            } else if ((b0 >> 5) == 0x6 && i + 1 < text.size() && is_cont(text[i + 1])) {
                cp = (b0 & 0x1F) << 6 | cont(text[i + 1]);
                len = 2;
            } else if ((b0 >> 4) == 0xE && i + 2 < text.size() && is_cont(text[i + 1]) && is_cont(text[i + 2])) {
                cp = (b0 & 0x0F) << 12 | cont(text[i + 1]) << 6 | cont(text[i + 2]);
                len = 3;
            } else if ((b0 >> 3) == 0x1E && i + 3 < text.size() && is_cont(text[i + 1]) && is_cont(text[i + 2]) &&
                       is_cont(text[i + 3])) {
                cp = (b0 & 0x07) << 18 | cont(text[i + 1]) << 12 | cont(text[i + 2]) << 6 | cont(text[i + 3]);
                len = 4;
            } else {
                cp = 0x110000 + b0;  // invalid byte: classifies as "other"
            }
            cps.push_back(cp);
            i += len;
            offsets.push_back(i);
        }
    }

    static bool is_cont(char c) { return (static_cast<unsigned char>(c) & 0xC0) == 0x80; }
    static std::uint32_t cont(char c) { return static_cast<unsigned char>(c) & 0x3F; }

    std::size_t size() const { return cps.size(); }
};

inline std::uint8_t flags_of(std::uint32_t cp) { return cp >= 0x110000 ? 0 : char_flags(cp); }
inline bool is_crlf(std::uint32_t cp) { return cp == '\r' || cp == '\n'; }
inline bool is_ws(std::uint32_t cp) { return flags_of(cp) & kWs; }
inline bool is_l(std::uint32_t cp) { return flags_of(cp) & kLetter; }
inline bool is_n(std::uint32_t cp) { return flags_of(cp) & kN; }
// [^\r\n\p{L}\p{N}] — the optional one-char prefix of the word branches.
inline bool is_word_prefix(std::uint32_t cp) { return !is_crlf(cp) && !is_l(cp) && !is_n(cp); }
// [^\s\p{L}\p{N}] — the punctuation-run class.
inline bool is_punct(std::uint32_t cp) { return !is_ws(cp) && !is_l(cp) && !is_n(cp); }
// o200k upper/lower-ish classes (Lm, Lo, M belong to both).
inline bool is_uc(std::uint32_t cp) { return flags_of(cp) & (kLu | kLt | kLm | kLo | kM); }
inline bool is_lc(std::uint32_t cp) { return flags_of(cp) & (kLl | kLm | kLo | kM); }

inline std::uint32_t lower_ascii(std::uint32_t cp) {
    return (cp >= 'A' && cp <= 'Z') ? cp - 'A' + 'a' : cp;
}

// (?i:'s|'t|'re|'ve|'m|'ll|'d) starting at i; returns consumed length.
std::size_t contraction_suffix(const CodepointString& s, std::size_t i) {
    if (i >= s.size() || s.cps[i] != '\'') return 0;
    if (i + 1 >= s.size()) return 0;
    std::uint32_t c1 = lower_ascii(s.cps[i + 1]);
    if (c1 == 's' || c1 == 't' || c1 == 'm' || c1 == 'd') return 2;
    if (i + 2 < s.size()) {
        std::uint32_t c2 = lower_ascii(s.cps[i + 2]);
        if ((c1 == 'r' && c2 == 'e') || (c1 == 'v' && c2 == 'e') || (c1 == 'l' && c2 == 'l')) return 3;
    }
    return 0;
}

std::size_t ws_run(const CodepointString& s, std::size_t i) {
    std::size_t j = i;
    while (j < s.size() && is_ws(s.cps[j])) ++j;
    return j - i;
}

// \s*[\r\n]+ — maximal whitespace run truncated after its last CR/LF.
std::size_t match_newline_run(const CodepointString& s, std::size_t i) {
    std::size_t run = ws_run(s, i);
    std::size_t last = 0;
    for (std::size_t k = 0; k < run; ++k)
        if (is_crlf(s.cps[i + k])) last = k + 1;
    return last;
}

// \s+(?!\S) — whitespace to end of text, or all but the final whitespace
// character when non-space follows.
std::size_t match_trailing_ws(const CodepointString& s, std::size_t i) {
    std::size_t run = ws_run(s, i);
    if (run == 0) return 0;
    if (i + run == s.size()) return run;
    return run >= 2 ? run - 1 : 0;
}

//  ?[^\s\p{L}\p{N}]+<trailing>* where trailing is [\r\n] (cl100k) or
// [\r\n/] (o200k).
std::size_t match_punct_run(const CodepointString& s, std::size_t i, bool slash_trailing) {
    std::size_t j = i;
    if (j < s.size() && s.cps[j] == ' ') ++j;
    std::size_t start = j;
    while (j < s.size() && is_punct(s.cps[j])) ++j;
    if (j == start) {
        // without the optional space the run must begin at i
        j = i;
        while (j < s.size() && is_punct(s.cps[j])) ++j;
        if (j == i) return 0;
    }
    while (j < s.size() && (is_crlf(s.cps[j]) || (slash_trailing && s.cps[j] == '/'))) ++j;
    return j - i;
}

std::size_t match_cl100k(const CodepointString& s, std::size_t i) {
    // '(?i:[sdmt]|ll|ve|re)
    if (std::size_t n = contraction_suffix(s, i); n && s.cps[i] == '\'') {
        // cl100k has no 'd/'m distinction issues: same suffix set applies
        return n;
    }
    // [^\r\n\p{L}\p{N}]?+\p{L}+
    {
        std::size_t j = i;
        if (j < s.size() && !is_l(s.cps[j]) && is_word_prefix(s.cps[j])) {
            if (j + 1 < s.size() && is_l(s.cps[j + 1])) {
                std::size_t k = j + 1;
                while (k < s.size() && is_l(s.cps[k])) ++k;
                return k - i;
            }
        } else if (j < s.size() && is_l(s.cps[j])) {
            std::size_t k = j;
            while (k < s.size() && is_l(s.cps[k])) ++k;
            return k - i;
        }
    }
    // \p{N}{1,3}
    if (i < s.size() && is_n(s.cps[i])) {
        std::size_t k = i;
        while (k < s.size() && k - i < 3 && is_n(s.cps[k])) ++k;
        return k - i;
    }
    //  ?[^\s\p{L}\p{N}]++[\r\n]*
    if (std::size_t n = match_punct_run(s, i, /*slash_trailing=*/false)) return n;
    // \s*[\r\n]+
    if (std::size_t n = match_newline_run(s, i)) return n;
    // \s+(?!\S)
    if (std::size_t n = match_trailing_ws(s, i)) return n;
    // \s+
    if (std::size_t n = ws_run(s, i)) return n;
    return 0;
}

// The two o200k word branches share the prefix/suffix shape.
std::size_t o200k_word_at(const CodepointString& s, std::size_t j, bool upper_first) {
    if (upper_first) {
        // [UC]+[LC]*
        std::size_t k = j;
        while (k < s.size() && is_uc(s.cps[k])) ++k;
        if (k == j) return 0;
        while (k < s.size() && is_lc(s.cps[k])) ++k;
        return (k - j) + contraction_suffix(s, k);
    }
    // [UC]*[LC]+ with backtracking over the shared UC/LC categories
    std::size_t k = j;
    while (k < s.size() && is_uc(s.cps[k])) ++k;
    for (std::size_t kk = k + 1; kk-- > j;) {
        if (kk < s.size() && is_lc(s.cps[kk])) {
            std::size_t l = kk;
            while (l < s.size() && is_lc(s.cps[l])) ++l;
            return (l - j) + contraction_suffix(s, l);
        }
        if (kk == j) break;
    }
    return 0;
}

std::size_t match_o200k(const CodepointString& s, std::size_t i) {
    for (bool upper_first : {false, true}) {
        // optional [^\r\n\p{L}\p{N}] prefix, greedy
        if (i < s.size() && is_word_prefix(s.cps[i])) {
            if (std::size_t n = o200k_word_at(s, i + 1, upper_first)) return n + 1;
        }
        if (std::size_t n = o200k_word_at(s, i, upper_first)) return n;
    }
    if (i < s.size() && is_n(s.cps[i])) {
        std::size_t k = i;
        while (k < s.size() && k - i < 3 && is_n(s.cps[k])) ++k;
        return k - i;
    }
    if (std::size_t n = match_punct_run(s, i, /*slash_trailing=*/true)) return n;
    if (std::size_t n = match_newline_run(s, i)) return n;
    if (std::size_t n = match_trailing_ws(s, i)) return n;
    if (std::size_t n = ws_run(s, i)) return n;
    return 0;
}

}  // namespace

std::vector<std::string_view> pretokenize(std::string_view text, PatternId pattern) {
    CodepointString s(text);
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        std::size_t n = pattern == PatternId::Cl100k ? match_cl100k(s, i) : match_o200k(s, i);
        if (n == 0) n = 1;  // unreachable by construction; keep the split total
        out.push_back(text.substr(s.offsets[i], s.offsets[i + n] - s.offsets[i]));
        i += n;
    }
    return out;
}

namespace {

std::uint64_t count_piece(std::string_view piece, const BpeVocabulary& vocab) {
    if (piece.size() <= 1) return piece.empty() ? 0 : 1;
    if (vocab.ranks.find(piece) != vocab.ranks.end()) return 1;

    // Segment boundaries; parts[i] spans [parts[i], parts[i+1]).
    std::vector<std::uint32_t> parts(piece.size() + 1);
    for (std::size_t i = 0; i < parts.size(); ++i) parts[i] = static_cast<std::uint32_t>(i);

    while (parts.size() > 2) {
        std::uint32_t best_rank = std::numeric_limits<std::uint32_t>::max();
        std::size_t best = 0;
        bool found = false;
        for (std::size_t i = 0; i + 2 < parts.size(); ++i) {
            auto it = vocab.ranks.find(piece.substr(parts[i], parts[i + 2] - parts[i]));
            if (it != vocab.ranks.end() && it->second < best_rank) {
                best_rank = it->second;
                best = i;
                found = true;
            }
        }
        if (!found) break;
        parts.erase(parts.begin() + static_cast<std::ptrdiff_t>(best) + 1);
    }
    return parts.size() - 1;
}

}  // namespace

TokenCount count_tokens(std::string_view text, const BpeVocabulary& vocab) {
    TokenCount tc;
    tc.vocabulary = vocab.name;
    for (std::string_view piece : pretokenize(text, vocab.pattern_id))
        tc.count += count_piece(piece, vocab);
    return tc;
}

Result<double> token_gain(std::string_view original, std::string_view compressed,
                          const BpeVocabulary& vocab) {
    auto orig = count_tokens(original, vocab);
    if (orig.count == 0) return err("original text tokenizes to zero tokens");
    auto comp = count_tokens(compressed, vocab);
    return 1.0 - static_cast<double>(comp.count) / static_cast<double>(orig.count);
}

Result<BpeVocabulary> load_vocabulary(const std::string& rank_file, std::string_view pattern) {
    BpeVocabulary vocab;
    if (pattern == "cl100k" || pattern == kCl100kPattern) {
        vocab.pattern_id = PatternId::Cl100k;
        vocab.pretokenization_pattern = std::string(kCl100kPattern);
    } else if (pattern == "o200k" || pattern == kO200kPattern) {
        vocab.pattern_id = PatternId::O200k;
        vocab.pretokenization_pattern = std::string(kO200kPattern);
    } else {
        return err("unsupported pre-tokenization pattern (expected cl100k or o200k, by name or full text)");
    }

    auto content = read_file(rank_file);
    if (!content) return content.error();
    vocab.name = std::filesystem::path(rank_file).stem().string();

    std::unordered_map<std::uint32_t, int> rank_lines;  // rank -> first line
    bool byte_seen[256] = {false};
    int line_no = 0;
    std::uint32_t max_rank = 0;
    for (const auto& raw : split(*content, '\n')) {
        ++line_no;
        auto line = trim(raw);
        if (line.empty()) continue;
        auto sp = line.find(' ');
        if (sp == std::string_view::npos)
            return err("malformed rank line (expected `base64 rank`)", line_no);
        auto bytes = base64_decode(line.substr(0, sp));
        if (!bytes) return err(bytes.error().message, line_no);
        if (bytes->empty()) return err("empty byte sequence", line_no);
        std::uint32_t rank = 0;
        for (char c : line.substr(sp + 1)) {
            if (c < '0' || c > '9') return err("malformed rank integer", line_no);
            rank = rank * 10 + static_cast<std::uint32_t>(c - '0');
        }
        auto [it, inserted] = rank_lines.emplace(rank, line_no);
        if (!inserted)
            return err("duplicate rank " + std::to_string(rank) + " (lines " +
                           std::to_string(it->second) + " and " + std::to_string(line_no) + ")",
                       line_no);
        if (!vocab.ranks.emplace(*bytes, rank).second)
            return err("duplicate byte sequence", line_no);
        if (bytes->size() == 1) byte_seen[static_cast<unsigned char>((*bytes)[0])] = true;
        max_rank = std::max(max_rank, rank);
    }
    if (vocab.ranks.empty()) return err("rank file has no entries: " + rank_file);
    for (int b = 0; b < 256; ++b)
        if (!byte_seen[b])
            return err("vocabulary is missing the single-byte entry for byte " + std::to_string(b));

    vocab.special_tokens["<|endoftext|>"] = max_rank + 1;
    return vocab;
}

}  // namespace semzip
