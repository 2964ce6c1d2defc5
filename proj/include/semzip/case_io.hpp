#pragma once

#include <string>
#include <vector>

#include "semzip/atom.hpp"

namespace semzip {

// Case documents are line-oriented with the version header `semzip-case/1`.
// Multi-line text (original, payloads) is carried in pipe blocks: each
// line of the block is written as `| <content>` (bare `|` for an empty
// line), so documents round-trip byte-exact and stay reviewable.
//
// Canonical order: case_id, note, original block, gold_atom lines (atom
// order is data), representation blocks in fixed regime order. Optional
// atom fields are omitted entirely when absent.

inline constexpr std::string_view kCaseFormatVersion = "semzip-case/1";

// Deterministic: identical input yields identical bytes. Rejects cases
// that fail validation, with the validation report as the error.
Result<std::string> canonical_serialize(const CaseRecord& c);

// Returns a validated CaseRecord, or a parse/schema error with the
// 1-based line number.
Result<CaseRecord> parse_case(const std::string& document);

std::string serialize_gold_atom(const GoldAtom& g);
Result<GoldAtom> parse_gold_atom_line(std::string_view line);

struct CaseSet {
    std::vector<CaseRecord> cases;
    std::string content_hash;  // sha256 over canonical bytes, index order
};

// Loads `<dir>/cases.index` (one case_id per line, `#` comments) and each
// `<dir>/cases/<id>.case`.
Result<CaseSet> load_case_set(const std::string& dir);

}  // namespace semzip
