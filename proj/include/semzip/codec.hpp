#pragma once

#include <map>
#include <string>
#include <vector>

#include "semzip/atom.hpp"

namespace semzip {

// Shared code-to-expansion table whose token cost amortizes over reuse.
// Wire format is the @DICT block verbatim; entry order is preserved.
struct ProtocolDictionary {
    std::string dictionary_id;  // domain tag, e.g. TRIP
    std::vector<std::pair<std::string, std::string>> entries;  // code -> expansion
    std::string header_text;  // canonical rendered @DICT block

    const std::string* lookup(std::string_view code) const;
};

// Pre: text begins with "@DICT/". Trailing semicolons and newlines inside
// the entry list are tolerated. Codes must be unique and expansions must
// be distinct normalization fixed points.
Result<ProtocolDictionary> parse_dictionary(const std::string& text);

Result<ProtocolDictionary> load_dictionary(const std::string& path);

// Smallest N with N * saving > cost. Nonpositive saving never amortizes.
Result<int> amortization_break_even(int dictionary_token_cost, int per_use_token_saving);

struct RegimeRendering {
    Regime regime = Regime::Prose;
    std::string payload;
    bool decodable = false;  // true iff parse_symbolic understands the regime
};

bool regime_decodable(Regime r);

// Loaded grammar and mapping tables (fields.table, codes.table,
// emoji.table). The tables are normative for the symbolic grammars:
// an atom is expressible in a regime iff it matches a field row (type,
// subject, predicate, and the row's modality/scope defaults) with a value
// in the row's domain, and carries no evidence span.
class CodecTables {
public:
    static Result<CodecTables> load(const std::string& grammars_dir);

    struct FieldSpec {
        std::string name;
        AtomType type = AtomType::Constraint;
        std::string subject;
        Predicate predicate = Predicate::Equals;
        Modality modality = Modality::Unknown;
        Scope scope = Scope::Unknown;
        enum class Domain { Token, Number, List, Flag } domain = Domain::Token;
        bool multi = false;
        int core_order = 0;
        std::string core_key, core_item;  // core_item: element name inside AVOID
        std::string min_key, min_item;    // min_item: element name inside NO
        bool szip_header = false;
        std::vector<std::pair<std::string, int>> szip_slots;  // (tag, slot index)
        std::string szip_key;
        std::string szip_bang;
        std::vector<std::string> szip_plus_tags;
        char szip_list_sep = ',';
        std::string szip_suffix;  // numeric unit suffix, e.g. "4d"
    };

    const std::vector<FieldSpec>& fields() const { return fields_; }
    const FieldSpec* field_by_atom(AtomType t, std::string_view subject, Predicate p) const;
    const FieldSpec* field_by_core_key(std::string_view key) const;
    const FieldSpec* field_by_core_item(std::string_view item) const;
    const FieldSpec* field_by_min_key(std::string_view key) const;
    const FieldSpec* field_by_min_item(std::string_view item) const;
    const FieldSpec* field_by_szip_key(std::string_view key) const;
    const FieldSpec* field_by_bang(std::string_view code) const;
    const FieldSpec* field_by_slot(std::string_view tag, int index) const;
    const FieldSpec* plus_field_for_tag(std::string_view tag) const;
    const FieldSpec* field_by_subject(std::string_view subject) const;
    int slot_count(std::string_view tag) const;

    enum class Tier { Core, Min, Szip };
    // canonical -> surface for the tier (falls back along szip -> min ->
    // display -> canonical).
    std::string surface(const std::string& canonical, Tier tier) const;
    // surface -> canonical; nullopt when the surface is not a known code.
    std::optional<std::string> canonical_for_surface(std::string_view surface, Tier tier) const;
    std::optional<std::string> tag_for_task(const std::string& canonical) const;
    std::optional<std::string> task_for_tag(std::string_view tag) const;
    bool is_known_tag(std::string_view tag) const;

    std::string emoji_for_field(const std::string& field_name) const;
    std::string emoji_for_value(const std::string& canonical) const;
    std::string flag_emoji() const { return flag_emoji_; }
    std::string plus_emoji() const { return plus_emoji_; }

    // sha256 of each raw table file, keyed by file name (manifest input).
    const std::map<std::string, std::string>& table_hashes() const { return table_hashes_; }

private:
    std::vector<FieldSpec> fields_;
    struct CodeSpec {
        std::string canonical, display, min, szip, tag;
    };
    std::map<std::string, CodeSpec> codes_;                      // by canonical
    std::map<std::string, std::string> rev_display_, rev_min_, rev_szip_;
    std::map<std::string, std::string> tag_to_task_;
    std::map<std::string, std::string> field_emoji_, value_emoji_;
    std::string flag_emoji_ = "!";
    std::string plus_emoji_ = "+";
    std::map<std::string, std::string> table_hashes_;

    Status load_fields(const std::string& text);
    Status load_codes(const std::string& text);
    Status load_emoji(const std::string& text);
};

// Deterministic text per regime grammar. The prose regime is a fixed
// template (one clause per atom, grouped by type); canonical_structured
// is the decoder schema's JSON shape with stable key order. Errors name
// the atom that is not expressible.
Result<RegimeRendering> render(const std::vector<SemanticAtom>& atoms, Regime regime,
                               const CodecTables& tables,
                               const ProtocolDictionary* dictionary = nullptr);

// Total parse of the symbolic grammars (ccl_core, ccl_min, szip_ascii).
// Dictionary codes expand before atom construction. An inline @DICT
// header line at the start of a szip payload is honored.
Result<std::vector<SemanticAtom>> parse_symbolic(const std::string& payload, Regime regime,
                                                 const CodecTables& tables,
                                                 const ProtocolDictionary* dictionary = nullptr);

}  // namespace semzip
