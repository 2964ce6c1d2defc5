#include "semzip/codec.hpp"

#include <algorithm>
#include <set>

#include <nlohmann/json.hpp>

#include "semzip/normalize.hpp"
#include "semzip/sha256.hpp"

namespace semzip {

using FieldSpec = CodecTables::FieldSpec;
using Domain = CodecTables::FieldSpec::Domain;
using Tier = CodecTables::Tier;

// ---- protocol dictionaries ----

const std::string* ProtocolDictionary::lookup(std::string_view code) const {
    for (const auto& [c, e] : entries)
        if (c == code) return &e;
    return nullptr;
}

namespace {
std::string render_dictionary_header(const ProtocolDictionary& d) {
    std::string out = "@DICT/" + d.dictionary_id + ":";
    for (std::size_t i = 0; i < d.entries.size(); ++i) {
        out += (i ? "; " : " ") + d.entries[i].first + "=" + d.entries[i].second;
    }
    return out;
}
}  // namespace

Result<ProtocolDictionary> parse_dictionary(const std::string& text) {
    std::string_view s = trim(text);
    if (s.rfind("@DICT/", 0) != 0) return err("dictionary must begin with @DICT/");
    s.remove_prefix(6);
    auto colon = s.find(':');
    if (colon == std::string_view::npos) return err("dictionary header missing ':' after domain tag");
    ProtocolDictionary d;
    d.dictionary_id = std::string(trim(s.substr(0, colon)));
    if (d.dictionary_id.empty()) return err("empty dictionary domain tag");

    std::set<std::string> expansions;
    for (const auto& raw : split(std::string(s.substr(colon + 1)), ';')) {
        auto entry = trim(raw);
        if (entry.empty()) continue;  // trailing semicolons tolerated
        auto eq = entry.find('=');
        if (eq == std::string_view::npos) return err("dictionary entry missing '=': " + std::string(entry));
        std::string code(trim(entry.substr(0, eq)));
        std::string expansion(trim(entry.substr(eq + 1)));
        if (code.empty() || expansion.empty())
            return err("empty code or expansion: " + std::string(entry));
        if (normalize_text(expansion) != expansion)
            return err("expansion is not a normalization fixed point: " + expansion);
        if (d.lookup(code)) return err("duplicate dictionary code: " + code);
        if (!expansions.insert(expansion).second)
            return err("two codes expand to the same form: " + expansion);
        d.entries.emplace_back(std::move(code), std::move(expansion));
    }
    d.header_text = render_dictionary_header(d);
    return d;
}

Result<ProtocolDictionary> load_dictionary(const std::string& path) {
    auto text = read_file(path);
    if (!text) return text.error();
    auto d = parse_dictionary(*text);
    if (!d) return err(path + ": " + d.error().to_string());
    return d;
}

Result<int> amortization_break_even(int dictionary_token_cost, int per_use_token_saving) {
    if (per_use_token_saving < 1) return err("per-use saving must be >= 1 token; dictionary never amortizes");
    if (dictionary_token_cost < 0) return err("dictionary cost must be nonnegative");
    return dictionary_token_cost / per_use_token_saving + 1;
}

bool regime_decodable(Regime r) {
    return r == Regime::CclCore || r == Regime::CclMin || r == Regime::SzipAscii;
}

// ---- table loading ----

namespace {

Result<std::map<std::string, std::string>> parse_attr_line(const std::string& line) {
    auto toks = split_quoted(line);
    if (!toks) return toks.error();
    std::map<std::string, std::string> attrs;
    for (const auto& tok : *toks) {
        auto eq = tok.find('=');
        if (eq == std::string::npos) return err("expected key=value, got: " + tok);
        if (!attrs.emplace(tok.substr(0, eq), tok.substr(eq + 1)).second)
            return err("duplicate attribute: " + tok.substr(0, eq));
    }
    return attrs;
}

}  // namespace

Status CodecTables::load_fields(const std::string& text) {
    auto lines = split(text, '\n');
    if (lines.empty() || trim(lines[0]) != "semzip-fields/1")
        return err("fields.table: missing version header semzip-fields/1", 1);

    int order = 0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        auto line = trim(lines[i]);
        int line_no = static_cast<int>(i) + 1;
        if (line.empty() || line.front() == '#') continue;
        if (line.rfind("field=", 0) != 0) return err("fields.table: expected field= line", line_no);
        auto attrs = parse_attr_line(std::string(line));
        if (!attrs) return err("fields.table: " + attrs.error().message, line_no);

        FieldSpec f;
        order += 10;
        f.core_order = order;
        for (auto& [k, v] : *attrs) {
            if (k == "field") f.name = v;
            else if (k == "type") {
                auto t = parse_atom_type(v);
                if (!t) return err("fields.table: unknown type " + v, line_no);
                f.type = *t;
            } else if (k == "subject") f.subject = v;
            else if (k == "predicate") {
                auto p = parse_predicate(v);
                if (!p) return err("fields.table: unknown predicate " + v, line_no);
                f.predicate = *p;
            } else if (k == "modality") {
                auto m = parse_modality(v);
                if (!m) return err("fields.table: unknown modality " + v, line_no);
                f.modality = *m;
            } else if (k == "scope") {
                auto sc = parse_scope(v);
                if (!sc) return err("fields.table: unknown scope " + v, line_no);
                f.scope = *sc;
            } else if (k == "domain") {
                if (v == "token") f.domain = Domain::Token;
                else if (v == "number") f.domain = Domain::Number;
                else if (v == "list") f.domain = Domain::List;
                else if (v == "flag") f.domain = Domain::Flag;
                else return err("fields.table: unknown domain " + v, line_no);
            } else if (k == "multi") f.multi = (v == "yes");
            else if (k == "core_order") f.core_order = std::stoi(v);
            else if (k == "core") {
                auto colon = v.find(':');
                if (colon == std::string::npos) f.core_key = v;
                else { f.core_key = v.substr(0, colon); f.core_item = v.substr(colon + 1); }
            } else if (k == "min") {
                auto colon = v.find(':');
                if (colon == std::string::npos) f.min_key = v;
                else { f.min_key = v.substr(0, colon); f.min_item = v.substr(colon + 1); }
            } else if (k == "szip") {
                for (const auto& part : split(v, ',')) {
                    if (part == "header") f.szip_header = true;
                    else if (part.rfind("slot:", 0) == 0) {
                        auto bits = split(part.substr(5), ':');
                        if (bits.size() != 2) return err("fields.table: malformed slot spec " + part, line_no);
                        f.szip_slots.emplace_back(bits[0], std::stoi(bits[1]));
                    } else if (part.rfind("key:", 0) == 0) f.szip_key = part.substr(4);
                    else if (part.rfind("bang:", 0) == 0) f.szip_bang = part.substr(5);
                    else if (part.rfind("plus:", 0) == 0) f.szip_plus_tags.push_back(part.substr(5));
                    else if (!f.szip_plus_tags.empty()) f.szip_plus_tags.push_back(part);
                    else return err("fields.table: malformed szip spec " + part, line_no);
                }
            } else if (k == "szip_key") f.szip_key = v;
            else if (k == "szip_sep") {
                if (v.size() != 1) return err("fields.table: szip_sep must be one character", line_no);
                f.szip_list_sep = v[0];
            } else if (k == "szip_suffix") f.szip_suffix = v;
            else return err("fields.table: unknown attribute " + k, line_no);
        }
        if (f.name.empty() || f.subject.empty())
            return err("fields.table: field and subject are required", line_no);
        if (f.domain == Domain::Flag && f.predicate != Predicate::Allowed)
            return err("fields.table: flag fields must use predicate allowed", line_no);
        fields_.push_back(std::move(f));
    }

    // Grammar keys must be unambiguous.
    std::set<std::string> names, core_keys, min_keys, szip_keys, bangs, core_items, min_items, plus_tags;
    std::set<std::pair<std::string, int>> slots;
    std::set<std::string> atom_keys;
    for (const auto& f : fields_) {
        if (!names.insert(f.name).second) return err("fields.table: duplicate field name " + f.name);
        std::string ak = std::string(to_string(f.type)) + "/" + f.subject + "/" + std::string(to_string(f.predicate));
        if (!atom_keys.insert(ak).second) return err("fields.table: duplicate atom shape " + ak);
        if (!f.core_item.empty()) {
            if (!core_items.insert(f.core_item).second)
                return err("fields.table: duplicate core item " + f.core_item);
        } else if (!f.core_key.empty() && !core_keys.insert(f.core_key).second) {
            return err("fields.table: duplicate core key " + f.core_key);
        }
        if (!f.min_item.empty()) {
            if (!min_items.insert(f.min_item).second)
                return err("fields.table: duplicate min item " + f.min_item);
        } else if (!f.min_key.empty() && !min_keys.insert(f.min_key).second) {
            return err("fields.table: duplicate min key " + f.min_key);
        }
        if (!f.szip_key.empty() && !szip_keys.insert(f.szip_key).second)
            return err("fields.table: duplicate szip key " + f.szip_key);
        if (!f.szip_bang.empty() && !bangs.insert(f.szip_bang).second)
            return err("fields.table: duplicate bang code " + f.szip_bang);
        for (const auto& s : f.szip_slots)
            if (!slots.insert(s).second)
                return err("fields.table: duplicate slot " + s.first + ":" + std::to_string(s.second));
        for (const auto& t : f.szip_plus_tags)
            if (!plus_tags.insert(t).second)
                return err("fields.table: two plus fields for tag " + t);
    }
    return ok_status();
}

Status CodecTables::load_codes(const std::string& text) {
    auto lines = split(text, '\n');
    if (lines.empty() || trim(lines[0]) != "semzip-codes/1")
        return err("codes.table: missing version header semzip-codes/1", 1);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        auto line = trim(lines[i]);
        int line_no = static_cast<int>(i) + 1;
        if (line.empty() || line.front() == '#') continue;
        if (line.rfind("code ", 0) != 0) return err("codes.table: expected `code` line", line_no);
        auto attrs = parse_attr_line(std::string(line.substr(5)));
        if (!attrs) return err("codes.table: " + attrs.error().message, line_no);
        CodeSpec c;
        for (auto& [k, v] : *attrs) {
            if (k == "canonical") c.canonical = v;
            else if (k == "display") c.display = v;
            else if (k == "min") c.min = v;
            else if (k == "szip") c.szip = v;
            else if (k == "tag") c.tag = v;
            else return err("codes.table: unknown attribute " + k, line_no);
        }
        if (c.canonical.empty()) return err("codes.table: canonical is required", line_no);
        if (normalize_text(c.canonical) != c.canonical)
            return err("codes.table: canonical is not a normalization fixed point: " + c.canonical, line_no);
        if (!codes_.emplace(c.canonical, c).second)
            return err("codes.table: duplicate canonical " + c.canonical, line_no);
    }
    // Effective surfaces per tier; reverse maps must stay injective.
    for (const auto& [canon, c] : codes_) {
        std::string disp = c.display.empty() ? canon : c.display;
        std::string mn = c.min.empty() ? canon : c.min;
        std::string sz = c.szip.empty() ? mn : c.szip;
        auto add = [&](std::map<std::string, std::string>& rev, const std::string& surf,
                       const char* tier) -> Status {
            if (surf == canon) return ok_status();
            auto [it, inserted] = rev.emplace(surf, canon);
            if (!inserted && it->second != canon)
                return err(std::string("codes.table: ") + tier + " surface '" + surf +
                           "' maps to both " + it->second + " and " + canon);
            return ok_status();
        };
        if (auto s = add(rev_display_, disp, "display"); !s) return s.error();
        if (auto s = add(rev_min_, mn, "min"); !s) return s.error();
        if (auto s = add(rev_szip_, sz, "szip"); !s) return s.error();
        if (!c.tag.empty()) {
            auto [it, inserted] = tag_to_task_.emplace(c.tag, canon);
            if (!inserted) return err("codes.table: duplicate tag " + c.tag);
        }
    }
    return ok_status();
}

Status CodecTables::load_emoji(const std::string& text) {
    auto lines = split(text, '\n');
    if (lines.empty() || trim(lines[0]) != "semzip-emoji/1")
        return err("emoji.table: missing version header semzip-emoji/1", 1);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        auto line = trim(lines[i]);
        int line_no = static_cast<int>(i) + 1;
        if (line.empty() || line.front() == '#') continue;
        auto toks = split_any(line, " \t");
        if (toks.size() == 2 && toks[0] == "flag") { flag_emoji_ = toks[1]; continue; }
        if (toks.size() == 2 && toks[0] == "plus") { plus_emoji_ = toks[1]; continue; }
        if (toks.size() != 3) return err("emoji.table: expected `field|value <name> <glyph>`", line_no);
        if (toks[0] == "field") field_emoji_[toks[1]] = toks[2];
        else if (toks[0] == "value") value_emoji_[toks[1]] = toks[2];
        else return err("emoji.table: unknown entry kind " + toks[0], line_no);
    }
    return ok_status();
}

Result<CodecTables> CodecTables::load(const std::string& grammars_dir) {
    CodecTables t;
    for (const char* name : {"fields.table", "codes.table", "emoji.table"}) {
        auto text = read_file(grammars_dir + "/" + name);
        if (!text) return text.error();
        t.table_hashes_[name] = sha256_hex(*text);
        Status s = ok_status();
        if (std::string_view(name) == "fields.table") s = t.load_fields(*text);
        else if (std::string_view(name) == "codes.table") s = t.load_codes(*text);
        else s = t.load_emoji(*text);
        if (!s) return s.error();
    }
    return t;
}

// ---- lookups ----

const FieldSpec* CodecTables::field_by_atom(AtomType ty, std::string_view subject, Predicate p) const {
    for (const auto& f : fields_)
        if (f.type == ty && f.subject == subject && f.predicate == p) return &f;
    return nullptr;
}
const FieldSpec* CodecTables::field_by_core_key(std::string_view key) const {
    for (const auto& f : fields_)
        if (f.core_item.empty() && f.core_key == key) return &f;
    return nullptr;
}
const FieldSpec* CodecTables::field_by_core_item(std::string_view item) const {
    for (const auto& f : fields_)
        if (!f.core_item.empty() && f.core_item == item) return &f;
    return nullptr;
}
const FieldSpec* CodecTables::field_by_min_key(std::string_view key) const {
    for (const auto& f : fields_)
        if (f.min_item.empty() && f.min_key == key) return &f;
    return nullptr;
}
const FieldSpec* CodecTables::field_by_min_item(std::string_view item) const {
    for (const auto& f : fields_)
        if (!f.min_item.empty() && f.min_item == item) return &f;
    return nullptr;
}
const FieldSpec* CodecTables::field_by_szip_key(std::string_view key) const {
    for (const auto& f : fields_)
        if (!f.szip_key.empty() && f.szip_key == key && f.szip_slots.empty()) return &f;
    // slot fields may carry a key fallback; prefer exact key fields above
    for (const auto& f : fields_)
        if (!f.szip_key.empty() && f.szip_key == key) return &f;
    return nullptr;
}
const FieldSpec* CodecTables::field_by_bang(std::string_view code) const {
    for (const auto& f : fields_)
        if (!f.szip_bang.empty() && f.szip_bang == code) return &f;
    return nullptr;
}
const FieldSpec* CodecTables::field_by_slot(std::string_view tag, int index) const {
    for (const auto& f : fields_)
        for (const auto& [t, i] : f.szip_slots)
            if (t == tag && i == index) return &f;
    return nullptr;
}
const FieldSpec* CodecTables::plus_field_for_tag(std::string_view tag) const {
    for (const auto& f : fields_)
        for (const auto& t : f.szip_plus_tags)
            if (t == tag) return &f;
    return nullptr;
}
const FieldSpec* CodecTables::field_by_subject(std::string_view subject) const {
    for (const auto& f : fields_)
        if (f.subject == subject) return &f;
    return nullptr;
}
int CodecTables::slot_count(std::string_view tag) const {
    int n = 0;
    for (const auto& f : fields_)
        for (const auto& [t, i] : f.szip_slots)
            if (t == tag) n = std::max(n, i + 1);
    return n;
}

std::string CodecTables::surface(const std::string& canonical, Tier tier) const {
    auto it = codes_.find(canonical);
    if (it == codes_.end()) return canonical;
    const CodeSpec& c = it->second;
    std::string disp = c.display.empty() ? canonical : c.display;
    std::string mn = c.min.empty() ? canonical : c.min;
    switch (tier) {
        case Tier::Core: return disp;
        case Tier::Min: return mn;
        case Tier::Szip: return c.szip.empty() ? mn : c.szip;
    }
    return canonical;
}

std::optional<std::string> CodecTables::canonical_for_surface(std::string_view surface, Tier tier) const {
    const auto& rev = tier == Tier::Core ? rev_display_ : tier == Tier::Min ? rev_min_ : rev_szip_;
    auto it = rev.find(std::string(surface));
    if (it != rev.end()) return it->second;
    return std::nullopt;
}

std::optional<std::string> CodecTables::tag_for_task(const std::string& canonical) const {
    auto it = codes_.find(canonical);
    if (it == codes_.end() || it->second.tag.empty()) return std::nullopt;
    return it->second.tag;
}
std::optional<std::string> CodecTables::task_for_tag(std::string_view tag) const {
    auto it = tag_to_task_.find(std::string(tag));
    if (it == tag_to_task_.end()) return std::nullopt;
    return it->second;
}
bool CodecTables::is_known_tag(std::string_view tag) const {
    return tag_to_task_.count(std::string(tag)) > 0;
}

std::string CodecTables::emoji_for_field(const std::string& field_name) const {
    auto it = field_emoji_.find(field_name);
    return it == field_emoji_.end() ? std::string() : it->second;
}
std::string CodecTables::emoji_for_value(const std::string& canonical) const {
    auto it = value_emoji_.find(canonical);
    return it == value_emoji_.end() ? std::string() : it->second;
}

}  // namespace semzip
