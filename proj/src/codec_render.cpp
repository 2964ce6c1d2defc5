#include <algorithm>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "semzip/codec.hpp"
#include "semzip/normalize.hpp"

namespace semzip {

using FieldSpec = CodecTables::FieldSpec;
using Domain = CodecTables::FieldSpec::Domain;
using Tier = CodecTables::Tier;

namespace {

std::string atom_label(const SemanticAtom& a) {
    return std::string(to_string(a.type)) + "/" + a.subject + "/" + std::string(to_string(a.predicate));
}

// Canonical token form of a text value (no aliasing; codecs are
// alias-independent, aliases belong to comparison).
std::string canon_token(std::string_view s) { return normalize_text(s); }

struct FieldGroup {
    const FieldSpec* field;
    std::vector<const SemanticAtom*> atoms;
};

Result<std::vector<FieldGroup>> collect_fields(const std::vector<SemanticAtom>& atoms,
                                               const CodecTables& tables, Regime regime) {
    std::map<const FieldSpec*, std::size_t> index;
    std::vector<FieldGroup> groups;
    for (const auto& a : atoms) {
        auto rep = validate_atom(a);
        if (!rep.ok()) return err("atom " + atom_label(a) + " fails validation: " + rep.to_string());
        if (a.evidence)
            return err("atom " + atom_label(a) + " carries a free-text evidence span; not expressible in " +
                       std::string(to_string(regime)));
        const FieldSpec* f = tables.field_by_atom(a.type, a.subject, a.predicate);
        if (!f)
            return err("atom " + atom_label(a) + " has no grammar field; not expressible in " +
                       std::string(to_string(regime)));
        if (a.modality != f->modality || a.scope != f->scope)
            return err("atom " + atom_label(a) + " deviates from the grammar defaults (modality/scope); " +
                       "not expressible in " + std::string(to_string(regime)));
        switch (f->domain) {
            case Domain::Token:
                if (!a.value.is_text())
                    return err("atom " + atom_label(a) + ": field expects a token value");
                break;
            case Domain::Number:
                if (!a.value.is_number())
                    return err("atom " + atom_label(a) + ": field expects a number value");
                break;
            case Domain::List:
                if (!a.value.is_list())
                    return err("atom " + atom_label(a) + ": field expects a list value");
                break;
            case Domain::Flag:
                if (!a.value.is_boolean() || a.value.as_boolean())
                    return err("atom " + atom_label(a) + ": negation field expects boolean false");
                break;
        }
        auto it = index.find(f);
        if (it == index.end()) {
            index.emplace(f, groups.size());
            groups.push_back({f, {&a}});
        } else {
            if (!f->multi)
                return err("two atoms map to grammar field " + f->name + "; not expressible");
            groups[it->second].atoms.push_back(&a);
        }
    }
    // table order
    std::stable_sort(groups.begin(), groups.end(), [&](const FieldGroup& a, const FieldGroup& b) {
        return a.field - b.field < 0;
    });
    return groups;
}

Status check_surface(const std::string& surface, std::string_view forbidden, const SemanticAtom& a) {
    if (surface.empty()) return err("atom " + atom_label(a) + ": empty value surface");
    for (char c : surface)
        if (is_ascii_space(c) || forbidden.find(c) != std::string_view::npos)
            return err("atom " + atom_label(a) + ": value surface '" + surface +
                       "' contains characters outside the regime grammar");
    return ok_status();
}

Result<std::string> token_surface(const SemanticAtom& a, const CodecTables& tables, Tier tier,
                                  std::string_view forbidden) {
    std::string canonical = canon_token(a.value.as_text());
    if (canonical.empty()) return err("atom " + atom_label(a) + ": value normalizes to nothing");
    std::string s = tables.surface(canonical, tier);
    if (auto c = check_surface(s, forbidden, a); !c) return c.error();
    return s;
}

Result<std::vector<std::string>> list_surfaces(const SemanticAtom& a, const CodecTables& tables,
                                               Tier tier, std::string_view forbidden) {
    std::vector<std::string> out;
    for (const auto& item : a.value.as_list()) {
        std::string canonical = canon_token(item);
        if (canonical.empty()) return err("atom " + atom_label(a) + ": list element normalizes to nothing");
        std::string s = tables.surface(canonical, tier);
        if (auto c = check_surface(s, forbidden, a); !c) return c.error();
        out.push_back(std::move(s));
    }
    if (out.empty()) return err("atom " + atom_label(a) + ": empty list value");
    return out;
}

// ---- ccl_core / ccl_min ----

Result<std::string> render_ccl(const std::vector<FieldGroup>& groups, const CodecTables& tables,
                               bool core) {
    const Tier tier = core ? Tier::Core : Tier::Min;
    const std::string_view forbidden = core ? "={},;" : "=,;";
    struct Seg {
        int order;
        std::string text;
    };
    std::vector<Seg> segs;
    std::vector<std::pair<int, std::string>> flag_items;  // (order, item name)

    int running = 0;
    for (const auto& g : groups) {
        const FieldSpec& f = *g.field;
        int order = core ? f.core_order : running;
        ++running;  // min order == table order of groups
        const std::string key = core ? f.core_key : f.min_key;
        const std::string item = core ? f.core_item : f.min_item;
        if (f.domain == Domain::Flag) {
            flag_items.emplace_back(order, item.empty() ? f.subject : item);
            continue;
        }
        if (key.empty()) continue;  // not representable in this regime (none currently)
        const SemanticAtom& a = *g.atoms.front();
        std::string val;
        switch (f.domain) {
            case Domain::Token: {
                if (f.multi) {
                    std::vector<std::string> items;
                    for (const auto* atom : g.atoms) {
                        auto s = token_surface(*atom, tables, tier, forbidden);
                        if (!s) return s.error();
                        items.push_back(*s);
                    }
                    val = core ? "{" + join(items, ",") + "}" : join(items, ",");
                } else {
                    auto s = token_surface(a, tables, tier, forbidden);
                    if (!s) return s.error();
                    val = *s;
                }
                break;
            }
            case Domain::Number:
                val = a.value.number_lexeme();
                break;
            case Domain::List: {
                auto items = list_surfaces(a, tables, tier, forbidden);
                if (!items) return items.error();
                val = core ? "{" + join(*items, ",") + "}" : join(*items, ",");
                break;
            }
            case Domain::Flag:
                break;  // handled above
        }
        segs.push_back({order, key + "=" + val});
    }
    if (!flag_items.empty()) {
        std::sort(flag_items.begin(), flag_items.end());
        std::vector<std::string> items;
        for (auto& [o, it] : flag_items) items.push_back(it);
        std::string body = join(items, ",");
        segs.push_back({flag_items.front().first,
                        core ? "AVOID={" + body + "}" : "NO=" + body});
    }
    std::stable_sort(segs.begin(), segs.end(), [](const Seg& a, const Seg& b) { return a.order < b.order; });

    std::string out = core ? "@CCL/1" : "@C1";
    for (const auto& s : segs) out += " " + s.text;
    return out;
}

// ---- szip_ascii / szip_emoji ----

Result<std::string> render_szip(const std::vector<FieldGroup>& groups, const CodecTables& tables,
                                bool emoji) {
    const Tier tier = Tier::Szip;
    const std::string_view forbidden = ":,+|!@";
    const std::string_view slot_forbidden = ":,+|!@/";

    // The task atom names the header tag; slot fields fold into the header.
    std::string tag;
    const SemanticAtom* task_atom = nullptr;
    for (const auto& g : groups) {
        if (g.field->szip_header) {
            task_atom = g.atoms.front();
            std::string canonical = canon_token(task_atom->value.as_text());
            auto t = tables.tag_for_task(canonical);
            if (!t)
                return err("atom " + atom_label(*task_atom) + ": task value '" + canonical +
                           "' has no szip header tag; not expressible");
            tag = *t;
        }
    }

    std::vector<std::string> slot_vals;
    if (!tag.empty()) slot_vals.assign(static_cast<std::size_t>(tables.slot_count(tag)), "");

    std::vector<std::string> segs;
    std::vector<std::string> tail_segs;  // key/plus/bang segments in table order

    for (const auto& g : groups) {
        const FieldSpec& f = *g.field;
        if (f.szip_header) continue;
        const SemanticAtom& a = *g.atoms.front();

        // slot placement only exists under the active tag
        int slot_index = -1;
        if (!tag.empty() && !emoji)
            for (const auto& [t, i] : f.szip_slots)
                if (t == tag) slot_index = i;

        std::string surf;
        if (f.domain == Domain::Number) {
            surf = a.value.number_lexeme() + (slot_index >= 0 || emoji ? f.szip_suffix : "");
        } else if (f.domain == Domain::Token && !f.multi) {
            auto s = token_surface(a, tables, tier, slot_index >= 0 ? slot_forbidden : forbidden);
            if (!s) return s.error();
            surf = *s;
        }

        if (slot_index >= 0) {
            slot_vals[static_cast<std::size_t>(slot_index)] = surf;
            continue;
        }

        switch (f.domain) {
            case Domain::Flag: {
                std::string code = f.szip_bang.empty() ? f.subject : f.szip_bang;
                tail_segs.push_back((emoji ? tables.flag_emoji() : "!") + code);
                break;
            }
            case Domain::Token: {
                if (f.multi || !f.szip_plus_tags.empty()) {
                    bool tag_ok = false;
                    for (const auto& t : f.szip_plus_tags)
                        if (t == tag) tag_ok = true;
                    if (!tag_ok)
                        return err("atom " + atom_label(a) + ": plus field " + f.name +
                                   " is not defined under header tag '" + tag + "'; not expressible");
                    for (const auto* atom : g.atoms) {
                        std::string canonical = canon_token(atom->value.as_text());
                        std::string s = emoji && !tables.emoji_for_value(canonical).empty()
                                            ? tables.emoji_for_value(canonical)
                                            : tables.surface(canonical, tier);
                        if (!emoji)
                            if (auto c = check_surface(s, forbidden, *atom); !c) return c.error();
                        tail_segs.push_back((emoji ? tables.plus_emoji() : "+") + s);
                    }
                    break;
                }
                if (f.szip_key.empty())
                    return err("atom " + atom_label(a) +
                               ": field has no szip placement without a task header; not expressible");
                std::string prefix = emoji && !tables.emoji_for_field(f.name).empty()
                                         ? tables.emoji_for_field(f.name)
                                         : f.szip_key + ":";
                tail_segs.push_back(prefix + surf);
                break;
            }
            case Domain::Number: {
                if (f.szip_key.empty())
                    return err("atom " + atom_label(a) + ": number field has no szip key; not expressible");
                std::string prefix = emoji && !tables.emoji_for_field(f.name).empty()
                                         ? tables.emoji_for_field(f.name)
                                         : f.szip_key + ":";
                tail_segs.push_back(prefix + surf);
                break;
            }
            case Domain::List: {
                auto items = list_surfaces(a, tables, tier, forbidden);
                if (!items) return items.error();
                if (emoji)
                    for (auto& it : *items) {
                        auto canonical = tables.canonical_for_surface(it, tier).value_or(it);
                        auto e = tables.emoji_for_value(canonical);
                        if (!e.empty()) it = e;
                    }
                std::string prefix = emoji && !tables.emoji_for_field(f.name).empty()
                                         ? tables.emoji_for_field(f.name)
                                         : f.szip_key + ":";
                if (f.szip_key.empty() && !(emoji && !tables.emoji_for_field(f.name).empty()))
                    return err("atom " + atom_label(a) + ": list field has no szip key; not expressible");
                char sep = emoji ? '+' : f.szip_list_sep;
                tail_segs.push_back(prefix + join(*items, std::string(1, sep)));
                break;
            }
        }
    }

    std::vector<std::string> out_segs;
    if (!tag.empty()) {
        if (emoji) {
            std::string e = tables.emoji_for_field("task");
            out_segs.push_back((e.empty() ? "@" : e) + tag);
        } else {
            // trim trailing empty slots; interior gaps render as "-"
            std::size_t last = 0;
            for (std::size_t i = 0; i < slot_vals.size(); ++i)
                if (!slot_vals[i].empty()) last = i + 1;
            std::string header = tag + ":";
            for (std::size_t i = 0; i < last; ++i) {
                if (i) header += "/";
                header += slot_vals[i].empty() ? "-" : slot_vals[i];
            }
            if (last == 0) header = tag;  // header with no slot content
            out_segs.push_back(header);
        }
    }
    for (auto& s : tail_segs) out_segs.push_back(std::move(s));
    if (out_segs.empty()) return err("no atoms expressible in szip regime (empty rendering)");
    return join(out_segs, " ");
}

// ---- prose / canonical structured ----

std::string words_of(const std::string& token) {
    std::string out = token;
    for (char& c : out)
        if (c == '_') c = ' ';
    return out;
}

std::string prose_value(const Value& v, const CodecTables& tables) {
    switch (v.kind()) {
        case ValueKind::Text: return words_of(tables.surface(canon_token(v.as_text()), Tier::Core));
        case ValueKind::Number: return v.number_lexeme();
        case ValueKind::Boolean: return v.as_boolean() ? "yes" : "no";
        case ValueKind::List: {
            std::vector<std::string> items;
            for (const auto& it : v.as_list())
                items.push_back(words_of(tables.surface(canon_token(it), Tier::Core)));
            return join(items, ", ");
        }
    }
    return "";
}

std::string render_prose(const std::vector<SemanticAtom>& atoms, const CodecTables& tables) {
    // one clause per atom, grouped by type
    static const AtomType group_order[] = {AtomType::Goal,      AtomType::Entity,   AtomType::Constraint,
                                           AtomType::Decision,  AtomType::Preference, AtomType::Procedure,
                                           AtomType::Output,    AtomType::Safety};
    std::vector<std::string> clauses;
    for (AtomType t : group_order) {
        for (const auto& a : atoms) {
            if (a.type != t) continue;
            std::string subj = words_of(a.subject);
            std::string val = prose_value(a.value, tables);
            std::string clause;
            switch (a.predicate) {
                case Predicate::Equals:
                    clause = (a.type == AtomType::Goal) ? subj + ": " + val : "the " + subj + " is " + val;
                    break;
                case Predicate::Allowed:
                    clause = (a.value.is_boolean() && !a.value.as_boolean()) ? "no " + subj
                                                                             : subj + " allowed";
                    break;
                case Predicate::Required:
                    clause = "the " + subj + " must include " + val;
                    break;
                case Predicate::Preferred:
                    clause = "prefer " + val + " for " + subj;
                    break;
                case Predicate::Includes:
                    clause = subj + ": " + val;
                    break;
            }
            clauses.push_back(std::move(clause));
        }
    }
    if (clauses.empty()) return "";
    std::string out = join(clauses, "; ");
    out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
    return out + ".";
}

std::string render_canonical_json(const std::vector<SemanticAtom>& atoms) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& a : atoms) {
        nlohmann::ordered_json j;
        j["type"] = std::string(to_string(a.type));
        j["subject"] = a.subject;
        j["predicate"] = std::string(to_string(a.predicate));
        switch (a.value.kind()) {
            case ValueKind::Text: j["value"] = a.value.as_text(); break;
            case ValueKind::Boolean: j["value"] = a.value.as_boolean(); break;
            case ValueKind::Number: j["value"] = nlohmann::ordered_json::parse(a.value.number_lexeme()); break;
            case ValueKind::List: j["value"] = a.value.as_list(); break;
        }
        j["modality"] = std::string(to_string(a.modality));
        j["scope"] = std::string(to_string(a.scope));
        arr.push_back(std::move(j));
    }
    nlohmann::ordered_json root;
    root["atoms"] = std::move(arr);
    return root.dump();
}

}  // namespace

Result<RegimeRendering> render(const std::vector<SemanticAtom>& atoms, Regime regime,
                               const CodecTables& tables, const ProtocolDictionary* dictionary) {
    (void)dictionary;  // codes are already short; the dictionary aids decoding
    RegimeRendering out;
    out.regime = regime;
    out.decodable = regime_decodable(regime);

    if (regime == Regime::Prose || regime == Regime::CanonicalStructured) {
        for (const auto& a : atoms) {
            auto rep = validate_atom(a);
            if (!rep.ok()) return err("atom " + atom_label(a) + " fails validation: " + rep.to_string());
        }
        out.payload = regime == Regime::Prose ? render_prose(atoms, tables) : render_canonical_json(atoms);
        if (out.payload.empty()) return err("empty rendering (no atoms)");
        return out;
    }

    auto groups = collect_fields(atoms, tables, regime);
    if (!groups) return groups.error();
    Result<std::string> payload = err("unreachable");
    switch (regime) {
        case Regime::CclCore: payload = render_ccl(*groups, tables, /*core=*/true); break;
        case Regime::CclMin: payload = render_ccl(*groups, tables, /*core=*/false); break;
        case Regime::SzipAscii: payload = render_szip(*groups, tables, /*emoji=*/false); break;
        case Regime::SzipEmoji: payload = render_szip(*groups, tables, /*emoji=*/true); break;
        default: break;
    }
    if (!payload) return payload.error();
    out.payload = *payload;
    return out;
}

}  // namespace semzip
