#include <algorithm>

#include "semzip/codec.hpp"
#include "semzip/normalize.hpp"

namespace semzip {

using FieldSpec = CodecTables::FieldSpec;
using Domain = CodecTables::FieldSpec::Domain;
using Tier = CodecTables::Tier;

namespace {

struct ParseCtx {
    const CodecTables* tables;
    const ProtocolDictionary* dict;
    Tier tier;
};

// Value-token resolution order: dictionary expansion, code reverse map,
// normalization passthrough.
std::string resolve_token(std::string_view surface, const ParseCtx& ctx) {
    if (ctx.dict) {
        if (const std::string* e = ctx.dict->lookup(surface)) return *e;
    }
    if (auto c = ctx.tables->canonical_for_surface(surface, ctx.tier)) return *c;
    return normalize_text(surface);
}

Result<Value> parse_field_value(const FieldSpec& f, std::string_view raw, const ParseCtx& ctx) {
    switch (f.domain) {
        case Domain::Number: {
            std::string_view body = raw;
            if (!f.szip_suffix.empty() && body.size() > f.szip_suffix.size() &&
                body.substr(body.size() - f.szip_suffix.size()) == f.szip_suffix)
                body.remove_suffix(f.szip_suffix.size());
            if (!parse_double(body)) return err("field " + f.name + ": unparseable number '" + std::string(raw) + "'");
            return Value::number(std::string(body));
        }
        case Domain::Token: {
            auto tok = resolve_token(raw, ctx);
            if (tok.empty()) return err("field " + f.name + ": empty token value");
            return Value::text(tok);
        }
        case Domain::List: {
            std::vector<std::string> items;
            for (const auto& part : split_any(raw, ",+|")) {
                auto tok = resolve_token(part, ctx);
                if (!tok.empty()) items.push_back(std::move(tok));
            }
            if (items.empty()) return err("field " + f.name + ": empty list value");
            return Value::list(std::move(items));
        }
        case Domain::Flag:
            return Value::boolean(false);
    }
    return err("unreachable domain");
}

SemanticAtom atom_from_field(const FieldSpec& f, Value v) {
    SemanticAtom a;
    a.type = f.type;
    a.subject = f.subject;
    a.predicate = f.predicate;
    a.value = std::move(v);
    a.modality = f.modality;
    a.scope = f.scope;
    return a;
}

// AVOID / NO items and !codes: known codes take the field's shape,
// unknown ones become generic negations.
SemanticAtom negation_atom(std::string_view item, const ParseCtx& ctx, bool min_tier) {
    const FieldSpec* f = min_tier ? ctx.tables->field_by_min_item(item)
                                  : ctx.tables->field_by_core_item(item);
    if (!f) {
        // items may also name the subject directly
        auto subject = normalize_text(item);
        for (const auto& cand : ctx.tables->fields())
            if (cand.domain == Domain::Flag && cand.subject == subject) {
                f = &cand;
                break;
            }
        if (!f) {
            SemanticAtom a;
            a.type = AtomType::Constraint;
            a.subject = subject;
            a.predicate = Predicate::Allowed;
            a.value = Value::boolean(false);
            a.modality = Modality::Must;
            a.scope = Scope::Unknown;
            return a;
        }
    }
    return atom_from_field(*f, Value::boolean(false));
}

Result<std::pair<std::string, std::string>> split_key_value(std::string_view tok, char sep) {
    auto pos = tok.find(sep);
    if (pos == std::string_view::npos || pos == 0)
        return err("malformed segment '" + std::string(tok) + "' (expected KEY" + std::string(1, sep) + "VALUE)");
    return std::make_pair(std::string(tok.substr(0, pos)), std::string(tok.substr(pos + 1)));
}

Result<std::vector<SemanticAtom>> parse_ccl(const std::string& payload, const ParseCtx& ctx, bool core) {
    auto tokens = split_any(payload, " \t\r\n");
    const std::string_view header = core ? "@CCL/1" : "@C1";
    if (tokens.empty() || tokens[0] != header)
        return err(std::string(core ? "ccl_core" : "ccl_min") + " payload must begin with " +
                   std::string(header));

    std::vector<SemanticAtom> atoms;
    for (std::size_t i = 1; i < tokens.size(); ++i) {
        auto kv = split_key_value(tokens[i], '=');
        if (!kv) return kv.error();
        auto& [key, raw_val] = *kv;
        std::string val = raw_val;

        if ((core && key == "AVOID") || (!core && key == "NO")) {
            if (core) {
                if (val.size() < 2 || val.front() != '{' || val.back() != '}')
                    return err("unbalanced braces in " + key + " segment");
                val = val.substr(1, val.size() - 2);
            }
            for (const auto& item : split_any(val, ","))
                atoms.push_back(negation_atom(item, ctx, /*min_tier=*/!core));
            continue;
        }

        const FieldSpec* f = core ? ctx.tables->field_by_core_key(key) : ctx.tables->field_by_min_key(key);
        if (!f) return err("unknown segment tag: " + key);

        if (core && (f->domain == Domain::List || f->multi)) {
            if (val.size() < 2 || val.front() != '{' || val.back() != '}')
                return err("unbalanced braces in " + key + " segment");
            val = val.substr(1, val.size() - 2);
        } else if (core && !val.empty() && (val.front() == '{' || val.back() == '}')) {
            return err("unexpected braces in " + key + " segment");
        }

        if (f->multi) {
            for (const auto& item : split_any(val, ",")) {
                auto tok = resolve_token(item, ctx);
                if (tok.empty()) continue;
                atoms.push_back(atom_from_field(*f, Value::text(tok)));
            }
            continue;
        }
        auto v = parse_field_value(*f, val, ctx);
        if (!v) return v.error();
        atoms.push_back(atom_from_field(*f, std::move(*v)));
    }
    return atoms;
}

Result<std::vector<SemanticAtom>> parse_szip(const std::string& payload, ParseCtx ctx) {
    std::string body = payload;
    ProtocolDictionary inline_dict;

    // An inline @DICT header line is honored as the active dictionary.
    auto first_line_end = body.find('\n');
    if (body.rfind("@DICT/", 0) == 0) {
        // the dictionary may span continuation lines up to the first line
        // that introduces non-dictionary content; simplest rule: the block
        // ends at the first line not containing '=' after the header line
        auto lines = split(body, '\n');
        std::size_t dict_end = 1;
        while (dict_end < lines.size() && lines[dict_end].find('=') != std::string::npos &&
               lines[dict_end].find(':') == std::string::npos)
            ++dict_end;
        std::string dict_text = join({lines.begin(), lines.begin() + static_cast<std::ptrdiff_t>(dict_end)}, "\n");
        auto d = parse_dictionary(dict_text);
        if (!d) return d.error();
        inline_dict = std::move(*d);
        ctx.dict = &inline_dict;
        body = join({lines.begin() + static_cast<std::ptrdiff_t>(dict_end), lines.end()}, "\n");
    }
    (void)first_line_end;

    auto tokens = split_any(body, " \t\r\n");
    std::vector<SemanticAtom> atoms;
    std::string active_tag;
    bool expecting_slots = false;

    auto handle_slots = [&](std::string_view slots_text) -> Status {
        auto parts = split(std::string(slots_text), '/');
        for (std::size_t i = 0; i < parts.size(); ++i) {
            if (parts[i].empty() || parts[i] == "-") continue;
            const FieldSpec* f = ctx.tables->field_by_slot(active_tag, static_cast<int>(i));
            if (!f)
                return err("tag " + active_tag + " has no slot " + std::to_string(i) + " (value '" +
                           parts[i] + "')");
            auto v = parse_field_value(*f, parts[i], ctx);
            if (!v) return v.error();
            atoms.push_back(atom_from_field(*f, std::move(*v)));
        }
        return ok_status();
    };

    auto begin_tag = [&](const std::string& tag) -> Status {
        active_tag = tag;
        auto task = ctx.tables->task_for_tag(tag);
        if (!task) return err("unknown header tag: @" + tag);
        const FieldSpec* task_field = nullptr;
        for (const auto& f : ctx.tables->fields())
            if (f.szip_header) task_field = &f;
        if (!task_field) return err("grammar defines no header field");
        atoms.push_back(atom_from_field(*task_field, Value::text(*task)));
        return ok_status();
    };

    for (const auto& tok : tokens) {
        if (tok.empty()) continue;
        if (tok[0] == '@') {
            std::string tag = tok.substr(1);
            if (!ctx.tables->is_known_tag(tag)) return err("unknown segment tag: " + tok);
            if (auto s = begin_tag(tag); !s) return s.error();
            expecting_slots = true;
            continue;
        }
        if (tok[0] == '+') {
            if (active_tag.empty())
                return err("segment '" + tok + "' appears before any task header");
            const FieldSpec* f = ctx.tables->plus_field_for_tag(active_tag);
            if (!f) return err("tag " + active_tag + " defines no '+' field (segment '" + tok + "')");
            auto canonical = resolve_token(tok.substr(1), ctx);
            if (canonical.empty()) return err("empty '+' segment");
            atoms.push_back(atom_from_field(*f, Value::text(canonical)));
            expecting_slots = false;
            continue;
        }
        if (tok[0] == '!') {
            std::string code = tok.substr(1);
            if (code.empty()) return err("empty '!' segment");
            std::string subject;
            if (ctx.dict) {
                if (const std::string* e = ctx.dict->lookup(tok)) {
                    subject = e->rfind("avoid_", 0) == 0 ? e->substr(6) : *e;
                }
            }
            if (subject.empty()) {
                const FieldSpec* f = ctx.tables->field_by_bang(code);
                if (f) {
                    atoms.push_back(atom_from_field(*f, Value::boolean(false)));
                    expecting_slots = false;
                    continue;
                }
                subject = normalize_text(code);
            }
            bool found = false;
            for (const auto& cand : ctx.tables->fields())
                if (cand.domain == Domain::Flag && cand.subject == subject) {
                    atoms.push_back(atom_from_field(cand, Value::boolean(false)));
                    found = true;
                    break;
                }
            if (!found) {
                SemanticAtom a;
                a.type = AtomType::Constraint;
                a.subject = subject;
                a.predicate = Predicate::Allowed;
                a.value = Value::boolean(false);
                a.modality = Modality::Must;
                a.scope = Scope::Unknown;
                atoms.push_back(std::move(a));
            }
            expecting_slots = false;
            continue;
        }
        auto colon = tok.find(':');
        if (colon != std::string::npos && colon > 0) {
            std::string head = tok.substr(0, colon);
            std::string rest = tok.substr(colon + 1);
            if (ctx.tables->is_known_tag(head)) {
                if (auto s = begin_tag(head); !s) return s.error();
                expecting_slots = false;
                if (!rest.empty())
                    if (auto s = handle_slots(rest); !s) return s.error();
                continue;
            }
            const FieldSpec* f = ctx.tables->field_by_szip_key(head);
            if (!f) return err("unknown segment tag: " + head);
            if (rest.empty()) return err("segment " + head + ": empty value");
            if (f->multi) {
                for (const auto& item : split_any(rest, ",+|")) {
                    auto canonical = resolve_token(item, ctx);
                    if (!canonical.empty()) atoms.push_back(atom_from_field(*f, Value::text(canonical)));
                }
            } else {
                auto v = parse_field_value(*f, rest, ctx);
                if (!v) return v.error();
                atoms.push_back(atom_from_field(*f, std::move(*v)));
            }
            expecting_slots = false;
            continue;
        }
        if (expecting_slots && tok.find('/') != std::string::npos) {
            expecting_slots = false;
            if (auto s = handle_slots(tok); !s) return s.error();
            continue;
        }
        if (expecting_slots) {
            // single bare slot value after @TAG
            expecting_slots = false;
            if (auto s = handle_slots(tok); !s) return s.error();
            continue;
        }
        return err("unknown segment tag: " + tok);
    }
    return atoms;
}

}  // namespace

Result<std::vector<SemanticAtom>> parse_symbolic(const std::string& payload, Regime regime,
                                                 const CodecTables& tables,
                                                 const ProtocolDictionary* dictionary) {
    if (!regime_decodable(regime))
        return err("regime " + std::string(to_string(regime)) + " has no deterministic parser");
    ParseCtx ctx{&tables, dictionary,
                 regime == Regime::CclCore ? Tier::Core
                                           : regime == Regime::CclMin ? Tier::Min : Tier::Szip};
    if (regime == Regime::SzipAscii) return parse_szip(payload, ctx);
    return parse_ccl(payload, ctx, regime == Regime::CclCore);
}

}  // namespace semzip
