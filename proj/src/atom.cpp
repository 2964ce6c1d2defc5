#include "semzip/atom.hpp"

namespace semzip {

std::string Value::serialize() const {
    switch (kind()) {
        case ValueKind::Text: return "text:" + as_text();
        case ValueKind::Boolean: return as_boolean() ? "bool:true" : "bool:false";
        case ValueKind::Number: return "num:" + number_lexeme();
        case ValueKind::List: return "list:" + join(as_list(), ",");
    }
    return "";
}

Result<Value> Value::parse(std::string_view wire) {
    auto colon = wire.find(':');
    if (colon == std::string_view::npos) return err("value missing tag (expected text:|bool:|num:|list:)");
    std::string_view tag = wire.substr(0, colon);
    std::string_view rest = wire.substr(colon + 1);
    if (tag == "text") return Value::text(std::string(rest));
    if (tag == "bool") {
        if (rest == "true") return Value::boolean(true);
        if (rest == "false") return Value::boolean(false);
        return err("bool value must be true or false");
    }
    if (tag == "num") {
        if (!parse_double(rest)) return err("unparseable number: " + std::string(rest));
        return Value::number(std::string(rest));
    }
    if (tag == "list") {
        if (rest.empty()) return Value::list({});
        auto items = split(rest, ',');
        for (const auto& it : items)
            if (it.empty()) return err("empty element in list value");
        return Value::list(std::move(items));
    }
    return err("unknown value tag: " + std::string(tag));
}

std::string Value::display() const {
    switch (kind()) {
        case ValueKind::Text: return as_text();
        case ValueKind::Boolean: return as_boolean() ? "true" : "false";
        case ValueKind::Number: return number_lexeme();
        case ValueKind::List: return join(as_list(), ",");
    }
    return "";
}

namespace {
constexpr std::string_view kAtomTypes[] = {"constraint", "goal", "entity", "preference",
                                           "decision", "procedure", "output", "safety"};
constexpr std::string_view kPredicates[] = {"equals", "allowed", "required", "preferred", "includes"};
constexpr std::string_view kModalities[] = {"must", "should", "may", "unknown"};
constexpr std::string_view kScopes[] = {"task", "output", "artifact", "trip", "code", "unknown"};
constexpr std::string_view kRisks[] = {"low", "medium", "high"};
constexpr std::string_view kRegimes[] = {"prose", "canonical_structured", "ccl_core",
                                         "ccl_min", "szip_ascii", "szip_emoji"};

template <typename E, std::size_t N>
std::optional<E> parse_enum(std::string_view s, const std::string_view (&names)[N]) {
    for (std::size_t i = 0; i < N; ++i)
        if (names[i] == s) return static_cast<E>(i);
    return std::nullopt;
}
}  // namespace

std::string_view to_string(AtomType t) { return kAtomTypes[static_cast<int>(t)]; }
std::string_view to_string(Predicate p) { return kPredicates[static_cast<int>(p)]; }
std::string_view to_string(Modality m) { return kModalities[static_cast<int>(m)]; }
std::string_view to_string(Scope s) { return kScopes[static_cast<int>(s)]; }
std::string_view to_string(Risk r) { return kRisks[static_cast<int>(r)]; }
std::string_view to_string(Regime r) { return kRegimes[static_cast<int>(r)]; }

std::optional<AtomType> parse_atom_type(std::string_view s) { return parse_enum<AtomType>(s, kAtomTypes); }
std::optional<Predicate> parse_predicate(std::string_view s) { return parse_enum<Predicate>(s, kPredicates); }
std::optional<Modality> parse_modality(std::string_view s) { return parse_enum<Modality>(s, kModalities); }
std::optional<Scope> parse_scope(std::string_view s) { return parse_enum<Scope>(s, kScopes); }
std::optional<Risk> parse_risk(std::string_view s) { return parse_enum<Risk>(s, kRisks); }
std::optional<Regime> parse_regime(std::string_view s) { return parse_enum<Regime>(s, kRegimes); }

const std::vector<Regime>& all_regimes() {
    static const std::vector<Regime> order = {Regime::Prose,   Regime::CanonicalStructured,
                                              Regime::CclCore, Regime::CclMin,
                                              Regime::SzipAscii, Regime::SzipEmoji};
    return order;
}

bool SemanticAtom::operator==(const SemanticAtom& o) const {
    return type == o.type && subject == o.subject && predicate == o.predicate && value == o.value &&
           modality == o.modality && scope == o.scope && evidence == o.evidence &&
           confidence == o.confidence && risk == o.risk;
}

bool CaseRecord::operator==(const CaseRecord& o) const {
    return case_id == o.case_id && note == o.note && original_text == o.original_text &&
           gold_atoms == o.gold_atoms && representations == o.representations;
}

bool is_snake_case(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_')) return false;
    return true;
}

std::string ValidationReport::to_string() const {
    std::string out;
    for (const auto& v : violations) {
        if (!out.empty()) out += "; ";
        out += v.field + ": " + v.rule;
    }
    return out;
}

ValidationReport validate_atom(const SemanticAtom& atom) {
    ValidationReport rep;
    if (!is_snake_case(atom.subject))
        rep.violations.push_back({"subject", "must be nonempty snake_case ([a-z0-9_])"});
    if (atom.confidence && (*atom.confidence < 0.0 || *atom.confidence > 1.0))
        rep.violations.push_back({"confidence", "must lie in [0,1]"});
    if (atom.value.is_list()) {
        for (const auto& item : atom.value.as_list())
            if (item.empty()) rep.violations.push_back({"value", "list elements must be nonempty"});
    }
    return rep;
}

ValidationReport validate_gold_atom(const GoldAtom& gold) {
    ValidationReport rep = validate_atom(gold.atom);
    if (gold.criticality < 1 || gold.criticality > 5)
        rep.violations.push_back({"criticality", "must be an integer in 1..5"});
    return rep;
}

ValidationReport validate_case(const CaseRecord& c) {
    ValidationReport rep;
    if (c.case_id.empty() || !is_snake_case(c.case_id))
        rep.violations.push_back({"case_id", "must be nonempty snake_case"});
    if (c.original_text.empty())
        rep.violations.push_back({"original", "original text must be nonempty"});
    bool any_critical = false;
    for (std::size_t i = 0; i < c.gold_atoms.size(); ++i) {
        auto sub = validate_gold_atom(c.gold_atoms[i]);
        for (auto& v : sub.violations)
            rep.violations.push_back({"gold_atom[" + std::to_string(i) + "]." + v.field, v.rule});
        if (c.gold_atoms[i].is_critical) any_critical = true;
    }
    if (c.gold_atoms.empty())
        rep.violations.push_back({"gold_atoms", "case must carry at least one gold atom"});
    else if (!any_critical)
        rep.violations.push_back({"gold_atoms", "at least one gold atom must be flagged critical"});
    for (const auto& [regime, repr] : c.representations) {
        if (repr.payload.empty())
            rep.violations.push_back({std::string("representation.") + std::string(to_string(regime)),
                                      "payload must be nonempty"});
        if (repr.regime != regime)
            rep.violations.push_back({std::string("representation.") + std::string(to_string(regime)),
                                      "regime tag mismatch with map key"});
    }
    return rep;
}

}  // namespace semzip
