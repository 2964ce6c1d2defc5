#include "semzip/packet.hpp"

#include <algorithm>
#include <map>

#include "semzip/normalize.hpp"

namespace semzip {

namespace {

const AliasTable kEmptyAliases;

bool subject_has_keyword(const std::string& subject, const std::set<std::string>& keywords) {
    if (keywords.count(subject)) return true;
    for (const auto& word : split(subject, '_'))
        if (keywords.count(word)) return true;
    return false;
}

}  // namespace

bool is_numeric_bearing(const Value& v) {
    if (v.is_number()) return true;
    if (!v.is_text()) return false;
    const std::string& t = v.as_text();
    if (t.empty() || t[0] < '0' || t[0] > '9') return false;
    std::size_t i = 0;
    while (i < t.size() && t[i] >= '0' && t[i] <= '9') ++i;
    if (i < t.size() && t[i] == '.') {
        ++i;
        std::size_t frac = i;
        while (i < t.size() && t[i] >= '0' && t[i] <= '9') ++i;
        if (i == frac) return false;
    }
    if (i == t.size()) return true;
    if (t[i] != '_') return false;
    return i + 1 < t.size();  // digits + _unit suffix, e.g. 1200_EUR
}

Result<PacketPolicy> PacketPolicy::load(const std::string& path, const CodecTables* tables,
                                        const ProtocolDictionary* dictionary) {
    auto text = read_file(path);
    if (!text) return text.error();
    auto lines = split(*text, '\n');
    if (lines.empty() || trim(lines[0]) != "semzip-packet/1")
        return err(path + ": missing version header semzip-packet/1", 1);

    PacketPolicy p;
    if (tables)
        for (const auto& f : tables->fields()) p.known_subjects.insert(f.subject);
    if (dictionary)
        for (const auto& [code, expansion] : dictionary->entries) {
            std::string subj = expansion.rfind("avoid_", 0) == 0 ? expansion.substr(6) : expansion;
            p.known_subjects.insert(subj);
        }

    enum class Section { None, Protected, Predictable } section = Section::None;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        auto line = trim(lines[i]);
        if (line.empty() || line.front() == '#') continue;
        if (line == "[protected_subjects]") { section = Section::Protected; continue; }
        if (line == "[predictable_subjects]") { section = Section::Predictable; continue; }
        if (section == Section::None)
            return err(path + ": entry before any section header", static_cast<int>(i) + 1);
        if (section == Section::Protected)
            p.protected_keywords.insert(std::string(line));
        else
            p.known_subjects.insert(std::string(line));
    }
    return p;
}

PacketPolicy PacketPolicy::from_tables(const CodecTables& tables) {
    PacketPolicy p;
    // seeded from the PROTECTED channel description: safety boundaries,
    // exact numbers, legal/medical facts, private data
    for (const char* k : {"allergy", "medication", "diagnosis", "medical", "legal", "contract",
                          "visa", "passport", "insurance", "privacy", "private", "password",
                          "api_key", "ssn", "budget_max", "deadline", "emergency"})
        p.protected_keywords.insert(k);
    for (const auto& f : tables.fields()) p.known_subjects.insert(f.subject);
    return p;
}

ChannelDecision classify(const SemanticAtom& atom, int atom_index, const PacketPolicy& policy) {
    ChannelDecision d;
    d.atom_index = atom_index;

    Value folded = normalize_value(atom.value, kEmptyAliases);

    // protected rules, evaluated first
    if (atom.type == AtomType::Safety) d.triggered_rules.push_back("safety_type");
    if (atom.risk && *atom.risk == Risk::High) d.triggered_rules.push_back("high_risk");
    if (is_numeric_bearing(atom.value)) d.triggered_rules.push_back("numeric_value");
    if (folded.is_boolean() && !folded.as_boolean() && atom.predicate == Predicate::Allowed)
        d.triggered_rules.push_back("negation");
    if (subject_has_keyword(atom.subject, policy.protected_keywords))
        d.triggered_rules.push_back("privacy_keyword");
    if (atom.modality == Modality::Must && atom.type == AtomType::Constraint)
        d.triggered_rules.push_back("hard_constraint");
    if (atom.evidence && !atom.evidence->empty()) d.triggered_rules.push_back("source_grounded");
    if (!policy.known_subjects.count(atom.subject)) d.triggered_rules.push_back("rare_subject");
    if (!d.triggered_rules.empty()) {
        d.channel = Channel::Protected;
        return d;
    }

    // lossy rules
    if (atom.type == AtomType::Preference && (!atom.risk || *atom.risk != Risk::High))
        d.triggered_rules.push_back("low_risk_preference");
    if (atom.modality == Modality::Should || atom.modality == Modality::May)
        d.triggered_rules.push_back("soft_modality");
    if ((atom.type == AtomType::Goal || atom.type == AtomType::Entity ||
         atom.type == AtomType::Decision || atom.type == AtomType::Preference) &&
        atom.modality != Modality::Unknown && policy.known_subjects.count(atom.subject))
        d.triggered_rules.push_back("predictable_default");
    if (!d.triggered_rules.empty()) {
        d.channel = Channel::Lossy;
        return d;
    }

    d.channel = Channel::Protected;
    d.ambiguous = true;  // neither rule set claimed it; default to protected storage
    return d;
}

namespace {

Result<std::string> safe_value_text(const SemanticAtom& a) {
    std::string v;
    switch (a.value.kind()) {
        case ValueKind::Text: v = a.value.as_text(); break;
        case ValueKind::Boolean: v = a.value.as_boolean() ? "true" : "false"; break;
        case ValueKind::Number: v = a.value.number_lexeme(); break;
        case ValueKind::List: v = join(a.value.as_list(), ","); break;
    }
    for (char c : v)
        if (c == ';' || c == '{' || c == '}' || c == '\n' || c == ':')
            return err("protected atom '" + a.subject +
                       "' has a value not expressible in the @SAFE grammar: " + v);
    if (v.empty()) return err("protected atom '" + a.subject + "' has an empty value");
    return v;
}

}  // namespace

Result<HybridPacket> build_packet(const std::vector<SemanticAtom>& atoms, const PacketPolicy& policy,
                                  const CodecTables& tables, const ProtocolDictionary* dictionary) {
    HybridPacket packet;
    std::vector<int> protected_idx;
    std::vector<int> lossy_idx;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        auto rep = validate_atom(atoms[i]);
        if (!rep.ok())
            return err("atom '" + atoms[i].subject + "' fails validation: " + rep.to_string());
        auto d = classify(atoms[i], static_cast<int>(i), policy);
        packet.decisions.push_back(d);
        (d.channel == Channel::Protected ? protected_idx : lossy_idx).push_back(static_cast<int>(i));
    }

    // Lossy atoms the szip grammar cannot carry demote to protected; the
    // reverse direction never happens.
    std::vector<SemanticAtom> lossy_atoms;
    for (int i : lossy_idx) lossy_atoms.push_back(atoms[static_cast<std::size_t>(i)]);
    std::string szip_payload;
    if (!lossy_atoms.empty()) {
        auto rendering = render(lossy_atoms, Regime::SzipAscii, tables, dictionary);
        if (rendering) {
            szip_payload = rendering->payload;
        } else {
            std::vector<SemanticAtom> kept;
            std::vector<int> kept_idx;
            for (std::size_t k = 0; k < lossy_atoms.size(); ++k) {
                auto solo = render({lossy_atoms[k]}, Regime::SzipAscii, tables, dictionary);
                if (solo.ok()) {
                    kept.push_back(lossy_atoms[k]);
                    kept_idx.push_back(lossy_idx[k]);
                } else {
                    int idx = lossy_idx[k];
                    packet.decisions[static_cast<std::size_t>(idx)].channel = Channel::Protected;
                    packet.decisions[static_cast<std::size_t>(idx)].triggered_rules.push_back(
                        "szip_inexpressible");
                    protected_idx.push_back(idx);
                }
            }
            lossy_idx = kept_idx;
            if (!kept.empty()) {
                auto retry = render(kept, Regime::SzipAscii, tables, dictionary);
                if (!retry) return err("szip rendering failed after demotion: " + retry.error().message);
                szip_payload = retry->payload;
            }
        }
    }

    std::sort(protected_idx.begin(), protected_idx.end());
    std::map<std::string, std::string> entries;  // deterministic subject order
    for (int i : protected_idx) {
        const SemanticAtom& a = atoms[static_cast<std::size_t>(i)];
        auto v = safe_value_text(a);
        if (!v) return v.error();
        auto [it, inserted] = entries.emplace(a.subject, *v);
        if (!inserted)
            return err("two protected atoms share subject '" + a.subject +
                       "'; not expressible in the @SAFE grammar");
    }
    std::string safe = "@SAFE{";
    bool first = true;
    for (const auto& [s, v] : entries) {
        if (!first) safe += "; ";
        safe += s + ":" + v;
        first = false;
    }
    safe += "}";
    packet.safe_block = safe;
    packet.szip_block = "@SZIP{" + szip_payload + "}";
    return packet;
}

Result<ParsedPacket> parse_packet(const std::string& text, const PacketPolicy& policy) {
    auto find_block = [&](const std::string& marker) -> Result<std::optional<std::string>> {
        auto start = text.find(marker);
        if (start == std::string::npos) return std::optional<std::string>{};
        if (text.find(marker, start + 1) != std::string::npos)
            return err("more than one " + marker.substr(0, marker.size() - 1) + " block");
        auto open = start + marker.size() - 1;
        auto close = text.find('}', open);
        if (close == std::string::npos) return err("unbalanced braces in " + marker + "...} block");
        return std::optional<std::string>(text.substr(open + 1, close - open - 1));
    };

    auto safe = find_block("@SAFE{");
    if (!safe) return safe.error();
    auto szip = find_block("@SZIP{");
    if (!szip) return szip.error();

    ParsedPacket out;
    if (szip->has_value()) out.lossy_payload = **szip;

    if (safe->has_value()) {
        std::set<std::string> seen;
        for (const auto& raw : split(**safe, ';')) {
            auto entry = trim(raw);
            if (entry.empty()) continue;
            auto colon = entry.find(':');
            if (colon == std::string_view::npos)
                return err("@SAFE entry missing ':': " + std::string(entry));
            std::string subject(trim(entry.substr(0, colon)));
            std::string value(trim(entry.substr(colon + 1)));
            if (!is_snake_case(subject)) return err("@SAFE subject is not snake_case: " + subject);
            if (value.empty()) return err("@SAFE entry has empty value: " + subject);
            if (!seen.insert(subject).second) return err("duplicate subject in @SAFE: " + subject);

            SemanticAtom a;
            a.subject = subject;
            a.modality = Modality::Must;  // the protected channel is exact by definition
            a.scope = Scope::Unknown;
            if (value == "true" || value == "false") {
                a.type = AtomType::Constraint;
                a.predicate = Predicate::Allowed;
                a.value = Value::boolean(value == "true");
            } else if (subject_has_keyword(subject, policy.protected_keywords) &&
                       !is_numeric_bearing(Value::text(value))) {
                a.type = AtomType::Safety;
                a.predicate = Predicate::Equals;
                a.risk = Risk::High;
                a.value = value.find(',') != std::string::npos ? Value::list(split(value, ','))
                                                               : Value::text(value);
            } else {
                a.type = AtomType::Constraint;
                a.predicate = Predicate::Equals;
                if (parse_double(value))
                    a.value = Value::number(value);
                else
                    a.value = value.find(',') != std::string::npos ? Value::list(split(value, ','))
                                                                   : Value::text(value);
            }
            out.protected_atoms.push_back(std::move(a));
        }
    }
    return out;
}

}  // namespace semzip
