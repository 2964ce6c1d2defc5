#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "semzip/value.hpp"

namespace semzip {

// Enumerations are the decoder schema's closed vocabularies. Gold atoms
// outside them are validation errors, not silent extensions, so gold and
// decoded atoms live in the same matchable space.

enum class AtomType { Constraint, Goal, Entity, Preference, Decision, Procedure, Output, Safety };
enum class Predicate { Equals, Allowed, Required, Preferred, Includes };
enum class Modality { Must, Should, May, Unknown };
enum class Scope { Task, Output, Artifact, Trip, Code, Unknown };
enum class Risk { Low, Medium, High };

std::string_view to_string(AtomType t);
std::string_view to_string(Predicate p);
std::string_view to_string(Modality m);
std::string_view to_string(Scope s);
std::string_view to_string(Risk r);

std::optional<AtomType> parse_atom_type(std::string_view s);
std::optional<Predicate> parse_predicate(std::string_view s);
std::optional<Modality> parse_modality(std::string_view s);
std::optional<Scope> parse_scope(std::string_view s);
std::optional<Risk> parse_risk(std::string_view s);

// One typed commitment: (type, subject, predicate, value, modality,
// scope, evidence, confidence, risk). Evidence/confidence/risk are
// carried but never scored; the packetizer consumes risk and evidence.
struct SemanticAtom {
    AtomType type = AtomType::Constraint;
    std::string subject;
    Predicate predicate = Predicate::Equals;
    Value value;
    Modality modality = Modality::Unknown;
    Scope scope = Scope::Unknown;
    std::optional<std::string> evidence;
    std::optional<double> confidence;
    std::optional<Risk> risk;

    bool operator==(const SemanticAtom& o) const;
};

struct GoldAtom {
    SemanticAtom atom;
    int criticality = 1;  // author-assigned weight, 1..5
    bool is_critical = false;

    bool operator==(const GoldAtom& o) const {
        return atom == o.atom && criticality == o.criticality && is_critical == o.is_critical;
    }
};

enum class Regime { Prose, CanonicalStructured, CclCore, CclMin, SzipAscii, SzipEmoji };

constexpr int kRegimeCount = 6;
// Fixed regime order used everywhere output order matters.
const std::vector<Regime>& all_regimes();
std::string_view to_string(Regime r);
std::optional<Regime> parse_regime(std::string_view s);

struct Representation {
    Regime regime = Regime::Prose;
    std::string payload;
    std::optional<std::string> dictionary_id;

    bool operator==(const Representation& o) const {
        return regime == o.regime && payload == o.payload && dictionary_id == o.dictionary_id;
    }
};

struct CaseRecord {
    std::string case_id;
    std::optional<std::string> note;
    std::string original_text;
    std::vector<GoldAtom> gold_atoms;
    std::map<Regime, Representation> representations;

    bool operator==(const CaseRecord& o) const;
};

// ---- validation ----

struct Violation {
    std::string field;
    std::string rule;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
    std::string to_string() const;
};

// Total: any input yields ok or a finite violation list.
ValidationReport validate_atom(const SemanticAtom& atom);
ValidationReport validate_gold_atom(const GoldAtom& gold);
ValidationReport validate_case(const CaseRecord& c);

// True iff nonempty and only [a-z0-9_].
bool is_snake_case(std::string_view s);

}  // namespace semzip
