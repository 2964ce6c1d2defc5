#pragma once

#include <set>
#include <string>
#include <vector>

#include "semzip/codec.hpp"

namespace semzip {

enum class Channel { Protected, Lossy };

struct ChannelDecision {
    int atom_index = 0;
    Channel channel = Channel::Protected;
    std::vector<std::string> triggered_rules;
    bool ambiguous = false;  // implies protected
};

// Classification policy: the privacy/legal/medical keyword list is a
// versioned data file; known subjects (grammar fields plus the
// [predictable_subjects] section plus active-dictionary expansions)
// bound the "rare subject" proxy.
struct PacketPolicy {
    std::set<std::string> protected_keywords;
    std::set<std::string> known_subjects;

    static Result<PacketPolicy> load(const std::string& path, const CodecTables* tables,
                                     const ProtocolDictionary* dictionary = nullptr);
    static PacketPolicy from_tables(const CodecTables& tables);
};

// Protected wins over lossy; anything neither rule set claims defaults to
// protected (ambiguous). Misclassification is asymmetric by construction:
// the dangerous direction (protected content in the lossy channel) is
// unreachable because protected rules are evaluated first.
ChannelDecision classify(const SemanticAtom& atom, int atom_index, const PacketPolicy& policy);

// True for number values and digit-led text with an optional _unit suffix
// (the @SAFE exactness convention, e.g. 1200_EUR). Plain code shorthands
// like "4d" are not numeric-bearing.
bool is_numeric_bearing(const Value& v);

struct HybridPacket {
    std::string safe_block;  // @SAFE{subject:value; ...}, sorted by subject
    std::string szip_block;  // @SZIP{...} wrapping a szip_ascii rendering
    std::vector<ChannelDecision> decisions;

    std::string wire_text() const { return safe_block + "\n" + szip_block; }
};

// Lossy atoms that the szip grammar cannot express are demoted to the
// protected channel (rule "szip_inexpressible") rather than dropped; a
// protected atom that the @SAFE grammar cannot carry is a hard error.
Result<HybridPacket> build_packet(const std::vector<SemanticAtom>& atoms, const PacketPolicy& policy,
                                  const CodecTables& tables,
                                  const ProtocolDictionary* dictionary = nullptr);

struct ParsedPacket {
    std::vector<SemanticAtom> protected_atoms;
    std::string lossy_payload;  // inner @SZIP text, decoding is the caller's job
};

// @SAFE entries reconstruct atoms losslessly in subject and verbatim
// value text; type/predicate/modality are inferred by documented rules
// (boolean false -> negation constraint, keyword subject -> safety atom,
// numeric-bearing -> exact constraint, else equals constraint, modality
// must).
Result<ParsedPacket> parse_packet(const std::string& text, const PacketPolicy& policy);

}  // namespace semzip
