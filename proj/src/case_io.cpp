#include "semzip/case_io.hpp"

#include <set>

#include "semzip/sha256.hpp"

namespace semzip {

namespace {

void append_block(std::string& out, const std::string& text) {
    for (const auto& line : split(text, '\n')) {
        if (line.empty())
            out += "|\n";
        else
            out += "| " + line + "\n";
    }
}

}  // namespace

std::string serialize_gold_atom(const GoldAtom& g) {
    const SemanticAtom& a = g.atom;
    std::string out = "gold_atom:";
    out += " type=" + std::string(to_string(a.type));
    out += " subject=" + quote_if_needed(a.subject);
    out += " predicate=" + std::string(to_string(a.predicate));
    out += " value=" + quote_if_needed(a.value.serialize());
    out += " modality=" + std::string(to_string(a.modality));
    out += " scope=" + std::string(to_string(a.scope));
    if (a.evidence) out += " evidence=" + quote_if_needed(*a.evidence);
    if (a.confidence) out += " confidence=" + format_double(*a.confidence);
    if (a.risk) out += " risk=" + std::string(to_string(*a.risk));
    out += " criticality=" + std::to_string(g.criticality);
    out += std::string(" critical=") + (g.is_critical ? "yes" : "no");
    return out;
}

Result<GoldAtom> parse_gold_atom_line(std::string_view line) {
    auto toks = split_quoted(line);
    if (!toks) return toks.error();
    GoldAtom g;
    bool have_criticality = false;
    std::set<std::string> seen;
    for (const auto& tok : *toks) {
        auto eq = tok.find('=');
        if (eq == std::string::npos) return err("expected key=value, got: " + tok);
        std::string key = tok.substr(0, eq);
        std::string val = tok.substr(eq + 1);
        if (!seen.insert(key).second) return err("duplicate field: " + key);
        if (key == "type") {
            auto t = parse_atom_type(val);
            if (!t) return err("unknown atom type: " + val);
            g.atom.type = *t;
        } else if (key == "subject") {
            g.atom.subject = val;
        } else if (key == "predicate") {
            auto p = parse_predicate(val);
            if (!p) return err("unknown predicate: " + val);
            g.atom.predicate = *p;
        } else if (key == "value") {
            auto v = Value::parse(val);
            if (!v) return v.error();
            g.atom.value = *v;
        } else if (key == "modality") {
            auto m = parse_modality(val);
            if (!m) return err("unknown modality: " + val);
            g.atom.modality = *m;
        } else if (key == "scope") {
            auto s = parse_scope(val);
            if (!s) return err("unknown scope: " + val);
            g.atom.scope = *s;
        } else if (key == "evidence") {
            g.atom.evidence = val;
        } else if (key == "confidence") {
            auto d = parse_double(val);
            if (!d) return err("unparseable confidence: " + val);
            g.atom.confidence = *d;
        } else if (key == "risk") {
            auto r = parse_risk(val);
            if (!r) return err("unknown risk: " + val);
            g.atom.risk = *r;
        } else if (key == "criticality") {
            int c = 0;
            for (char ch : val) {
                if (ch < '0' || ch > '9') return err("criticality must be an integer: " + val);
                c = c * 10 + (ch - '0');
            }
            if (val.empty()) return err("criticality must be an integer");
            g.criticality = c;
            have_criticality = true;
        } else if (key == "critical") {
            if (val == "yes")
                g.is_critical = true;
            else if (val == "no")
                g.is_critical = false;
            else
                return err("critical must be yes or no: " + val);
        } else {
            return err("unknown gold_atom field: " + key);
        }
    }
    if (!seen.count("type") || !seen.count("subject") || !seen.count("predicate") ||
        !seen.count("value") || !seen.count("modality") || !seen.count("scope"))
        return err("gold_atom missing one of: type subject predicate value modality scope");
    if (!have_criticality) return err("gold_atom missing criticality (no default-missing weights)");
    auto rep = validate_gold_atom(g);
    if (!rep.ok()) return err("schema violation: " + rep.to_string());
    return g;
}

Result<std::string> canonical_serialize(const CaseRecord& c) {
    auto rep = validate_case(c);
    if (!rep.ok()) return err("case fails validation: " + rep.to_string());

    std::string out;
    out += std::string(kCaseFormatVersion) + "\n";
    out += "case_id: " + c.case_id + "\n";
    if (c.note) out += "note: " + *c.note + "\n";
    out += "original:\n";
    append_block(out, c.original_text);
    for (const auto& g : c.gold_atoms) out += serialize_gold_atom(g) + "\n";
    for (Regime r : all_regimes()) {
        auto it = c.representations.find(r);
        if (it == c.representations.end()) continue;
        out += "representation: regime=" + std::string(to_string(r));
        if (it->second.dictionary_id) out += " dictionary=" + quote_if_needed(*it->second.dictionary_id);
        out += "\n";
        append_block(out, it->second.payload);
    }
    return out;
}

namespace {

struct LineReader {
    std::vector<std::string> lines;
    std::size_t pos = 0;

    explicit LineReader(const std::string& doc) : lines(split(doc, '\n')) {
        // A trailing newline produces one empty trailing element; drop it so
        // "last line" logic is uniform.
        if (!lines.empty() && lines.back().empty()) lines.pop_back();
    }
    bool done() const { return pos >= lines.size(); }
    int lineno() const { return static_cast<int>(pos) + 1; }
    const std::string& peek() const { return lines[pos]; }
    const std::string& next() { return lines[pos++]; }
};

// Reads consecutive pipe lines into a text block.
Result<std::string> read_block(LineReader& r, int header_line) {
    std::vector<std::string> content;
    while (!r.done()) {
        const std::string& line = r.peek();
        if (line == "|") {
            content.emplace_back();
            r.next();
        } else if (line.size() >= 2 && line[0] == '|' && line[1] == ' ') {
            content.emplace_back(line.substr(2));
            r.next();
        } else if (!line.empty() && line[0] == '|') {
            return err("malformed block line (expected '| ' prefix)", r.lineno());
        } else {
            break;
        }
    }
    if (content.empty()) return err("empty text block", header_line);
    return join(content, "\n");
}

}  // namespace

Result<CaseRecord> parse_case(const std::string& document) {
    LineReader r(document);
    if (r.done()) return err("empty document", 1);
    if (trim(r.next()) != kCaseFormatVersion)
        return err("missing or unsupported version header (expected semzip-case/1)", 1);

    CaseRecord c;
    bool have_id = false;
    bool have_original = false;

    while (!r.done()) {
        int line_no = r.lineno();
        std::string line = r.next();
        if (trim(line).empty()) continue;

        if (line.rfind("case_id:", 0) == 0) {
            if (have_id) return err("duplicate case_id", line_no);
            c.case_id = std::string(trim(line.substr(8)));
            have_id = true;
        } else if (line.rfind("note:", 0) == 0) {
            c.note = std::string(trim(line.substr(5)));
        } else if (trim(line) == "original:") {
            if (have_original) return err("duplicate original block", line_no);
            auto block = read_block(r, line_no);
            if (!block) return block.error();
            c.original_text = *block;
            have_original = true;
        } else if (line.rfind("gold_atom:", 0) == 0) {
            auto g = parse_gold_atom_line(line.substr(10));
            if (!g) return err(g.error().message, line_no);
            c.gold_atoms.push_back(*g);
        } else if (line.rfind("representation:", 0) == 0) {
            auto toks = split_quoted(line.substr(15));
            if (!toks) return err(toks.error().message, line_no);
            Representation repr;
            bool have_regime = false;
            for (const auto& tok : *toks) {
                auto eq = tok.find('=');
                if (eq == std::string::npos) return err("expected key=value, got: " + tok, line_no);
                std::string key = tok.substr(0, eq);
                std::string val = tok.substr(eq + 1);
                if (key == "regime") {
                    auto reg = parse_regime(val);
                    if (!reg) return err("unknown regime tag: " + val, line_no);
                    repr.regime = *reg;
                    have_regime = true;
                } else if (key == "dictionary") {
                    repr.dictionary_id = val;
                } else {
                    return err("unknown representation field: " + key, line_no);
                }
            }
            if (!have_regime) return err("representation missing regime", line_no);
            auto block = read_block(r, line_no);
            if (!block) return block.error();
            repr.payload = *block;
            if (c.representations.count(repr.regime))
                return err("duplicate regime tag: " + std::string(to_string(repr.regime)), line_no);
            c.representations.emplace(repr.regime, std::move(repr));
        } else {
            return err("unrecognized line: " + line, line_no);
        }
    }

    if (!have_id) return err("document missing case_id");
    if (!have_original) return err("document missing original block");
    auto rep = validate_case(c);
    if (!rep.ok()) return err("schema violation: " + rep.to_string());
    return c;
}

Result<CaseSet> load_case_set(const std::string& dir) {
    auto index = read_file(dir + "/cases.index");
    if (!index) return index.error();

    CaseSet set;
    std::string all_bytes;
    std::set<std::string> seen;
    int line_no = 0;
    for (const auto& raw : split(*index, '\n')) {
        ++line_no;
        auto id = trim(raw);
        if (id.empty() || id.front() == '#') continue;
        if (!seen.insert(std::string(id)).second)
            return err("duplicate case_id in index: " + std::string(id), line_no);
        auto doc = read_file(dir + "/cases/" + std::string(id) + ".case");
        if (!doc) return doc.error();
        auto c = parse_case(*doc);
        if (!c) return err(std::string(id) + ".case: " + c.error().to_string());
        if (c->case_id != id)
            return err("case_id mismatch: index says " + std::string(id) + ", file says " + c->case_id);
        auto canon = canonical_serialize(*c);
        if (!canon) return canon.error();
        all_bytes += *canon;
        set.cases.push_back(std::move(*c));
    }
    if (set.cases.empty()) return err("case set is empty: " + dir);
    set.content_hash = sha256_hex(all_bytes);
    return set;
}

}  // namespace semzip
