#include "semzip/match.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace semzip {

bool SimilarityWeights::valid() const {
    if (subject < 0 || predicate < 0 || value < 0 || type < 0 || scope < 0) return false;
    return std::abs(subject + predicate + value + type + scope - 1.0) <= 1e-9;
}

SimilarityWeights SimilarityWeights::scope_inclusive() {
    // Redistributes a tenth of the mass to scope; kept behind an explicit
    // override because the default formula omits scope.
    return SimilarityWeights{0.35, 0.20, 0.25, 0.10, 0.10};
}

const std::vector<double>& default_threshold_set() {
    static const std::vector<double> t = {0.65, 0.72, 0.80};
    return t;
}

namespace {

std::vector<std::string> value_element_set(const Value& v) {
    std::vector<std::string> out;
    switch (v.kind()) {
        case ValueKind::List: out = v.as_list(); break;
        case ValueKind::Text: out.push_back(v.as_text()); break;
        case ValueKind::Boolean: out.push_back(v.as_boolean() ? "true" : "false"); break;
        case ValueKind::Number: out.push_back(v.number_lexeme()); break;
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

double value_score(const Value& a, const Value& b) {
    if (a.is_list() || b.is_list()) {
        auto sa = value_element_set(a);
        auto sb = value_element_set(b);
        if (sa.empty() && sb.empty()) return 1.0;
        std::vector<std::string> inter;
        std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(inter));
        std::size_t uni = sa.size() + sb.size() - inter.size();
        return uni == 0 ? 1.0 : static_cast<double>(inter.size()) / static_cast<double>(uni);
    }
    return normalized_value_equal(a, b) ? 1.0 : 0.0;
}

}  // namespace

double similarity(const NormalizedAtom& g, const NormalizedAtom& d, const SimilarityWeights& w) {
    double s = 0.0;
    if (g.subject == d.subject) s += w.subject;
    if (g.predicate == d.predicate) s += w.predicate;
    s += w.value * value_score(g.value, d.value);
    if (g.type == d.type) s += w.type;
    if (w.scope > 0 && g.scope == d.scope) s += w.scope;
    return s;
}

Result<MatchReport> match_atoms(const std::vector<GoldAtom>& gold,
                                const std::vector<SemanticAtom>& decoded, double threshold,
                                const SimilarityWeights& w, const AliasTable& table) {
    if (!(threshold > 0.0 && threshold <= 1.0)) return err("threshold must lie in (0,1]");
    if (!w.valid()) return err("similarity weights must be nonnegative and sum to 1");
    if (gold.empty()) return err("gold atom set is empty");

    std::vector<NormalizedAtom> ng, nd;
    ng.reserve(gold.size());
    nd.reserve(decoded.size());
    for (const auto& g : gold) ng.push_back(normalize_atom(g.atom, table));
    for (const auto& d : decoded) nd.push_back(normalize_atom(d, table));

    // Descending criticality protects high-weight atoms first; index order
    // breaks ties so the procedure is deterministic and oracle-checkable.
    std::vector<int> order(gold.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return gold[a].criticality > gold[b].criticality; });

    MatchReport report;
    report.threshold = threshold;
    std::vector<bool> decoded_used(decoded.size(), false);
    std::vector<bool> gold_matched(gold.size(), false);

    for (int gi : order) {
        int best = -1;
        double best_sim = 0.0;
        for (std::size_t di = 0; di < nd.size(); ++di) {
            if (decoded_used[di]) continue;
            double s = similarity(ng[gi], nd[di], w);
            if (s >= threshold && s > best_sim) {
                best_sim = s;
                best = static_cast<int>(di);
            }
        }
        if (best >= 0) {
            decoded_used[best] = true;
            gold_matched[gi] = true;
            report.pairs.push_back({gi, best, best_sim});
        }
    }
    std::sort(report.pairs.begin(), report.pairs.end(),
              [](const MatchedPair& a, const MatchedPair& b) { return a.gold_index < b.gold_index; });

    for (std::size_t i = 0; i < gold.size(); ++i)
        if (!gold_matched[i]) report.unmatched_gold.push_back(static_cast<int>(i));
    for (std::size_t i = 0; i < decoded.size(); ++i)
        if (!decoded_used[i]) report.unmatched_decoded.push_back(static_cast<int>(i));

    std::vector<int> crit_weights;
    std::vector<bool> crit_matched;
    int matched_critical = 0;
    for (std::size_t i = 0; i < gold.size(); ++i) {
        if (!gold[i].is_critical) continue;
        crit_weights.push_back(gold[i].criticality);
        crit_matched.push_back(gold_matched[i]);
        if (gold_matched[i]) ++matched_critical;
    }
    auto car = compute_car(matched_critical, static_cast<int>(crit_weights.size()));
    if (!car) return car.error();
    auto war = compute_war(crit_weights, crit_matched);
    if (!war) return war.error();
    report.car = *car;
    report.war = *war;
    auto prec = compute_precision(matched_critical, static_cast<int>(decoded.size()));
    report.precision = prec.value;
    report.precision_vacuous = prec.vacuous;
    report.recall_all_gold = static_cast<double>(report.pairs.size()) / static_cast<double>(gold.size());
    return report;
}

Result<double> compute_car(int matched_critical, int critical_total) {
    if (critical_total < 1) return err("critical atom total must be >= 1");
    return static_cast<double>(matched_critical) / static_cast<double>(critical_total);
}

Result<double> compute_war(const std::vector<int>& critical_weights,
                           const std::vector<bool>& critical_matched) {
    if (critical_weights.empty()) return err("critical atom total must be >= 1");
    if (critical_weights.size() != critical_matched.size())
        return err("weights/matched flag lists differ in length");
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < critical_weights.size(); ++i) {
        den += critical_weights[i];
        if (critical_matched[i]) num += critical_weights[i];
    }
    return num / den;
}

PrecisionResult compute_precision(int matched_critical, int decoded_count) {
    if (decoded_count == 0) return {1.0, true};  // vacuously no incorrect atoms
    return {static_cast<double>(matched_critical) / static_cast<double>(decoded_count), false};
}

Result<std::vector<MatchReport>> sensitivity_sweep(const std::vector<GoldAtom>& gold,
                                                   const std::vector<SemanticAtom>& decoded,
                                                   const std::vector<double>& thresholds,
                                                   const SimilarityWeights& w,
                                                   const AliasTable& table) {
    if (thresholds.empty()) return err("threshold list must be nonempty");
    std::vector<MatchReport> out;
    out.reserve(thresholds.size());
    for (double t : thresholds) {
        auto r = match_atoms(gold, decoded, t, w, table);
        if (!r) return r.error();
        out.push_back(std::move(*r));
    }
    return out;
}

bool MatchReport::operator==(const MatchReport& o) const {
    return threshold == o.threshold && pairs == o.pairs && unmatched_gold == o.unmatched_gold &&
           unmatched_decoded == o.unmatched_decoded && car == o.car && war == o.war &&
           precision == o.precision && precision_vacuous == o.precision_vacuous &&
           recall_all_gold == o.recall_all_gold;
}

namespace {
std::string join_ints(const std::vector<int>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ' ';
        out += std::to_string(v[i]);
    }
    return out;
}

Result<std::vector<int>> parse_ints(std::string_view s) {
    std::vector<int> out;
    for (const auto& tok : split_any(s, " ")) {
        int v = 0;
        for (char c : tok) {
            if (c < '0' || c > '9') return err("expected integer list, got: " + tok);
            v = v * 10 + (c - '0');
        }
        out.push_back(v);
    }
    return out;
}
}  // namespace

std::string MatchReport::serialize() const {
    std::string out = "semzip-score/1\n";
    out += "threshold: " + format_double(threshold) + "\n";
    out += "car: " + format_double(car) + "\n";
    out += "war: " + format_double(war) + "\n";
    out += "precision: " + format_double(precision) + "\n";
    out += std::string("precision_vacuous: ") + (precision_vacuous ? "yes" : "no") + "\n";
    out += "recall_all_gold: " + format_double(recall_all_gold) + "\n";
    for (const auto& p : pairs)
        out += "pair: gold=" + std::to_string(p.gold_index) + " decoded=" + std::to_string(p.decoded_index) +
               " similarity=" + format_double(p.similarity) + "\n";
    out += "unmatched_gold: " + join_ints(unmatched_gold) + "\n";
    out += "unmatched_decoded: " + join_ints(unmatched_decoded) + "\n";
    return out;
}

Result<MatchReport> MatchReport::parse(const std::string& text) {
    auto lines = split(text, '\n');
    if (lines.empty() || trim(lines[0]) != "semzip-score/1")
        return err("missing version header (expected semzip-score/1)", 1);
    MatchReport r;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        auto line = trim(lines[i]);
        int line_no = static_cast<int>(i) + 1;
        if (line.empty()) continue;
        auto colon = line.find(':');
        if (colon == std::string_view::npos) return err("expected key: value", line_no);
        std::string key(trim(line.substr(0, colon)));
        std::string val(trim(line.substr(colon + 1)));
        auto need_double = [&](double& slot) -> Status {
            auto d = parse_double(val);
            if (!d) return err("unparseable number: " + val, line_no);
            slot = *d;
            return ok_status();
        };
        if (key == "threshold") {
            if (auto s = need_double(r.threshold); !s) return s.error();
        } else if (key == "car") {
            if (auto s = need_double(r.car); !s) return s.error();
        } else if (key == "war") {
            if (auto s = need_double(r.war); !s) return s.error();
        } else if (key == "precision") {
            if (auto s = need_double(r.precision); !s) return s.error();
        } else if (key == "precision_vacuous") {
            r.precision_vacuous = (val == "yes");
        } else if (key == "recall_all_gold") {
            if (auto s = need_double(r.recall_all_gold); !s) return s.error();
        } else if (key == "pair") {
            MatchedPair p;
            for (const auto& tok : split_any(val, " ")) {
                auto eq = tok.find('=');
                if (eq == std::string::npos) return err("malformed pair field: " + tok, line_no);
                auto k = tok.substr(0, eq);
                auto v = tok.substr(eq + 1);
                if (k == "gold")
                    p.gold_index = std::stoi(v);
                else if (k == "decoded")
                    p.decoded_index = std::stoi(v);
                else if (k == "similarity") {
                    auto d = parse_double(v);
                    if (!d) return err("unparseable similarity: " + v, line_no);
                    p.similarity = *d;
                } else
                    return err("unknown pair field: " + k, line_no);
            }
            r.pairs.push_back(p);
        } else if (key == "unmatched_gold") {
            auto v = parse_ints(val);
            if (!v) return err(v.error().message, line_no);
            r.unmatched_gold = *v;
        } else if (key == "unmatched_decoded") {
            auto v = parse_ints(val);
            if (!v) return err(v.error().message, line_no);
            r.unmatched_decoded = *v;
        } else {
            return err("unknown score field: " + key, line_no);
        }
    }
    return r;
}

}  // namespace semzip
