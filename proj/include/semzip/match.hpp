#pragma once

#include <vector>

#include "semzip/normalize.hpp"

namespace semzip {

// Per-field weights of the similarity score. Default is the pilot
// setting: 0.40 subject, 0.20 predicate, 0.30 value, 0.10 type. Scope is
// excluded by default (the similarity formula omits it); scope-inclusive
// scoring is available through an explicit override.
struct SimilarityWeights {
    double subject = 0.40;
    double predicate = 0.20;
    double value = 0.30;
    double type = 0.10;
    double scope = 0.0;

    bool valid() const;
    static SimilarityWeights scope_inclusive();
};

inline constexpr double kDefaultThreshold = 0.72;
const std::vector<double>& default_threshold_set();  // {0.65, 0.72, 0.80}

struct MatchedPair {
    int gold_index = 0;
    int decoded_index = 0;
    double similarity = 0.0;

    bool operator==(const MatchedPair& o) const {
        return gold_index == o.gold_index && decoded_index == o.decoded_index && similarity == o.similarity;
    }
};

// Per (case, regime, threshold) scoring result. CAR/WAR/precision are
// computed over the critical subset; recall_all_gold is the informational
// unweighted recall over every gold atom.
struct MatchReport {
    double threshold = kDefaultThreshold;
    std::vector<MatchedPair> pairs;
    std::vector<int> unmatched_gold;
    std::vector<int> unmatched_decoded;
    double car = 0.0;
    double war = 0.0;
    double precision = 0.0;
    bool precision_vacuous = false;  // decoded set empty; precision = 1.0 by convention
    double recall_all_gold = 0.0;

    bool operator==(const MatchReport& o) const;
    std::string serialize() const;
    static Result<MatchReport> parse(const std::string& text);
};

// Weighted per-field similarity. Each field scores 1 on exact equality of
// normalized forms, else 0; list-valued comparisons score as Jaccard
// overlap of element sets (a scalar token counts as a singleton set).
double similarity(const NormalizedAtom& gold, const NormalizedAtom& decoded,
                  const SimilarityWeights& w = SimilarityWeights{});

// Deterministic greedy match: gold atoms in descending criticality (ties
// by list order) each take the unused decoded atom with maximal
// similarity >= threshold (ties by decoded list order).
Result<MatchReport> match_atoms(const std::vector<GoldAtom>& gold,
                                const std::vector<SemanticAtom>& decoded, double threshold,
                                const SimilarityWeights& w, const AliasTable& table);

// Eq. 5: m / n over the critical subset. n >= 1 required.
Result<double> compute_car(int matched_critical, int critical_total);

// Eq. 6: sum of matched criticality weights over total, critical atoms only.
Result<double> compute_war(const std::vector<int>& critical_weights,
                           const std::vector<bool>& critical_matched);

// Eq. 7: m / k; k = 0 yields 1.0 with the vacuous flag set.
struct PrecisionResult {
    double value = 1.0;
    bool vacuous = false;
};
PrecisionResult compute_precision(int matched_critical, int decoded_count);

Result<std::vector<MatchReport>> sensitivity_sweep(const std::vector<GoldAtom>& gold,
                                                   const std::vector<SemanticAtom>& decoded,
                                                   const std::vector<double>& thresholds,
                                                   const SimilarityWeights& w,
                                                   const AliasTable& table);

}  // namespace semzip
