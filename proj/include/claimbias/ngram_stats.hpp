#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "claimbias/corpus.hpp"

namespace claimbias {

enum class Side { ClaimOnly = 0, ClaimAndEvidence = 1 };

// Co-occurrence counts of n-grams with labels. Counts are doubles so the same
// structure carries re-weighted statistics, where each occurrence of instance
// i contributes (1 + alpha_i); unweighted counts stay exact integers.
//
// Invariants: count(w) == sum_l count(w, l); total == sum_l count(l).
struct NGramStats {
  int n = 0;
  std::unordered_map<NGram, std::array<double, kNumLabels>> counts;
  std::array<double, kNumLabels> label_totals{};  // count(l)
  double total = 0.0;                             // |D|, all n-gram occurrences

  bool contains(const NGram& w) const { return counts.count(w) != 0; }
  double count(const NGram& w) const;
  double count(const NGram& w, Label l) const;
};

// Occurrence-level counting: an n-gram appearing twice in one claim counts
// twice. Throws DataError on an empty dataset or when no n-gram is extractable.
NGramStats count_statistics(const Dataset& ds, int n, Side side,
                            StopwordMode mode = StopwordMode::Keep);

// Same counting with every contribution of instance i scaled by
// (1 + alpha[i]). alpha must align with dataset order and be >= 0.
NGramStats count_statistics_weighted(const Dataset& ds,
                                     std::span<const double> alpha, int n,
                                     Side side,
                                     StopwordMode mode = StopwordMode::Keep);

// p(l | w) = count(w, l) / count(w). Throws DataError for an unseen n-gram.
double p_label_given_ngram(const NGramStats& stats, const NGram& w, Label l);

// Local mutual information p(w,l) * ln(p(l|w) / p(l)), 0 when count(w,l) = 0.
// Throws DataError for an unseen n-gram or a label with zero total count.
double lmi(const NGramStats& stats, const NGram& w, Label l);

struct LmiRankingRow {
  NGram ngram;
  double lmi = 0.0;
  double p_l_given_w = 0.0;
  double count = 0.0;  // count(w)
};

// Sorted by lmi descending, ties broken lexicographically by n-gram.
struct LmiRanking {
  Label label = Label::Supports;
  int n = 0;
  double min_count = 0.0;
  std::vector<LmiRankingRow> rows;
};

// Top k by LMI among n-grams with count(w) >= min_count. Fewer qualifying
// n-grams yield a shorter ranking; the result is deterministic.
LmiRanking rank_top_k(const NGramStats& stats, Label l, int k,
                      double min_count);

struct CorrelationResult {
  double pearson_r = 0.0;
  std::vector<NGram> used;     // present in both splits
  std::vector<NGram> skipped;  // absent from the dev split
};

// Pearson correlation between train and dev p(l|w) over the given n-grams.
// Every n-gram must exist in train; n-grams unseen in dev are skipped and
// reported. Fewer than two retained n-grams or zero variance is a DataError.
CorrelationResult pearson_label_correlation(const NGramStats& train,
                                            const NGramStats& dev, Label l,
                                            const std::vector<NGram>& ngrams);

struct LabelCoverage {
  Label label = Label::Supports;
  int64_t label_claims = 0;             // claims whose gold label is `label`
  int64_t label_claims_with_cue = 0;    // ... containing a top-ranked n-gram
  int64_t claims_with_cue = 0;          // any-label claims containing one
  int64_t claims_with_cue_matching = 0; // ... whose gold label matches
  double contain_frac = 0.0;            // label_claims_with_cue / label_claims
  double match_frac = 0.0;              // matching / claims_with_cue
  double biased_frac = 0.0;             // contain_frac * match_frac
};

// For each label with a non-empty cue list: the fraction of that label's
// claims containing at least one cue n-gram, the label-match rate among all
// claims containing one, and their product ("potentially biased" fraction).
std::vector<LabelCoverage> bias_coverage(
    const Dataset& ds, const std::array<std::vector<NGram>, kNumLabels>& cues,
    int n, StopwordMode mode = StopwordMode::Keep);

}  // namespace claimbias
