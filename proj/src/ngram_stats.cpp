#include "claimbias/ngram_stats.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "claimbias/errors.hpp"

namespace claimbias {

double NGramStats::count(const NGram& w) const {
  auto it = counts.find(w);
  if (it == counts.end()) return 0.0;
  double s = 0.0;
  for (double c : it->second) s += c;
  return s;
}

double NGramStats::count(const NGram& w, Label l) const {
  auto it = counts.find(w);
  if (it == counts.end()) return 0.0;
  return it->second[static_cast<size_t>(label_index(l))];
}

namespace {

void validate_alpha(std::span<const double> alpha, size_t expected) {
  if (alpha.size() != expected)
    throw DataError("weight vector length " + std::to_string(alpha.size()) +
                    " does not match dataset size " + std::to_string(expected));
  for (double a : alpha)
    if (!std::isfinite(a) || a < 0.0)
      throw DataError("balancing weights must be finite and nonnegative");
}

NGramStats count_impl(const Dataset& ds, const double* alpha, int n, Side side,
                      StopwordMode mode) {
  if (ds.empty()) throw DataError("dataset is empty");
  NGramStats st;
  st.n = n;
  for (size_t i = 0; i < ds.instances.size(); ++i) {
    const double w = alpha ? 1.0 + alpha[i] : 1.0;
    const Instance& inst = ds.instances[i];
    auto add_text = [&](const std::string& text) {
      const int li = label_index(inst.label);
      for (const NGram& g : extract_ngrams(tokenize(text), n, mode)) {
        st.counts[g][static_cast<size_t>(li)] += w;
        st.label_totals[static_cast<size_t>(li)] += w;
        st.total += w;
      }
    };
    add_text(inst.claim);
    if (side == Side::ClaimAndEvidence && !inst.evidence.empty())
      add_text(inst.evidence);
  }
  if (st.total <= 0.0)
    throw DataError("no n-grams of order " + std::to_string(n) +
                    " extractable from dataset");
  return st;
}

// Shared with rank_top_k, which guarantees count(w, l) > 0 implies
// count(l) > 0, so no error paths are needed here.
double lmi_value(const NGramStats& st, const std::array<double, kNumLabels>& row,
                 Label l) {
  const double cwl = row[static_cast<size_t>(label_index(l))];
  if (cwl <= 0.0) return 0.0;
  double cw = 0.0;
  for (double c : row) cw += c;
  const double p_joint = cwl / st.total;
  const double p_cond = cwl / cw;
  const double p_l = st.label_totals[static_cast<size_t>(label_index(l))] / st.total;
  return p_joint * std::log(p_cond / p_l);
}

}  // namespace

NGramStats count_statistics(const Dataset& ds, int n, Side side,
                            StopwordMode mode) {
  return count_impl(ds, nullptr, n, side, mode);
}

NGramStats count_statistics_weighted(const Dataset& ds,
                                     std::span<const double> alpha, int n,
                                     Side side, StopwordMode mode) {
  validate_alpha(alpha, ds.size());
  return count_impl(ds, alpha.data(), n, side, mode);
}

double p_label_given_ngram(const NGramStats& stats, const NGram& w, Label l) {
  auto it = stats.counts.find(w);
  if (it == stats.counts.end())
    throw DataError("n-gram not present in statistics: \"" + w + "\"");
  double cw = 0.0;
  for (double c : it->second) cw += c;
  return it->second[static_cast<size_t>(label_index(l))] / cw;
}

double lmi(const NGramStats& stats, const NGram& w, Label l) {
  auto it = stats.counts.find(w);
  if (it == stats.counts.end())
    throw DataError("n-gram not present in statistics: \"" + w + "\"");
  if (stats.label_totals[static_cast<size_t>(label_index(l))] <= 0.0)
    throw DataError(std::string("label never observed: ") + label_name(l));
  return lmi_value(stats, it->second, l);
}

LmiRanking rank_top_k(const NGramStats& stats, Label l, int k,
                      double min_count) {
  if (k < 1) throw std::invalid_argument("ranking size must be >= 1");
  LmiRanking ranking;
  ranking.label = l;
  ranking.n = stats.n;
  ranking.min_count = min_count;
  ranking.rows.reserve(stats.counts.size());
  for (const auto& [w, row] : stats.counts) {
    double cw = 0.0;
    for (double c : row) cw += c;
    if (cw < min_count) continue;
    LmiRankingRow r;
    r.ngram = w;
    r.count = cw;
    r.lmi = lmi_value(stats, row, l);
    r.p_l_given_w = row[static_cast<size_t>(label_index(l))] / cw;
    ranking.rows.push_back(std::move(r));
  }
  std::sort(ranking.rows.begin(), ranking.rows.end(),
            [](const LmiRankingRow& a, const LmiRankingRow& b) {
              if (a.lmi != b.lmi) return a.lmi > b.lmi;
              return a.ngram < b.ngram;
            });
  if (ranking.rows.size() > static_cast<size_t>(k)) ranking.rows.resize(static_cast<size_t>(k));
  return ranking;
}

CorrelationResult pearson_label_correlation(const NGramStats& train,
                                            const NGramStats& dev, Label l,
                                            const std::vector<NGram>& ngrams) {
  CorrelationResult res;
  std::vector<double> x, y;
  for (const NGram& w : ngrams) {
    if (!train.contains(w))
      throw DataError("n-gram missing from train statistics: \"" + w + "\"");
    if (!dev.contains(w) || dev.count(w) <= 0.0) {
      res.skipped.push_back(w);
      continue;
    }
    x.push_back(p_label_given_ngram(train, w, l));
    y.push_back(p_label_given_ngram(dev, w, l));
    res.used.push_back(w);
  }
  if (x.size() < 2)
    throw DataError("fewer than 2 n-grams present in both splits");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0)
    throw DataError("zero variance in p(l|w) vector; correlation undefined");
  res.pearson_r = sxy / std::sqrt(sxx * syy);
  return res;
}

std::vector<LabelCoverage> bias_coverage(
    const Dataset& ds, const std::array<std::vector<NGram>, kNumLabels>& cues,
    int n, StopwordMode mode) {
  std::array<std::unordered_set<NGram>, kNumLabels> cue_sets;
  for (int l = 0; l < kNumLabels; ++l)
    cue_sets[static_cast<size_t>(l)].insert(cues[static_cast<size_t>(l)].begin(),
                                            cues[static_cast<size_t>(l)].end());

  std::vector<LabelCoverage> report;
  for (int l = 0; l < kNumLabels; ++l)
    if (!cue_sets[static_cast<size_t>(l)].empty()) {
      LabelCoverage c;
      c.label = static_cast<Label>(l);
      report.push_back(c);
    }
  if (report.empty()) return report;

  for (const Instance& inst : ds.instances) {
    std::unordered_set<NGram> present;
    for (const NGram& g : extract_ngrams(tokenize(inst.claim), n, mode))
      present.insert(g);
    for (LabelCoverage& cov : report) {
      const auto& cue_set = cue_sets[static_cast<size_t>(label_index(cov.label))];
      bool has_cue = false;
      // iterate the smaller set
      if (present.size() <= cue_set.size()) {
        for (const NGram& g : present)
          if (cue_set.count(g)) { has_cue = true; break; }
      } else {
        for (const NGram& g : cue_set)
          if (present.count(g)) { has_cue = true; break; }
      }
      const bool gold_match = inst.label == cov.label;
      if (gold_match) ++cov.label_claims;
      if (has_cue) {
        ++cov.claims_with_cue;
        if (gold_match) {
          ++cov.label_claims_with_cue;
          ++cov.claims_with_cue_matching;
        }
      }
    }
  }
  for (LabelCoverage& cov : report) {
    cov.contain_frac = cov.label_claims > 0
        ? static_cast<double>(cov.label_claims_with_cue) / static_cast<double>(cov.label_claims)
        : 0.0;
    cov.match_frac = cov.claims_with_cue > 0
        ? static_cast<double>(cov.claims_with_cue_matching) / static_cast<double>(cov.claims_with_cue)
        : 0.0;
    cov.biased_frac = cov.contain_frac * cov.match_frac;
  }
  return report;
}

}  // namespace claimbias
