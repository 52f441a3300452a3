#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "claimbias/corpus.hpp"
#include "claimbias/ngram_stats.hpp"

namespace claimbias {

// Claim-side n-gram vocabulary with per-instance presence membership.
// Membership is binary: an n-gram occurring twice in one claim is one member
// entry. N-grams whose member instances all share one class are flagged
// unbalanceable; their bias is identically 1 for every weight vector, so they
// are excluded from the optimization objective.
struct Vocabulary {
  int n = 2;
  int min_count = 1;
  StopwordMode stopword_mode = StopwordMode::Keep;
  std::vector<NGram> ngrams;                  // sorted lexicographically
  std::vector<std::vector<int32_t>> members;  // per n-gram, ascending indices
  std::vector<uint8_t> balanceable;           // 0 = single-class n-gram
  std::vector<Label> labels;                  // per instance, dataset order
  size_t num_instances = 0;
  size_t num_balanceable = 0;
};

// min_count applies to the number of member instances. Throws DataError when
// the vocabulary is empty after filtering.
Vocabulary build_vocabulary(const Dataset& ds, int n, int min_count,
                            StopwordMode mode = StopwordMode::Keep);

// b_j^c: the alpha-weighted fraction of class-c instances among the instances
// whose claims contain n-gram j:
//   sum_i I[w_j in claim_i] (1 + alpha_i) I[y_i = c]
//   / sum_i I[w_j in claim_i] (1 + alpha_i)
double bias_toward_class(const Vocabulary& vocab, std::span<const double> alpha,
                         size_t j, Label c);

struct OptimizerConfig {
  double lambda = 1.0;      // penalty coefficient on ||alpha||_2
  double step_size = 0.1;   // halved whenever a step fails to decrease
  int max_iters = 2000;
  double rel_tol = 1e-6;    // stop when relative decrease falls below this
  int min_count = 5;
  int n = 2;
  StopwordMode stopword_mode = StopwordMode::Keep;
  double temperature = 0.0;     // > 0 swaps max_c for log-sum-exp smoothing
  bool squared_penalty = false; // lambda * ||alpha||_2^2 variant
  uint64_t seed = 0;            // reserved; the solver itself is deterministic
};

struct ObjectiveParts {
  double total = 0.0;
  double max_bias = 0.0;  // sum over balanceable n-grams of max_c b_j^c
  double penalty = 0.0;   // lambda * ||alpha||_2 (or squared variant)
};

// sum_{j balanceable} max_c b_j^c + lambda * ||alpha||_2.
ObjectiveParts objective(const Vocabulary& vocab, std::span<const double> alpha,
                         const OptimizerConfig& cfg);

// Subgradient of the objective. The max is resolved by its achieving class
// (lowest index on ties); the norm term contributes 0 at the origin.
std::vector<double> objective_gradient(const Vocabulary& vocab,
                                       std::span<const double> alpha,
                                       const OptimizerConfig& cfg);

struct IterationRecord {
  int iter = 0;
  double objective = 0.0;
  double max_bias = 0.0;
  double penalty = 0.0;
  double step = 0.0;
  bool accepted = false;
};

struct OptimizeResult {
  std::vector<double> alpha;
  std::vector<IterationRecord> trace;  // objective per iteration, non-increasing
  int iterations = 0;
  bool converged = false;
  double initial_objective = 0.0;
  double final_objective = 0.0;
};

// Projected subgradient descent from alpha = 0 with clamping at 0. Trial steps
// that fail to decrease the objective are rejected and halve the step size,
// so the recorded objective sequence never increases. Throws NumericError,
// naming the iteration, if the objective turns non-finite.
OptimizeResult optimize_alpha(const Vocabulary& vocab,
                              const OptimizerConfig& cfg,
                              std::ostream* log = nullptr);

OptimizeResult optimize_alpha(const Dataset& ds, const OptimizerConfig& cfg,
                              std::ostream* log = nullptr);

// Re-weighted n-gram statistics: every count contribution of instance i is
// multiplied by (1 + alpha_i). Downstream lmi / p(l|w) apply unchanged.
NGramStats weighted_ngram_stats(const Dataset& ds,
                                std::span<const double> alpha, int n,
                                Side side = Side::ClaimOnly,
                                StopwordMode mode = StopwordMode::Keep);

// Line-delimited "id<TAB>alpha" pairs; consumers join on id.
void save_weights(const std::string& path, const Dataset& ds,
                  std::span<const double> alpha);
std::vector<double> load_weights(const std::string& path, const Dataset& ds);

}  // namespace claimbias
