#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "claimbias/corpus.hpp"
#include "claimbias/symmetric.hpp"

namespace claimbias {

// Configuration for the planted-bias corpus generator. Claims are background
// noise plus one planted give-away phrase (a bigram) whose empirical
// p(label | phrase) hits target_p exactly up to integer rounding. Every
// evidence carries a label-marker token: on an "informative" instance the
// marker matches the gold label, on the rest it is drawn uniformly, which
// keeps the evidence signal genuine but bounded.
struct SynthConfig {
  int num_classes = 3;  // 2 or 3, in label-enum order
  int train_per_class = 2000;
  int dev_per_class = 500;
  int phrases_per_class = 5;
  double target_p = 0.85;  // p(label | phrase), strictly above 1/num_classes
  int background_vocab = 500;
  int claim_len_min = 5;
  int claim_len_max = 12;
  double evidence_informative_fraction = 0.5;
  int quadruple_count = 200;
  uint64_t seed = 1;
};

struct SynthOutput {
  Dataset train;
  Dataset dev;
  std::vector<SymmetricQuadruple> quadruples;
  // planted[c] lists class c's phrase bigrams, lowercase space-joined
  std::vector<std::vector<NGram>> planted;
};

// Deterministic for a fixed seed, bit for bit. Throws DataError on invalid or
// infeasible configurations (target at or below uniform, allocations that
// cannot reach the target within 0.02).
SynthOutput generate_biased_corpus(const SynthConfig& cfg);

}  // namespace claimbias
