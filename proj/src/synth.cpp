#include "claimbias/synth.hpp"

#include <cmath>
#include <cstdio>
#include <unordered_set>

#include "claimbias/errors.hpp"
#include "claimbias/rng.hpp"

namespace claimbias {

namespace {

constexpr char kClassTag[] = {'s', 'r', 'n'};
const char* const kEvidenceMarker[] = {"evsupp", "evref", "evnei"};

std::string background_token(int i) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "bg%03d", i);
  return buf;
}

struct PhrasePool {
  // phrase_tokens[c][k] = {first token, second token}
  std::vector<std::vector<std::pair<std::string, std::string>>> tokens;
  std::vector<std::vector<NGram>> bigrams;
};

PhrasePool make_phrases(const SynthConfig& cfg) {
  PhrasePool pool;
  pool.tokens.resize(static_cast<size_t>(cfg.num_classes));
  pool.bigrams.resize(static_cast<size_t>(cfg.num_classes));
  for (int c = 0; c < cfg.num_classes; ++c)
    for (int k = 0; k < cfg.phrases_per_class; ++k) {
      char a[24], b[24];
      std::snprintf(a, sizeof(a), "cue%c%da", kClassTag[c], k);
      std::snprintf(b, sizeof(b), "cue%c%db", kClassTag[c], k);
      pool.tokens[static_cast<size_t>(c)].emplace_back(a, b);
      pool.bigrams[static_cast<size_t>(c)].push_back(std::string(a) + " " + b);
    }
  return pool;
}

void validate_config(const SynthConfig& cfg) {
  if (cfg.num_classes < 2 || cfg.num_classes > kNumLabels)
    throw DataError("num_classes must be 2 or 3");
  if (cfg.train_per_class < 1 || cfg.dev_per_class < 0)
    throw DataError("instance counts must be positive");
  if (cfg.phrases_per_class < 1)
    throw DataError("phrases_per_class must be >= 1");
  const double uniform = 1.0 / static_cast<double>(cfg.num_classes);
  if (!(cfg.target_p > uniform) || cfg.target_p > 1.0)
    throw DataError("target p(label|phrase) must lie in (1/num_classes, 1]");
  if (cfg.background_vocab < 2)
    throw DataError("background vocabulary too small");
  if (cfg.claim_len_min < 1 || cfg.claim_len_max < cfg.claim_len_min)
    throw DataError("invalid claim length range");
  if (cfg.evidence_informative_fraction < 0.0 ||
      cfg.evidence_informative_fraction > 1.0)
    throw DataError("evidence_informative_fraction must lie in [0, 1]");
  if (cfg.quadruple_count < 0)
    throw DataError("quadruple_count must be >= 0");
}

struct Allocation {
  int per_phrase = 0;  // T: occurrences of each phrase
  int own = 0;         // occurrences inside the phrase's class
  // copies[c][k][c'] = occurrences of phrase (c, k) placed in class c'
  std::vector<std::vector<std::vector<int>>> copies;
};

// Integer allocation with p(label | phrase) = own / per_phrase for every
// phrase. The spare occurrences rotate across the other classes so no
// divisibility constraint applies and per-class loads stay balanced.
Allocation allocate(const SynthConfig& cfg, int per_class, bool strict) {
  Allocation a;
  a.per_phrase = per_class / cfg.phrases_per_class;
  if (a.per_phrase < 1)
    throw DataError("too few instances per class for the phrase count");
  a.own = static_cast<int>(std::lround(cfg.target_p * a.per_phrase));
  if (a.own > a.per_phrase) a.own = a.per_phrase;
  if (a.own < 1) a.own = 1;
  const double achieved =
      static_cast<double>(a.own) / static_cast<double>(a.per_phrase);
  if (strict && std::abs(achieved - cfg.target_p) > 0.02)
    throw DataError(
        "infeasible target p(label|phrase): closest achievable is " +
        std::to_string(achieved));

  const int c_total = cfg.num_classes;
  const int others = c_total - 1;
  const int spare = a.per_phrase - a.own;
  a.copies.assign(static_cast<size_t>(c_total),
                  std::vector<std::vector<int>>(
                      static_cast<size_t>(cfg.phrases_per_class),
                      std::vector<int>(static_cast<size_t>(c_total), 0)));
  int rotation = 0;
  for (int c = 0; c < c_total; ++c)
    for (int k = 0; k < cfg.phrases_per_class; ++k) {
      auto& row = a.copies[static_cast<size_t>(c)][static_cast<size_t>(k)];
      row[static_cast<size_t>(c)] = a.own;
      for (int s = 0; s < spare; ++s) {
        const int offset = (rotation + s) % others;
        // the offset-th class other than c, in increasing order
        const int cc = offset < c ? offset : offset + 1;
        row[static_cast<size_t>(cc)] += 1;
      }
      rotation = (rotation + spare) % others;
    }

  // per-class load check: own phrases plus everything rotated in
  std::vector<int> load(static_cast<size_t>(c_total), 0);
  for (int c = 0; c < c_total; ++c)
    for (int k = 0; k < cfg.phrases_per_class; ++k)
      for (int cc = 0; cc < c_total; ++cc)
        load[static_cast<size_t>(cc)] +=
            a.copies[static_cast<size_t>(c)][static_cast<size_t>(k)][static_cast<size_t>(cc)];
  for (int cc = 0; cc < c_total; ++cc)
    if (load[static_cast<size_t>(cc)] > per_class)
      throw DataError("infeasible configuration: phrase occurrences exceed "
                      "class capacity");
  return a;
}

class Generator {
 public:
  explicit Generator(const SynthConfig& cfg)
      : cfg_(cfg), rng_(cfg.seed), pool_(make_phrases(cfg)) {}

  SynthOutput run() {
    SynthOutput out;
    out.planted = pool_.bigrams;
    out.train = make_split("tr", cfg_.train_per_class, true);
    out.train.split_name = "train";
    if (cfg_.dev_per_class > 0) {
      // dev mirrors the distribution; rounding errors there are tolerable
      out.dev = make_split("dv", cfg_.dev_per_class, false);
      out.dev.split_name = "dev";
    }
    out.quadruples = make_quadruples();
    return out;
  }

 private:
  std::string claim_text(int phrase_class, int phrase_k) {
    const int len = rng_.range_int(cfg_.claim_len_min, cfg_.claim_len_max);
    std::vector<std::string> toks;
    toks.reserve(static_cast<size_t>(len) + 2);
    for (int t = 0; t < len; ++t)
      toks.push_back(background_token(
          static_cast<int>(rng_.below(static_cast<uint64_t>(cfg_.background_vocab)))));
    if (phrase_class >= 0) {
      const auto& [a, b] =
          pool_.tokens[static_cast<size_t>(phrase_class)][static_cast<size_t>(phrase_k)];
      const size_t pos = static_cast<size_t>(rng_.range_int(0, len));
      toks.insert(toks.begin() + static_cast<std::ptrdiff_t>(pos), {a, b});
    }
    std::string text = toks[0];
    for (size_t t = 1; t < toks.size(); ++t) {
      text += ' ';
      text += toks[t];
    }
    return text;
  }

  std::string evidence_text(int label_class, bool informative) {
    const int len = rng_.range_int(4, 9);
    std::vector<std::string> toks;
    toks.reserve(static_cast<size_t>(len) + 1);
    for (int t = 0; t < len; ++t)
      toks.push_back(background_token(
          static_cast<int>(rng_.below(static_cast<uint64_t>(cfg_.background_vocab)))));
    const int marker_class =
        informative ? label_class
                    : static_cast<int>(rng_.below(static_cast<uint64_t>(cfg_.num_classes)));
    const size_t pos = static_cast<size_t>(rng_.range_int(0, len));
    toks.insert(toks.begin() + static_cast<std::ptrdiff_t>(pos),
                kEvidenceMarker[marker_class]);
    std::string text = toks[0];
    for (size_t t = 1; t < toks.size(); ++t) {
      text += ' ';
      text += toks[t];
    }
    return text;
  }

  Dataset make_split(const std::string& id_prefix, int per_class, bool strict) {
    const Allocation alloc = allocate(cfg_, per_class, strict);
    Dataset ds;
    int serial = 0;
    for (int c = 0; c < cfg_.num_classes; ++c) {
      // phrase assignment per instance: encoded as class * K + k, -1 = none
      std::vector<int> assignment;
      assignment.reserve(static_cast<size_t>(per_class));
      for (int pc = 0; pc < cfg_.num_classes; ++pc)
        for (int k = 0; k < cfg_.phrases_per_class; ++k) {
          const int copies =
              alloc.copies[static_cast<size_t>(pc)][static_cast<size_t>(k)][static_cast<size_t>(c)];
          for (int r = 0; r < copies; ++r)
            assignment.push_back(pc * cfg_.phrases_per_class + k);
        }
      while (assignment.size() < static_cast<size_t>(per_class))
        assignment.push_back(-1);
      rng_.shuffle(assignment);

      const int informative_count = static_cast<int>(
          std::floor(cfg_.evidence_informative_fraction * per_class));
      std::vector<int> informative(static_cast<size_t>(per_class), 0);
      for (int i = 0; i < informative_count; ++i) informative[static_cast<size_t>(i)] = 1;
      rng_.shuffle(informative);

      for (int i = 0; i < per_class; ++i) {
        Instance inst;
        char id[24];
        std::snprintf(id, sizeof(id), "%s%06d", id_prefix.c_str(), serial++);
        inst.id = id;
        const int a = assignment[static_cast<size_t>(i)];
        inst.claim = claim_text(a < 0 ? -1 : a / cfg_.phrases_per_class,
                                a < 0 ? -1 : a % cfg_.phrases_per_class);
        inst.evidence = evidence_text(c, informative[static_cast<size_t>(i)] != 0);
        inst.label = static_cast<Label>(c);
        ds.instances.push_back(std::move(inst));
      }
    }
    rng_.shuffle(ds.instances);
    return ds;
  }

  std::vector<SymmetricQuadruple> make_quadruples() {
    std::vector<SymmetricQuadruple> quads;
    quads.reserve(static_cast<size_t>(cfg_.quadruple_count));
    std::unordered_set<std::string> used_claims, used_evidences;
    auto fresh = [this](std::unordered_set<std::string>& used, auto&& make) {
      for (int attempt = 0; attempt < 1000; ++attempt) {
        std::string text = make();
        if (used.insert(text).second) return text;
      }
      throw NumericError("could not generate a fresh quadruple text");
    };
    for (int q = 0; q < cfg_.quadruple_count; ++q) {
      const Label label = q % 2 == 0 ? Label::Supports : Label::Refutes;
      const Label flipped = flip_label(label);
      const int k_orig = static_cast<int>(rng_.below(static_cast<uint64_t>(cfg_.phrases_per_class)));
      const int k_gen = static_cast<int>(rng_.below(static_cast<uint64_t>(cfg_.phrases_per_class)));
      SymmetricQuadruple quad;
      char id[16];
      std::snprintf(id, sizeof(id), "sym%04d", q);
      quad.id = id;
      quad.label = label;
      // The original claim carries its label's give-away phrase; the
      // generated claim carries the opposite label's phrase while the pair
      // still holds the original relation.
      quad.original_claim = fresh(used_claims, [&] {
        return claim_text(label_index(label), k_orig);
      });
      quad.generated_claim = fresh(used_claims, [&] {
        return claim_text(label_index(flipped), k_gen);
      });
      quad.original_evidence = fresh(used_evidences, [&] {
        return evidence_text(label_index(label), true);
      });
      quad.generated_evidence = fresh(used_evidences, [&] {
        return evidence_text(label_index(label), true);
      });
      quads.push_back(std::move(quad));
    }
    return quads;
  }

  const SynthConfig cfg_;
  Rng rng_;
  const PhrasePool pool_;
};

}  // namespace

SynthOutput generate_biased_corpus(const SynthConfig& cfg) {
  validate_config(cfg);
  return Generator(cfg).run();
}

}  // namespace claimbias
