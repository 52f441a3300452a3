#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "claimbias/corpus.hpp"
#include "claimbias/model.hpp"

namespace claimbias {

// An original claim-evidence pair plus its human-authored counterpart that
// holds the same relation while expressing a contrary fact. Expands into four
// labeled pairs. Labels are restricted to SUPPORTS / REFUTES.
struct SymmetricQuadruple {
  std::string id;
  std::string original_claim;
  std::string original_evidence;
  std::string generated_claim;
  std::string generated_evidence;
  Label label = Label::Supports;
};

std::vector<SymmetricQuadruple> parse_quadruples(std::istream& in);
std::vector<SymmetricQuadruple> load_quadruples(const std::string& path);
void save_quadruples(const std::vector<SymmetricQuadruple>& quads,
                     const std::string& path);

// (Co,Eo,L), (Cg,Eg,L), (Co,Eg,flip L), (Cg,Eo,flip L) with ids suffixed
// -oo, -gg, -og, -go. A NOT_ENOUGH_INFO label or an empty text is a DataError.
std::array<Instance, 4> expand_quadruple(const SymmetricQuadruple& q);

Dataset expand_symmetric_set(const std::vector<SymmetricQuadruple>& quads,
                             const std::string& split_name = "symmetric");

struct SymmetryViolation {
  std::string side;  // "claim" or "evidence"
  NGram ngram;
  int64_t supports = 0;
  int64_t refutes = 0;
};

struct SymmetricValidation {
  int64_t ngrams_checked = 0;
  int64_t non_sr_instances = 0;
  std::vector<SymmetryViolation> violations;

  bool ok() const { return violations.empty() && non_sr_instances == 0; }
};

// Checks that presence-based p(l|w) is exactly 0.5 for every n-gram of order
// n_min..n_max over claims and over evidences. Violations are report content,
// not errors.
SymmetricValidation validate_symmetric_set(const Dataset& expanded, int n_min,
                                           int n_max,
                                           StopwordMode mode = StopwordMode::Keep);

struct SymmetricEvalRow {
  std::string variant;
  double dev_sr_accuracy = 0.0;     // SUPPORTS/REFUTES cases of the dev set
  double generated_accuracy = 0.0;  // the (Cg, Eg) pair per quadruple
  double cross_accuracy = 0.0;      // the two label-flipped cross pairs
  double expansion_accuracy = 0.0;  // all four pairs
  double drop_generated = 0.0;      // dev_sr - generated
  double drop_expansion = 0.0;      // dev_sr - expansion
  int64_t dev_pairs = 0;
  int64_t quadruples = 0;
};

// Accuracy comparison between the dev S/R pairs and the symmetric set.
SymmetricEvalRow symmetric_report(const LinearModel& model, const Dataset& dev,
                                  const std::vector<SymmetricQuadruple>& quads,
                                  const std::string& variant_name = "base");

}  // namespace claimbias
