#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace claimbias {

// Class indices are fixed; argmax tie-breaks resolve to the lowest index.
enum class Label : int { Supports = 0, Refutes = 1, NotEnoughInfo = 2 };

inline constexpr int kNumLabels = 3;

inline int label_index(Label l) { return static_cast<int>(l); }

// Canonical uppercase name ("SUPPORTS", "REFUTES", "NOT_ENOUGH_INFO").
const char* label_name(Label l);

// Case-insensitive; also accepts "NOT ENOUGH INFO". Throws DataError otherwise.
Label parse_label(const std::string& text);

// SUPPORTS <-> REFUTES. Flipping NOT_ENOUGH_INFO is a DataError.
Label flip_label(Label l);

struct Instance {
  std::string id;
  std::string claim;
  std::string evidence;  // may be empty for claim-only analyses
  Label label = Label::Supports;

  bool operator==(const Instance&) const = default;
};

// Iteration order equals file order; per-instance weights are positional.
struct Dataset {
  std::vector<Instance> instances;
  std::string split_name;

  size_t size() const { return instances.size(); }
  bool empty() const { return instances.empty(); }
};

// Lowercase, split on whitespace, strip leading/trailing ASCII punctuation per
// token, drop tokens that end up empty. Bytes >= 0x80 pass through untouched.
std::vector<std::string> tokenize(const std::string& text);

enum class StopwordMode { Keep = 0, Remove = 1 };

bool is_stopword(const std::string& token);

// Tokens joined by single spaces. Tokens never contain whitespace, so the
// joined form is unambiguous.
using NGram = std::string;

NGram join_ngram(const std::vector<std::string>& tokens, size_t start, int n);

// All contiguous windows of length n, optionally after stopword removal.
// A sequence shorter than n yields an empty result. n < 1 is invalid.
std::vector<NGram> extract_ngrams(const std::vector<std::string>& tokens, int n,
                                  StopwordMode mode = StopwordMode::Keep);

// Line-delimited JSON records with fields id, claim, evidence (optional),
// label. Blank lines are skipped. Errors carry the 1-based line number.
Dataset parse_dataset(std::istream& in, const std::string& split_name = "");
Dataset load_dataset(const std::string& path);

void serialize_dataset(const Dataset& ds, std::ostream& out);
void save_dataset(const Dataset& ds, const std::string& path);

}  // namespace claimbias
