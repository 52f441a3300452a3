#include "claimbias/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include "claimbias/errors.hpp"
#include "json.hpp"

namespace claimbias {

const char* label_name(Label l) {
  switch (l) {
    case Label::Supports: return "SUPPORTS";
    case Label::Refutes: return "REFUTES";
    case Label::NotEnoughInfo: return "NOT_ENOUGH_INFO";
  }
  return "?";
}

Label parse_label(const std::string& text) {
  std::string up;
  up.reserve(text.size());
  for (unsigned char c : text) up.push_back(static_cast<char>(std::toupper(c)));
  if (up == "SUPPORTS") return Label::Supports;
  if (up == "REFUTES") return Label::Refutes;
  if (up == "NOT_ENOUGH_INFO" || up == "NOT ENOUGH INFO") return Label::NotEnoughInfo;
  throw DataError("unknown label \"" + text + "\"");
}

Label flip_label(Label l) {
  if (l == Label::Supports) return Label::Refutes;
  if (l == Label::Refutes) return Label::Supports;
  throw DataError("label NOT_ENOUGH_INFO has no inverse");
}

namespace {

bool is_ascii_punct(char c) {
  unsigned char u = static_cast<unsigned char>(c);
  return u < 0x80 && std::ispunct(u) != 0;
}

bool is_blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(),
                     [](unsigned char c) { return std::isspace(c) != 0; });
}

}  // namespace

std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> tokens;
  size_t i = 0;
  const size_t n = text.size();
  while (i < n) {
    while (i < n && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    size_t start = i;
    while (i < n && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i == start) break;
    std::string tok = text.substr(start, i - start);
    for (char& c : tok) {
      unsigned char u = static_cast<unsigned char>(c);
      if (u < 0x80) c = static_cast<char>(std::tolower(u));
    }
    size_t b = 0;
    size_t e = tok.size();
    while (b < e && is_ascii_punct(tok[b])) ++b;
    while (e > b && is_ascii_punct(tok[e - 1])) --e;
    if (e > b) tokens.push_back(tok.substr(b, e - b));
  }
  return tokens;
}

bool is_stopword(const std::string& token) {
  static const std::unordered_set<std::string> kStopwords = {
      "a", "about", "above", "after", "again", "against", "all", "am", "an",
      "and", "any", "are", "aren't", "as", "at", "be", "because", "been",
      "before", "below", "between", "both", "but", "by", "can't",
      "cannot", "could", "couldn't", "did", "didn't", "do", "does", "doesn't",
      "doing", "don't", "down", "during", "each", "few", "for", "from",
      "further", "had", "hadn't", "has", "hasn't", "have", "haven't", "having",
      "he", "he'd", "he'll", "he's", "her", "here", "here's", "hers",
      "herself", "him", "himself", "his", "how", "how's", "i", "i'd", "i'll",
      "i'm", "i've", "if", "in", "into", "is", "isn't", "it", "it's", "its",
      "itself", "let's", "me", "more", "most", "mustn't", "my", "myself",
      "no", "nor", "not", "of", "off", "on", "once", "only", "or", "other",
      "ought", "our", "ours", "ourselves", "out", "over", "own", "same",
      "shan't", "she", "she'd", "she'll", "she's", "should", "shouldn't",
      "so", "some", "such", "than", "that", "that's", "the", "their",
      "theirs", "them", "themselves", "then", "there", "there's", "these",
      "they", "they'd", "they'll", "they're", "they've", "this", "those",
      "through", "to", "too", "under", "until", "up", "very", "was", "wasn't",
      "we", "we'd", "we'll", "we're", "we've", "were", "weren't", "what",
      "what's", "when", "when's", "where", "where's", "which", "while",
      "who", "who's", "whom", "why", "why's", "with", "won't", "would",
      "wouldn't", "you", "you'd", "you'll", "you're", "you've", "your",
      "yours", "yourself", "yourselves"};
  return kStopwords.count(token) != 0;
}

NGram join_ngram(const std::vector<std::string>& tokens, size_t start, int n) {
  NGram g = tokens[start];
  for (int k = 1; k < n; ++k) {
    g += ' ';
    g += tokens[start + static_cast<size_t>(k)];
  }
  return g;
}

std::vector<NGram> extract_ngrams(const std::vector<std::string>& tokens, int n,
                                  StopwordMode mode) {
  if (n < 1) throw std::invalid_argument("n-gram order must be >= 1");
  const std::vector<std::string>* src = &tokens;
  std::vector<std::string> filtered;
  if (mode == StopwordMode::Remove) {
    filtered.reserve(tokens.size());
    for (const auto& t : tokens)
      if (!is_stopword(t)) filtered.push_back(t);
    src = &filtered;
  }
  std::vector<NGram> out;
  if (src->size() < static_cast<size_t>(n)) return out;
  out.reserve(src->size() - static_cast<size_t>(n) + 1);
  for (size_t i = 0; i + static_cast<size_t>(n) <= src->size(); ++i)
    out.push_back(join_ngram(*src, i, n));
  return out;
}

Dataset parse_dataset(std::istream& in, const std::string& split_name) {
  Dataset ds;
  ds.split_name = split_name;
  std::string line;
  size_t line_no = 0;
  std::unordered_set<std::string> seen_ids;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw DataError(where + "malformed record: " + e.what());
    }
    if (!rec.is_object()) throw DataError(where + "record is not an object");
    Instance inst;
    try {
      // numeric ids (as in raw fact-verification dumps) are stringified
      const auto& id = rec.at("id");
      inst.id = id.is_string() ? id.get<std::string>() : id.dump();
      inst.claim = rec.at("claim").get<std::string>();
      if (rec.contains("evidence") && !rec["evidence"].is_null())
        inst.evidence = rec["evidence"].get<std::string>();
      inst.label = parse_label(rec.at("label").get<std::string>());
    } catch (const DataError& e) {
      throw DataError(where + e.what());
    } catch (const nlohmann::json::exception& e) {
      throw DataError(where + "malformed record: " + e.what());
    }
    if (inst.id.empty()) throw DataError(where + "empty id");
    if (inst.claim.empty()) throw DataError(where + "empty claim");
    if (!seen_ids.insert(inst.id).second)
      throw DataError(where + "duplicate id \"" + inst.id + "\"");
    ds.instances.push_back(std::move(inst));
  }
  return ds;
}

Dataset load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open dataset file: " + path);
  try {
    Dataset ds = parse_dataset(in, path);
    return ds;
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

void serialize_dataset(const Dataset& ds, std::ostream& out) {
  for (const Instance& inst : ds.instances) {
    nlohmann::json rec;
    rec["id"] = inst.id;
    rec["claim"] = inst.claim;
    if (!inst.evidence.empty()) rec["evidence"] = inst.evidence;
    rec["label"] = label_name(inst.label);
    out << rec.dump() << '\n';
  }
}

void save_dataset(const Dataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write dataset file: " + path);
  serialize_dataset(ds, out);
}

}  // namespace claimbias
