#include "claimbias/symmetric.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "claimbias/errors.hpp"
#include "json.hpp"

namespace claimbias {

namespace {

void check_quadruple(const SymmetricQuadruple& q) {
  if (q.label != Label::Supports && q.label != Label::Refutes)
    throw DataError("quadruple \"" + q.id +
                    "\": label must be SUPPORTS or REFUTES");
  if (q.original_claim.empty() || q.original_evidence.empty() ||
      q.generated_claim.empty() || q.generated_evidence.empty())
    throw DataError("quadruple \"" + q.id + "\": all four texts must be non-empty");
}

}  // namespace

std::vector<SymmetricQuadruple> parse_quadruples(std::istream& in) {
  std::vector<SymmetricQuadruple> quads;
  std::string line;
  size_t line_no = 0;
  std::unordered_set<std::string> seen_ids;
  while (std::getline(in, line)) {
    ++line_no;
    if (std::all_of(line.begin(), line.end(),
                    [](unsigned char c) { return std::isspace(c) != 0; }))
      continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw DataError(where + "malformed record: " + e.what());
    }
    SymmetricQuadruple q;
    try {
      q.id = rec.at("id").get<std::string>();
      q.original_claim = rec.at("original_claim").get<std::string>();
      q.original_evidence = rec.at("original_evidence").get<std::string>();
      q.generated_claim = rec.at("generated_claim").get<std::string>();
      q.generated_evidence = rec.at("generated_evidence").get<std::string>();
      q.label = parse_label(rec.at("label").get<std::string>());
    } catch (const DataError& e) {
      throw DataError(where + e.what());
    } catch (const nlohmann::json::exception& e) {
      throw DataError(where + "malformed record: " + e.what());
    }
    try {
      check_quadruple(q);
    } catch (const DataError& e) {
      throw DataError(where + e.what());
    }
    if (!seen_ids.insert(q.id).second)
      throw DataError(where + "duplicate id \"" + q.id + "\"");
    quads.push_back(std::move(q));
  }
  return quads;
}

std::vector<SymmetricQuadruple> load_quadruples(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open quadruple file: " + path);
  try {
    return parse_quadruples(in);
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

void save_quadruples(const std::vector<SymmetricQuadruple>& quads,
                     const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write quadruple file: " + path);
  for (const SymmetricQuadruple& q : quads) {
    nlohmann::json rec;
    rec["id"] = q.id;
    rec["original_claim"] = q.original_claim;
    rec["original_evidence"] = q.original_evidence;
    rec["generated_claim"] = q.generated_claim;
    rec["generated_evidence"] = q.generated_evidence;
    rec["label"] = label_name(q.label);
    out << rec.dump() << '\n';
  }
}

std::array<Instance, 4> expand_quadruple(const SymmetricQuadruple& q) {
  check_quadruple(q);
  const Label flipped = flip_label(q.label);
  return {
      Instance{q.id + "-oo", q.original_claim, q.original_evidence, q.label},
      Instance{q.id + "-gg", q.generated_claim, q.generated_evidence, q.label},
      Instance{q.id + "-og", q.original_claim, q.generated_evidence, flipped},
      Instance{q.id + "-go", q.generated_claim, q.original_evidence, flipped},
  };
}

Dataset expand_symmetric_set(const std::vector<SymmetricQuadruple>& quads,
                             const std::string& split_name) {
  Dataset ds;
  ds.split_name = split_name;
  ds.instances.reserve(quads.size() * 4);
  for (const SymmetricQuadruple& q : quads)
    for (Instance& inst : expand_quadruple(q))
      ds.instances.push_back(std::move(inst));
  return ds;
}

SymmetricValidation validate_symmetric_set(const Dataset& expanded, int n_min,
                                           int n_max, StopwordMode mode) {
  if (n_min < 1 || n_max < n_min)
    throw std::invalid_argument("invalid n-gram range");
  SymmetricValidation report;
  // per side: n-gram -> (supports presence count, refutes presence count)
  std::array<std::map<NGram, std::pair<int64_t, int64_t>>, 2> tallies;
  for (const Instance& inst : expanded.instances) {
    if (inst.label == Label::NotEnoughInfo) {
      ++report.non_sr_instances;
      continue;
    }
    for (int side = 0; side < 2; ++side) {
      const std::string& text = side == 0 ? inst.claim : inst.evidence;
      std::unordered_set<NGram> present;
      const std::vector<std::string> toks = tokenize(text);
      for (int n = n_min; n <= n_max; ++n)
        for (const NGram& g : extract_ngrams(toks, n, mode))
          present.insert(g);
      for (const NGram& g : present) {
        auto& tally = tallies[static_cast<size_t>(side)][g];
        if (inst.label == Label::Supports)
          ++tally.first;
        else
          ++tally.second;
      }
    }
  }
  for (int side = 0; side < 2; ++side) {
    const char* side_name = side == 0 ? "claim" : "evidence";
    for (const auto& [g, tally] : tallies[static_cast<size_t>(side)]) {
      ++report.ngrams_checked;
      if (tally.first != tally.second)
        report.violations.push_back({side_name, g, tally.first, tally.second});
    }
  }
  return report;
}

SymmetricEvalRow symmetric_report(const LinearModel& model, const Dataset& dev,
                                  const std::vector<SymmetricQuadruple>& quads,
                                  const std::string& variant_name) {
  if (dev.empty()) throw DataError("dev set is empty");
  if (quads.empty()) throw DataError("symmetric set is empty");
  SymmetricEvalRow row;
  row.variant = variant_name;
  row.quadruples = static_cast<int64_t>(quads.size());

  const EvalResult dev_res = evaluate_accuracy(
      model, dev, {Label::Supports, Label::Refutes});
  row.dev_sr_accuracy = dev_res.accuracy;
  row.dev_pairs = dev_res.total;

  int64_t gen_correct = 0, cross_correct = 0, all_correct = 0;
  for (const SymmetricQuadruple& q : quads) {
    const std::array<Instance, 4> pairs = expand_quadruple(q);
    for (size_t k = 0; k < pairs.size(); ++k) {
      const bool correct = predict(model, pairs[k]).label == pairs[k].label;
      if (!correct) continue;
      ++all_correct;
      if (k == 1) ++gen_correct;    // (Cg, Eg)
      if (k >= 2) ++cross_correct;  // (Co, Eg), (Cg, Eo)
    }
  }
  const double nq = static_cast<double>(quads.size());
  row.generated_accuracy = static_cast<double>(gen_correct) / nq;
  row.cross_accuracy = static_cast<double>(cross_correct) / (2.0 * nq);
  row.expansion_accuracy = static_cast<double>(all_correct) / (4.0 * nq);
  row.drop_generated = row.dev_sr_accuracy - row.generated_accuracy;
  row.drop_expansion = row.dev_sr_accuracy - row.expansion_accuracy;
  return row;
}

}  // namespace claimbias
