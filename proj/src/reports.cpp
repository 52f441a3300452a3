#include "claimbias/reports.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "claimbias/errors.hpp"

namespace claimbias {

namespace {

std::string fmt(double v, int decimals) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

// counts are integral unless re-weighted
std::string fmt_count(double v) {
  if (v == std::floor(v) && std::abs(v) < 1e15) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.0f", v);
    return buf;
  }
  return fmt(v, 3);
}

}  // namespace

std::string ranking_table(const LmiRanking& ranking) {
  std::string out = "ngram\tcount\tlmi_times_1e6\tp_label_given_ngram\n";
  for (const LmiRankingRow& row : ranking.rows) {
    out += row.ngram;
    out += '\t';
    out += fmt_count(row.count);
    out += '\t';
    out += fmt(row.lmi * 1e6, 3);
    out += '\t';
    out += fmt(row.p_l_given_w, 4);
    out += '\n';
  }
  return out;
}

std::string weighted_ranking_table(const std::vector<LmiRankingRow>& rows) {
  std::string out = "ngram\tcount\tlmi_times_1e6\tp_label_given_ngram\n";
  for (const LmiRankingRow& row : rows) {
    out += row.ngram;
    out += '\t';
    out += fmt_count(row.count);
    out += '\t';
    out += fmt(row.lmi * 1e6, 3);
    out += '\t';
    out += fmt(row.p_l_given_w, 4);
    out += '\n';
  }
  return out;
}

nlohmann::json ranking_json(const LmiRanking& ranking) {
  nlohmann::json rows = nlohmann::json::array();
  for (const LmiRankingRow& row : ranking.rows)
    rows.push_back({{"ngram", row.ngram},
                    {"count", row.count},
                    {"lmi", row.lmi},
                    {"lmi_times_1e6", row.lmi * 1e6},
                    {"p_label_given_ngram", row.p_l_given_w}});
  return {{"report", "lmi_ranking"},
          {"label", label_name(ranking.label)},
          {"n", ranking.n},
          {"min_count", ranking.min_count},
          {"rows", rows}};
}

std::string correlation_table(const CorrelationResult& res, Label l) {
  std::string out = "label\tpearson_r\tngrams_used\tngrams_skipped\n";
  out += label_name(l);
  out += '\t';
  out += fmt(res.pearson_r, 6);
  out += '\t';
  out += std::to_string(res.used.size());
  out += '\t';
  out += std::to_string(res.skipped.size());
  out += '\n';
  return out;
}

nlohmann::json correlation_json(const CorrelationResult& res, Label l) {
  return {{"report", "pearson_label_correlation"},
          {"label", label_name(l)},
          {"pearson_r", res.pearson_r},
          {"used", res.used},
          {"skipped", res.skipped}};
}

std::string coverage_table(const std::vector<LabelCoverage>& report) {
  std::string out =
      "label\tlabel_claims\tcontain_frac\tmatch_frac\tbiased_frac\n";
  for (const LabelCoverage& cov : report) {
    out += label_name(cov.label);
    out += '\t';
    out += std::to_string(cov.label_claims);
    out += '\t';
    out += fmt(cov.contain_frac, 4);
    out += '\t';
    out += fmt(cov.match_frac, 4);
    out += '\t';
    out += fmt(cov.biased_frac, 4);
    out += '\n';
  }
  return out;
}

nlohmann::json coverage_json(const std::vector<LabelCoverage>& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const LabelCoverage& cov : report)
    rows.push_back({{"label", label_name(cov.label)},
                    {"label_claims", cov.label_claims},
                    {"label_claims_with_cue", cov.label_claims_with_cue},
                    {"claims_with_cue", cov.claims_with_cue},
                    {"claims_with_cue_matching", cov.claims_with_cue_matching},
                    {"contain_frac", cov.contain_frac},
                    {"match_frac", cov.match_frac},
                    {"biased_frac", cov.biased_frac}});
  return {{"report", "bias_coverage"}, {"rows", rows}};
}

std::string validation_table(const SymmetricValidation& report,
                             size_t max_rows) {
  std::string out = "ngrams_checked\tnon_sr_instances\tviolations\n";
  out += std::to_string(report.ngrams_checked);
  out += '\t';
  out += std::to_string(report.non_sr_instances);
  out += '\t';
  out += std::to_string(report.violations.size());
  out += '\n';
  if (!report.violations.empty()) {
    out += "\nside\tngram\tsupports\trefutes\n";
    size_t shown = 0;
    for (const SymmetryViolation& v : report.violations) {
      if (shown++ == max_rows) {
        out += "... " +
               std::to_string(report.violations.size() - max_rows) +
               " more\n";
        break;
      }
      out += v.side;
      out += '\t';
      out += v.ngram;
      out += '\t';
      out += std::to_string(v.supports);
      out += '\t';
      out += std::to_string(v.refutes);
      out += '\n';
    }
  }
  return out;
}

nlohmann::json validation_json(const SymmetricValidation& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const SymmetryViolation& v : report.violations)
    rows.push_back({{"side", v.side},
                    {"ngram", v.ngram},
                    {"supports", v.supports},
                    {"refutes", v.refutes}});
  return {{"report", "symmetric_validation"},
          {"ngrams_checked", report.ngrams_checked},
          {"non_sr_instances", report.non_sr_instances},
          {"ok", report.ok()},
          {"violations", rows}};
}

std::string eval_table(const EvalResult& res, const std::vector<Label>& filter) {
  std::string out = "accuracy\tcorrect\ttotal\tlabels\n";
  out += fmt(res.accuracy, 4);
  out += '\t';
  out += std::to_string(res.correct);
  out += '\t';
  out += std::to_string(res.total);
  out += '\t';
  if (filter.empty()) {
    out += "all";
  } else {
    for (size_t i = 0; i < filter.size(); ++i) {
      if (i) out += ',';
      out += label_name(filter[i]);
    }
  }
  out += "\n\ngold\\pred";
  for (int c = 0; c < kNumLabels; ++c) {
    out += '\t';
    out += label_name(static_cast<Label>(c));
  }
  out += '\n';
  for (int g = 0; g < kNumLabels; ++g) {
    out += label_name(static_cast<Label>(g));
    for (int p = 0; p < kNumLabels; ++p) {
      out += '\t';
      out += std::to_string(res.confusion[static_cast<size_t>(g)][static_cast<size_t>(p)]);
    }
    out += '\n';
  }
  return out;
}

nlohmann::json eval_json(const EvalResult& res,
                         const std::vector<Label>& filter) {
  nlohmann::json labels = nlohmann::json::array();
  for (Label l : filter) labels.push_back(label_name(l));
  nlohmann::json confusion = nlohmann::json::array();
  for (int g = 0; g < kNumLabels; ++g) {
    nlohmann::json row = nlohmann::json::array();
    for (int p = 0; p < kNumLabels; ++p)
      row.push_back(res.confusion[static_cast<size_t>(g)][static_cast<size_t>(p)]);
    confusion.push_back(row);
  }
  return {{"report", "evaluation"},
          {"accuracy", res.accuracy},
          {"correct", res.correct},
          {"total", res.total},
          {"label_filter", labels},
          {"confusion", confusion}};
}

std::string symmetric_eval_table(const std::vector<SymmetricEvalRow>& rows) {
  std::string out =
      "variant\tdev_sr\tgenerated\tcross\texpansion\tdrop_generated\tdrop_expansion\n";
  for (const SymmetricEvalRow& row : rows) {
    out += row.variant;
    out += '\t';
    out += fmt(row.dev_sr_accuracy, 4);
    out += '\t';
    out += fmt(row.generated_accuracy, 4);
    out += '\t';
    out += fmt(row.cross_accuracy, 4);
    out += '\t';
    out += fmt(row.expansion_accuracy, 4);
    out += '\t';
    out += fmt(row.drop_generated, 4);
    out += '\t';
    out += fmt(row.drop_expansion, 4);
    out += '\n';
  }
  return out;
}

nlohmann::json symmetric_eval_json(const std::vector<SymmetricEvalRow>& rows) {
  nlohmann::json out_rows = nlohmann::json::array();
  for (const SymmetricEvalRow& row : rows)
    out_rows.push_back({{"variant", row.variant},
                        {"dev_sr_accuracy", row.dev_sr_accuracy},
                        {"generated_accuracy", row.generated_accuracy},
                        {"cross_accuracy", row.cross_accuracy},
                        {"expansion_accuracy", row.expansion_accuracy},
                        {"drop_generated", row.drop_generated},
                        {"drop_expansion", row.drop_expansion},
                        {"dev_pairs", row.dev_pairs},
                        {"quadruples", row.quadruples}});
  return {{"report", "symmetric_evaluation"}, {"rows", out_rows}};
}

nlohmann::json optimize_json(const OptimizeResult& res,
                             const OptimizerConfig& cfg) {
  return {{"report", "optimize_weights"},
          {"iterations", res.iterations},
          {"converged", res.converged},
          {"initial_objective", res.initial_objective},
          {"final_objective", res.final_objective},
          {"lambda", cfg.lambda},
          {"step_size", cfg.step_size},
          {"max_iters", cfg.max_iters},
          {"rel_tol", cfg.rel_tol},
          {"n", cfg.n},
          {"min_count", cfg.min_count},
          {"temperature", cfg.temperature},
          {"squared_penalty", cfg.squared_penalty}};
}

void emit_report(const std::string& table, const nlohmann::json& payload,
                 const std::string& out_path, const std::string& json_path,
                 bool quiet) {
  if (!quiet) std::cout << table;
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw DataError("cannot write report file: " + out_path);
    out << table;
  }
  std::string jp = json_path;
  if (jp.empty() && !out_path.empty()) jp = out_path + ".json";
  if (!jp.empty()) {
    std::ofstream out(jp);
    if (!out) throw DataError("cannot write report file: " + jp);
    out << payload.dump(2) << '\n';
  }
}

}  // namespace claimbias
