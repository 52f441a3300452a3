#pragma once

#include <string>
#include <vector>

#include "claimbias/model.hpp"
#include "claimbias/ngram_stats.hpp"
#include "claimbias/reweight.hpp"
#include "claimbias/symmetric.hpp"
#include "json.hpp"

namespace claimbias {

// Tab-separated tables with a header row; the JSON payloads carry the same
// numbers at full precision for downstream tooling.

std::string ranking_table(const LmiRanking& ranking);
nlohmann::json ranking_json(const LmiRanking& ranking);

std::string weighted_ranking_table(const std::vector<LmiRankingRow>& rows);

std::string correlation_table(const CorrelationResult& res, Label l);
nlohmann::json correlation_json(const CorrelationResult& res, Label l);

std::string coverage_table(const std::vector<LabelCoverage>& report);
nlohmann::json coverage_json(const std::vector<LabelCoverage>& report);

std::string validation_table(const SymmetricValidation& report,
                             size_t max_rows = 50);
nlohmann::json validation_json(const SymmetricValidation& report);

std::string eval_table(const EvalResult& res,
                       const std::vector<Label>& filter);
nlohmann::json eval_json(const EvalResult& res,
                         const std::vector<Label>& filter);

std::string symmetric_eval_table(const std::vector<SymmetricEvalRow>& rows);
nlohmann::json symmetric_eval_json(const std::vector<SymmetricEvalRow>& rows);

nlohmann::json optimize_json(const OptimizeResult& res,
                             const OptimizerConfig& cfg);

// Prints the table to stdout (unless quiet), optionally writes it to
// out_path, and writes the JSON payload to json_path, defaulting to
// out_path + ".json" when only out_path is given.
void emit_report(const std::string& table, const nlohmann::json& payload,
                 const std::string& out_path, const std::string& json_path,
                 bool quiet);

}  // namespace claimbias
