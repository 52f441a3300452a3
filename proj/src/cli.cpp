#include "claimbias/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "claimbias/corpus.hpp"
#include "claimbias/errors.hpp"
#include "claimbias/model.hpp"
#include "claimbias/ngram_stats.hpp"
#include "claimbias/reports.hpp"
#include "claimbias/reweight.hpp"
#include "claimbias/symmetric.hpp"
#include "claimbias/synth.hpp"

namespace claimbias {

namespace {

struct GlobalOpts {
  bool verbose = false;
  bool quiet = false;
};

StopwordMode mode_of(bool remove_stopwords) {
  return remove_stopwords ? StopwordMode::Remove : StopwordMode::Keep;
}

Side side_of(const std::string& s) {
  return s == "claim" ? Side::ClaimOnly : Side::ClaimAndEvidence;
}

std::pair<int, int> parse_n_range(const std::string& s) {
  try {
    const size_t pos = s.find("..");
    if (pos == std::string::npos) {
      const int n = std::stoi(s);
      return {n, n};
    }
    return {std::stoi(s.substr(0, pos)), std::stoi(s.substr(pos + 2))};
  } catch (const std::exception&) {
    throw std::invalid_argument("bad n-gram range \"" + s +
                                "\"; expected N or MIN..MAX");
  }
}

std::vector<Label> parse_label_list(const std::string& s) {
  std::vector<Label> labels;
  size_t start = 0;
  while (start <= s.size()) {
    size_t comma = s.find(',', start);
    if (comma == std::string::npos) comma = s.size();
    const std::string piece = s.substr(start, comma - start);
    if (!piece.empty()) labels.push_back(parse_label(piece));
    start = comma + 1;
  }
  return labels;
}

const std::vector<std::string> kLabelNames = {"SUPPORTS", "REFUTES",
                                              "NOT_ENOUGH_INFO"};

struct AnalyzeLmiOpts {
  std::string input, label = "REFUTES", side = "claim", out, json;
  int n = 2, top = 10, min_count = 5;
  bool stopwords = false;
};

void cmd_analyze_lmi(const AnalyzeLmiOpts& o, const GlobalOpts& g) {
  const Dataset ds = load_dataset(o.input);
  const NGramStats stats =
      count_statistics(ds, o.n, side_of(o.side), mode_of(o.stopwords));
  const LmiRanking ranking =
      rank_top_k(stats, parse_label(o.label), o.top, o.min_count);
  emit_report(ranking_table(ranking), ranking_json(ranking), o.out, o.json,
              g.quiet);
}

struct CorrelateOpts {
  std::string train, dev, label = "REFUTES", out, json;
  int n = 2, top = 100, min_count = 5;
  bool stopwords = false;
};

void cmd_correlate(const CorrelateOpts& o, const GlobalOpts& g) {
  const Label label = parse_label(o.label);
  const StopwordMode mode = mode_of(o.stopwords);
  const NGramStats train_stats =
      count_statistics(load_dataset(o.train), o.n, Side::ClaimOnly, mode);
  const NGramStats dev_stats =
      count_statistics(load_dataset(o.dev), o.n, Side::ClaimOnly, mode);
  const LmiRanking ranking = rank_top_k(train_stats, label, o.top, o.min_count);
  std::vector<NGram> ngrams;
  ngrams.reserve(ranking.rows.size());
  for (const LmiRankingRow& row : ranking.rows) ngrams.push_back(row.ngram);
  const CorrelationResult res =
      pearson_label_correlation(train_stats, dev_stats, label, ngrams);
  emit_report(correlation_table(res, label), correlation_json(res, label),
              o.out, o.json, g.quiet);
}

struct CoverageOpts {
  std::string train, eval, out, json;
  int n = 2, top = 1000, min_count = 5;
  bool stopwords = false;
};

void cmd_coverage(const CoverageOpts& o, const GlobalOpts& g) {
  const StopwordMode mode = mode_of(o.stopwords);
  const NGramStats train_stats =
      count_statistics(load_dataset(o.train), o.n, Side::ClaimOnly, mode);
  const Dataset eval_ds = load_dataset(o.eval);
  std::array<std::vector<NGram>, kNumLabels> cues;
  for (int c = 0; c < kNumLabels; ++c) {
    const LmiRanking ranking =
        rank_top_k(train_stats, static_cast<Label>(c), o.top, o.min_count);
    for (const LmiRankingRow& row : ranking.rows)
      cues[static_cast<size_t>(c)].push_back(row.ngram);
  }
  const std::vector<LabelCoverage> report =
      bias_coverage(eval_ds, cues, o.n, mode);
  emit_report(coverage_table(report), coverage_json(report), o.out, o.json,
              g.quiet);
}

struct OptimizeOpts {
  std::string input, out, trace;
  int n = 2, min_count = 5, max_iters = 2000;
  double lambda = 1.0, step_size = 0.1, rel_tol = 1e-6, temperature = 0.0;
  bool stopwords = false, squared_penalty = false;
  uint64_t seed = 0;
};

void cmd_optimize(const OptimizeOpts& o, const GlobalOpts& g) {
  const Dataset ds = load_dataset(o.input);
  if (g.verbose) std::cerr << "loaded " << ds.size() << " instances\n";
  OptimizerConfig cfg;
  cfg.lambda = o.lambda;
  cfg.step_size = o.step_size;
  cfg.max_iters = o.max_iters;
  cfg.rel_tol = o.rel_tol;
  cfg.min_count = o.min_count;
  cfg.n = o.n;
  cfg.stopword_mode = mode_of(o.stopwords);
  cfg.temperature = o.temperature;
  cfg.squared_penalty = o.squared_penalty;
  cfg.seed = o.seed;
  const OptimizeResult res =
      optimize_alpha(ds, cfg, g.quiet ? nullptr : &std::cerr);
  save_weights(o.out, ds, res.alpha);
  if (!o.trace.empty()) {
    std::ofstream trace(o.trace);
    if (!trace) throw DataError("cannot write trace file: " + o.trace);
    trace << "iter\tobjective\tmax_bias\tpenalty\tstep\taccepted\n";
    char buf[160];
    for (const IterationRecord& r : res.trace) {
      std::snprintf(buf, sizeof(buf), "%d\t%.17g\t%.17g\t%.17g\t%.8g\t%d\n",
                    r.iter, r.objective, r.max_bias, r.penalty, r.step,
                    r.accepted ? 1 : 0);
      trace << buf;
    }
    std::ofstream meta(o.trace + ".json");
    if (meta) meta << optimize_json(res, cfg).dump(2) << '\n';
  }
  if (!g.quiet) {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "objective %.9g -> %.9g in %d iterations (%s)\n",
                  res.initial_objective, res.final_objective, res.iterations,
                  res.converged ? "converged" : "max iterations");
    std::cout << buf;
  }
}

struct WeightedStatsOpts {
  std::string input, weights, label = "REFUTES", out, json;
  int n = 2, top = 10, min_count = 5;
  bool stopwords = false;
};

void cmd_weighted_stats(const WeightedStatsOpts& o, const GlobalOpts& g) {
  const Dataset ds = load_dataset(o.input);
  const std::vector<double> alpha = load_weights(o.weights, ds);
  const Label label = parse_label(o.label);
  const StopwordMode mode = mode_of(o.stopwords);
  const NGramStats base = count_statistics(ds, o.n, Side::ClaimOnly, mode);
  const NGramStats weighted =
      weighted_ngram_stats(ds, alpha, o.n, Side::ClaimOnly, mode);
  // Table-shaped like the plain ranking, but rows keep the unweighted
  // ranking's order so before/after values line up.
  const LmiRanking ranking = rank_top_k(base, label, o.top, o.min_count);
  std::vector<LmiRankingRow> rows;
  nlohmann::json json_rows = nlohmann::json::array();
  for (const LmiRankingRow& row : ranking.rows) {
    LmiRankingRow w;
    w.ngram = row.ngram;
    w.count = weighted.count(row.ngram);
    w.lmi = lmi(weighted, row.ngram, label);
    w.p_l_given_w = p_label_given_ngram(weighted, row.ngram, label);
    json_rows.push_back({{"ngram", row.ngram},
                         {"count", w.count},
                         {"lmi", w.lmi},
                         {"lmi_times_1e6", w.lmi * 1e6},
                         {"p_label_given_ngram", w.p_l_given_w},
                         {"unweighted_count", row.count},
                         {"unweighted_lmi", row.lmi},
                         {"unweighted_p_label_given_ngram", row.p_l_given_w}});
    rows.push_back(std::move(w));
  }
  const nlohmann::json payload = {{"report", "weighted_ngram_stats"},
                                  {"label", label_name(label)},
                                  {"n", o.n},
                                  {"min_count", o.min_count},
                                  {"rows", json_rows}};
  emit_report(weighted_ranking_table(rows), payload, o.out, o.json, g.quiet);
}

struct TrainOpts {
  std::string input, weights, mode = "claim+evidence", out;
  int epochs = 20, batch = 64, n_min = 1, n_max = 2;
  double lr = 0.1, l2 = 1e-4;
  uint32_t dim = 1u << 18;
  uint64_t seed = 1;
};

void cmd_train(const TrainOpts& o, const GlobalOpts& g) {
  const Dataset ds = load_dataset(o.input);
  if (g.verbose) std::cerr << "loaded " << ds.size() << " instances\n";
  TrainConfig cfg;
  cfg.mode = o.mode == "claim-only" ? FeatureMode::ClaimOnly
                                    : FeatureMode::ClaimAndEvidence;
  cfg.n_min = o.n_min;
  cfg.n_max = o.n_max;
  cfg.dim = o.dim;
  cfg.epochs = o.epochs;
  cfg.learning_rate = o.lr;
  cfg.l2 = o.l2;
  cfg.batch_size = o.batch;
  cfg.seed = o.seed;
  std::vector<double> alpha;
  const std::vector<double>* alpha_ptr = nullptr;
  if (!o.weights.empty()) {
    alpha = load_weights(o.weights, ds);
    alpha_ptr = &alpha;
  }
  const LinearModel model = train_weighted(ds, alpha_ptr, cfg);
  save_model(model, o.out);
  if (!g.quiet) {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "trained %s model on %zu instances, final loss %.9g\n",
                  o.mode.c_str(), ds.size(), model.final_loss);
    std::cout << buf;
  }
}

struct EvaluateOpts {
  std::string model, input, labels, out, json;
};

void cmd_evaluate(const EvaluateOpts& o, const GlobalOpts& g) {
  const LinearModel model = load_model(o.model);
  const Dataset ds = load_dataset(o.input);
  std::vector<Label> filter;
  if (!o.labels.empty()) filter = parse_label_list(o.labels);
  const EvalResult res = evaluate_accuracy(model, ds, filter);
  emit_report(eval_table(res, filter), eval_json(res, filter), o.out, o.json,
              g.quiet);
}

struct ExpandOpts {
  std::string input, out;
};

void cmd_symmetric_expand(const ExpandOpts& o, const GlobalOpts& g) {
  const std::vector<SymmetricQuadruple> quads = load_quadruples(o.input);
  const Dataset expanded = expand_symmetric_set(quads);
  save_dataset(expanded, o.out);
  if (!g.quiet)
    std::cout << "expanded " << quads.size() << " quadruples into "
              << expanded.size() << " pairs\n";
}

struct ValidateOpts {
  std::string input, n_range = "1..2", out, json;
  bool stopwords = false;
};

void cmd_symmetric_validate(const ValidateOpts& o, const GlobalOpts& g) {
  const Dataset ds = load_dataset(o.input);
  const auto [n_min, n_max] = parse_n_range(o.n_range);
  const SymmetricValidation report =
      validate_symmetric_set(ds, n_min, n_max, mode_of(o.stopwords));
  emit_report(validation_table(report), validation_json(report), o.out, o.json,
              g.quiet);
}

struct SymEvalOpts {
  std::string model, reweighted, dev, sym, out, json;
};

void cmd_symmetric_eval(const SymEvalOpts& o, const GlobalOpts& g) {
  const Dataset dev = load_dataset(o.dev);
  const std::vector<SymmetricQuadruple> quads = load_quadruples(o.sym);
  std::vector<SymmetricEvalRow> rows;
  rows.push_back(symmetric_report(load_model(o.model), dev, quads, "base"));
  if (!o.reweighted.empty())
    rows.push_back(
        symmetric_report(load_model(o.reweighted), dev, quads, "r.w"));
  emit_report(symmetric_eval_table(rows), symmetric_eval_json(rows), o.out,
              o.json, g.quiet);
}

struct SynthOpts {
  std::string out_dir;
  SynthConfig cfg;
};

void cmd_generate_synth(const SynthOpts& o, const GlobalOpts& g) {
  const SynthOutput out = generate_biased_corpus(o.cfg);
  std::filesystem::create_directories(o.out_dir);
  const std::filesystem::path dir(o.out_dir);
  save_dataset(out.train, (dir / "train.jsonl").string());
  save_dataset(out.dev, (dir / "dev.jsonl").string());
  save_quadruples(out.quadruples, (dir / "symmetric.jsonl").string());

  nlohmann::json planted = nlohmann::json::array();
  for (int c = 0; c < o.cfg.num_classes; ++c)
    planted.push_back({{"label", label_name(static_cast<Label>(c))},
                       {"phrases", out.planted[static_cast<size_t>(c)]}});
  const nlohmann::json manifest = {
      {"report", "synthetic_corpus"},
      {"seed", o.cfg.seed},
      {"num_classes", o.cfg.num_classes},
      {"train_per_class", o.cfg.train_per_class},
      {"dev_per_class", o.cfg.dev_per_class},
      {"phrases_per_class", o.cfg.phrases_per_class},
      {"target_p", o.cfg.target_p},
      {"background_vocab", o.cfg.background_vocab},
      {"claim_len_min", o.cfg.claim_len_min},
      {"claim_len_max", o.cfg.claim_len_max},
      {"evidence_informative_fraction", o.cfg.evidence_informative_fraction},
      {"quadruple_count", o.cfg.quadruple_count},
      {"planted", planted}};
  std::ofstream mf(dir / "planted.json");
  if (!mf) throw DataError("cannot write manifest: " + (dir / "planted.json").string());
  mf << manifest.dump(2) << '\n';

  if (!g.quiet)
    std::cout << "wrote " << out.train.size() << " train, " << out.dev.size()
              << " dev instances and " << out.quadruples.size()
              << " quadruples to " << o.out_dir << "\n";
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Quantify give-away-phrase bias in claim/evidence datasets, "
               "balance it away with per-instance weights, and evaluate on "
               "symmetric test sets."};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "Read options from an INI config file");

  GlobalOpts g;
  app.add_flag("-v,--verbose", g.verbose, "Extra progress output");
  app.add_flag("-q,--quiet", g.quiet, "Suppress tables and progress output");

  const auto label_check = CLI::IsMember(kLabelNames, CLI::ignore_case);

  AnalyzeLmiOpts lmi_opts;
  auto* lmi_cmd = app.add_subcommand(
      "analyze-lmi", "Rank n-grams by local mutual information with a label");
  lmi_cmd->add_option("--input", lmi_opts.input, "Dataset file (JSONL)")->required();
  lmi_cmd->add_option("--label", lmi_opts.label, "Target label")->check(label_check);
  lmi_cmd->add_option("--n", lmi_opts.n, "N-gram order")->check(CLI::PositiveNumber);
  lmi_cmd->add_option("--top", lmi_opts.top, "Ranking size")->check(CLI::PositiveNumber);
  lmi_cmd->add_option("--min-count", lmi_opts.min_count, "Minimum n-gram count");
  lmi_cmd->add_option("--side", lmi_opts.side, "Text side to count")
      ->check(CLI::IsMember({"claim", "claim+evidence"}));
  lmi_cmd->add_flag("--stopwords", lmi_opts.stopwords, "Remove stopwords");
  lmi_cmd->add_option("--out", lmi_opts.out, "Write the table here (+ .json)");
  lmi_cmd->add_option("--json", lmi_opts.json, "Write the JSON report here");
  lmi_cmd->callback([&] { cmd_analyze_lmi(lmi_opts, g); });

  CorrelateOpts corr_opts;
  auto* corr_cmd = app.add_subcommand(
      "correlate", "Pearson correlation of p(l|w) between two splits");
  corr_cmd->add_option("--train", corr_opts.train, "Train dataset (JSONL)")->required();
  corr_cmd->add_option("--dev", corr_opts.dev, "Dev dataset (JSONL)")->required();
  corr_cmd->add_option("--label", corr_opts.label, "Target label")->check(label_check);
  corr_cmd->add_option("--n", corr_opts.n, "N-gram order")->check(CLI::PositiveNumber);
  corr_cmd->add_option("--top", corr_opts.top, "Top-ranked n-grams to correlate")
      ->check(CLI::PositiveNumber);
  corr_cmd->add_option("--min-count", corr_opts.min_count, "Minimum n-gram count");
  corr_cmd->add_flag("--stopwords", corr_opts.stopwords, "Remove stopwords");
  corr_cmd->add_option("--out", corr_opts.out, "Write the table here (+ .json)");
  corr_cmd->add_option("--json", corr_opts.json, "Write the JSON report here");
  corr_cmd->callback([&] { cmd_correlate(corr_opts, g); });

  CoverageOpts cov_opts;
  auto* cov_cmd = app.add_subcommand(
      "coverage", "Fraction of claims containing top-ranked biased n-grams");
  cov_cmd->add_option("--train", cov_opts.train, "Train dataset (JSONL)")->required();
  cov_cmd->add_option("--eval", cov_opts.eval, "Evaluation dataset (JSONL)")->required();
  cov_cmd->add_option("--n", cov_opts.n, "N-gram order")->check(CLI::PositiveNumber);
  cov_cmd->add_option("--top", cov_opts.top, "Ranking size per label")
      ->check(CLI::PositiveNumber);
  cov_cmd->add_option("--min-count", cov_opts.min_count, "Minimum n-gram count");
  cov_cmd->add_flag("--stopwords", cov_opts.stopwords, "Remove stopwords");
  cov_cmd->add_option("--out", cov_opts.out, "Write the table here (+ .json)");
  cov_cmd->add_option("--json", cov_opts.json, "Write the JSON report here");
  cov_cmd->callback([&] { cmd_coverage(cov_opts, g); });

  OptimizeOpts opt_opts;
  auto* opt_cmd = app.add_subcommand(
      "optimize-weights",
      "Solve for per-instance balancing weights that flatten n-gram bias");
  opt_cmd->add_option("--input", opt_opts.input, "Dataset file (JSONL)")->required();
  opt_cmd->add_option("--out", opt_opts.out, "Weights file to write")->required();
  opt_cmd->add_option("--n", opt_opts.n, "Vocabulary n-gram order")
      ->check(CLI::PositiveNumber);
  opt_cmd->add_option("--min-count", opt_opts.min_count,
                      "Minimum instances containing an n-gram");
  opt_cmd->add_option("--lambda", opt_opts.lambda, "Weight-norm penalty");
  opt_cmd->add_option("--step-size", opt_opts.step_size, "Initial step size");
  opt_cmd->add_option("--max-iters", opt_opts.max_iters, "Iteration cap")
      ->check(CLI::PositiveNumber);
  opt_cmd->add_option("--rel-tol", opt_opts.rel_tol,
                      "Relative decrease stopping threshold");
  opt_cmd->add_option("--temperature", opt_opts.temperature,
                      "Smooth the max with log-sum-exp at this temperature");
  opt_cmd->add_flag("--squared-penalty", opt_opts.squared_penalty,
                    "Penalize the squared norm instead");
  opt_cmd->add_flag("--stopwords", opt_opts.stopwords, "Remove stopwords");
  opt_cmd->add_option("--seed", opt_opts.seed, "Reserved for stochastic variants");
  opt_cmd->add_option("--trace", opt_opts.trace, "Write per-iteration trace here");
  opt_cmd->callback([&] { cmd_optimize(opt_opts, g); });

  WeightedStatsOpts ws_opts;
  auto* ws_cmd = app.add_subcommand(
      "weighted-stats",
      "Re-weighted n-gram statistics for the top unweighted-LMI n-grams");
  ws_cmd->add_option("--input", ws_opts.input, "Dataset file (JSONL)")->required();
  ws_cmd->add_option("--weights", ws_opts.weights, "Weights file")->required();
  ws_cmd->add_option("--label", ws_opts.label, "Target label")->check(label_check);
  ws_cmd->add_option("--n", ws_opts.n, "N-gram order")->check(CLI::PositiveNumber);
  ws_cmd->add_option("--top", ws_opts.top, "Ranking size")->check(CLI::PositiveNumber);
  ws_cmd->add_option("--min-count", ws_opts.min_count, "Minimum n-gram count");
  ws_cmd->add_flag("--stopwords", ws_opts.stopwords, "Remove stopwords");
  ws_cmd->add_option("--out", ws_opts.out, "Write the table here (+ .json)");
  ws_cmd->add_option("--json", ws_opts.json, "Write the JSON report here");
  ws_cmd->callback([&] { cmd_weighted_stats(ws_opts, g); });

  TrainOpts train_opts;
  auto* train_cmd = app.add_subcommand(
      "train", "Train the linear bag-of-n-grams classifier");
  train_cmd->add_option("--input", train_opts.input, "Dataset file (JSONL)")->required();
  train_cmd->add_option("--out", train_opts.out, "Model file to write")->required();
  train_cmd->add_option("--weights", train_opts.weights,
                        "Balancing weights file (optional)");
  train_cmd->add_option("--mode", train_opts.mode, "Feature mode")
      ->check(CLI::IsMember({"claim-only", "claim+evidence"}));
  train_cmd->add_option("--epochs", train_opts.epochs, "Training epochs")
      ->check(CLI::PositiveNumber);
  train_cmd->add_option("--lr", train_opts.lr, "Learning rate");
  train_cmd->add_option("--l2", train_opts.l2, "L2 regularization");
  train_cmd->add_option("--batch", train_opts.batch, "Mini-batch size")
      ->check(CLI::PositiveNumber);
  train_cmd->add_option("--dim", train_opts.dim, "Hashed feature dimension");
  train_cmd->add_option("--n-min", train_opts.n_min, "Smallest n-gram order");
  train_cmd->add_option("--n-max", train_opts.n_max, "Largest n-gram order");
  train_cmd->add_option("--seed", train_opts.seed, "Shuffling seed");
  train_cmd->callback([&] { cmd_train(train_opts, g); });

  EvaluateOpts eval_opts;
  auto* eval_cmd = app.add_subcommand("evaluate", "Accuracy of a trained model");
  eval_cmd->add_option("--model", eval_opts.model, "Model file")->required();
  eval_cmd->add_option("--input", eval_opts.input, "Dataset file (JSONL)")->required();
  eval_cmd->add_option("--labels", eval_opts.labels,
                       "Comma-separated gold-label filter (default: all)");
  eval_cmd->add_option("--out", eval_opts.out, "Write the table here (+ .json)");
  eval_cmd->add_option("--json", eval_opts.json, "Write the JSON report here");
  eval_cmd->callback([&] { cmd_evaluate(eval_opts, g); });

  ExpandOpts expand_opts;
  auto* expand_cmd = app.add_subcommand(
      "symmetric-expand", "Expand quadruples into the four symmetric pairs");
  expand_cmd->add_option("--input", expand_opts.input, "Quadruple file (JSONL)")->required();
  expand_cmd->add_option("--out", expand_opts.out, "Expanded dataset to write")->required();
  expand_cmd->callback([&] { cmd_symmetric_expand(expand_opts, g); });

  ValidateOpts val_opts;
  auto* val_cmd = app.add_subcommand(
      "symmetric-validate",
      "Check the p(l|w) = 0.5 construction invariant of an expanded set");
  val_cmd->add_option("--input", val_opts.input, "Expanded dataset (JSONL)")->required();
  val_cmd->add_option("--n", val_opts.n_range, "N-gram orders, N or MIN..MAX");
  val_cmd->add_flag("--stopwords", val_opts.stopwords, "Remove stopwords");
  val_cmd->add_option("--out", val_opts.out, "Write the table here (+ .json)");
  val_cmd->add_option("--json", val_opts.json, "Write the JSON report here");
  val_cmd->callback([&] { cmd_symmetric_validate(val_opts, g); });

  SymEvalOpts sym_opts;
  auto* sym_cmd = app.add_subcommand(
      "symmetric-eval", "Compare dev accuracy against the symmetric set");
  sym_cmd->add_option("--model", sym_opts.model, "Model file")->required();
  sym_cmd->add_option("--reweighted", sym_opts.reweighted,
                      "Re-weighted model file for a second row");
  sym_cmd->add_option("--dev", sym_opts.dev, "Dev dataset (JSONL)")->required();
  sym_cmd->add_option("--sym", sym_opts.sym, "Quadruple file (JSONL)")->required();
  sym_cmd->add_option("--out", sym_opts.out, "Write the table here (+ .json)");
  sym_cmd->add_option("--json", sym_opts.json, "Write the JSON report here");
  sym_cmd->callback([&] { cmd_symmetric_eval(sym_opts, g); });

  SynthOpts synth_opts;
  auto* synth_cmd = app.add_subcommand(
      "generate-synth", "Generate a planted-bias corpus with symmetric quadruples");
  synth_cmd->add_option("--out-dir", synth_opts.out_dir, "Output directory")->required();
  synth_cmd->add_option("--seed", synth_opts.cfg.seed, "Generator seed");
  synth_cmd->add_option("--classes", synth_opts.cfg.num_classes, "Class count (2 or 3)");
  synth_cmd->add_option("--train-per-class", synth_opts.cfg.train_per_class,
                        "Train instances per class");
  synth_cmd->add_option("--dev-per-class", synth_opts.cfg.dev_per_class,
                        "Dev instances per class");
  synth_cmd->add_option("--phrases-per-class", synth_opts.cfg.phrases_per_class,
                        "Planted give-away phrases per class");
  synth_cmd->add_option("--target-p", synth_opts.cfg.target_p,
                        "Target p(label | phrase)");
  synth_cmd->add_option("--background-vocab", synth_opts.cfg.background_vocab,
                        "Background vocabulary size");
  synth_cmd->add_option("--claim-len-min", synth_opts.cfg.claim_len_min,
                        "Shortest claim length in tokens");
  synth_cmd->add_option("--claim-len-max", synth_opts.cfg.claim_len_max,
                        "Longest claim length in tokens");
  synth_cmd->add_option("--evidence-informative",
                        synth_opts.cfg.evidence_informative_fraction,
                        "Fraction of instances whose evidence marks the label");
  synth_cmd->add_option("--quadruples", synth_opts.cfg.quadruple_count,
                        "Symmetric quadruples to emit");
  synth_cmd->callback([&] { cmd_generate_synth(synth_opts, g); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace claimbias
