#include "claimbias/reweight.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

#include "claimbias/errors.hpp"

namespace claimbias {

Vocabulary build_vocabulary(const Dataset& ds, int n, int min_count,
                            StopwordMode mode) {
  if (ds.empty()) throw DataError("dataset is empty");
  std::unordered_map<NGram, std::vector<int32_t>> members;
  for (size_t i = 0; i < ds.instances.size(); ++i) {
    std::unordered_set<NGram> present;
    for (const NGram& g : extract_ngrams(tokenize(ds.instances[i].claim), n, mode))
      present.insert(g);
    for (const NGram& g : present)
      members[g].push_back(static_cast<int32_t>(i));
  }

  Vocabulary vocab;
  vocab.n = n;
  vocab.min_count = min_count;
  vocab.stopword_mode = mode;
  vocab.num_instances = ds.size();
  vocab.labels.reserve(ds.size());
  for (const Instance& inst : ds.instances) vocab.labels.push_back(inst.label);

  std::vector<NGram> keys;
  keys.reserve(members.size());
  for (const auto& [g, m] : members)
    if (m.size() >= static_cast<size_t>(min_count)) keys.push_back(g);
  std::sort(keys.begin(), keys.end());
  if (keys.empty())
    throw DataError("vocabulary empty after min-count filter (min_count=" +
                    std::to_string(min_count) + ")");

  vocab.ngrams.reserve(keys.size());
  vocab.members.reserve(keys.size());
  vocab.balanceable.reserve(keys.size());
  for (NGram& g : keys) {
    std::vector<int32_t>& m = members[g];
    bool multi_class = false;
    for (size_t k = 1; k < m.size(); ++k)
      if (vocab.labels[static_cast<size_t>(m[k])] != vocab.labels[static_cast<size_t>(m[0])]) {
        multi_class = true;
        break;
      }
    vocab.balanceable.push_back(multi_class ? 1 : 0);
    if (multi_class) ++vocab.num_balanceable;
    vocab.members.push_back(std::move(m));
    vocab.ngrams.push_back(std::move(g));
  }
  return vocab;
}

namespace {

void check_alpha(const Vocabulary& vocab, std::span<const double> alpha) {
  if (alpha.size() != vocab.num_instances)
    throw DataError("weight vector length " + std::to_string(alpha.size()) +
                    " does not match instance count " +
                    std::to_string(vocab.num_instances));
}

struct BiasRow {
  std::array<double, kNumLabels> b{};
  double denom = 0.0;
};

BiasRow bias_row(const Vocabulary& vocab, std::span<const double> alpha,
                 size_t j) {
  BiasRow row;
  std::array<double, kNumLabels> num{};
  for (int32_t i : vocab.members[j]) {
    const double w = 1.0 + alpha[static_cast<size_t>(i)];
    num[static_cast<size_t>(label_index(vocab.labels[static_cast<size_t>(i)]))] += w;
    row.denom += w;
  }
  double sum = 0.0;
  for (int c = 0; c < kNumLabels; ++c) {
    row.b[static_cast<size_t>(c)] = num[static_cast<size_t>(c)] / row.denom;
    sum += row.b[static_cast<size_t>(c)];
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw NumericError("bias values for an n-gram no longer sum to 1");
  return row;
}

double l2_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

double bias_toward_class(const Vocabulary& vocab, std::span<const double> alpha,
                         size_t j, Label c) {
  check_alpha(vocab, alpha);
  if (j >= vocab.ngrams.size())
    throw DataError("vocabulary index out of range");
  if (vocab.members[j].empty())
    throw DataError("n-gram \"" + vocab.ngrams[j] + "\" has no member instances");
  return bias_row(vocab, alpha, j).b[static_cast<size_t>(label_index(c))];
}

ObjectiveParts objective(const Vocabulary& vocab, std::span<const double> alpha,
                         const OptimizerConfig& cfg) {
  check_alpha(vocab, alpha);
  ObjectiveParts parts;
  for (size_t j = 0; j < vocab.ngrams.size(); ++j) {
    if (!vocab.balanceable[j]) continue;
    const BiasRow row = bias_row(vocab, alpha, j);
    if (cfg.temperature > 0.0) {
      // log-sum-exp smoothed max; an upper bound that tends to max_c b as T->0
      double m = row.b[0];
      for (double b : row.b) m = std::max(m, b);
      double s = 0.0;
      for (double b : row.b) s += std::exp((b - m) / cfg.temperature);
      parts.max_bias += m + cfg.temperature * std::log(s);
    } else {
      double m = row.b[0];
      for (double b : row.b) m = std::max(m, b);
      parts.max_bias += m;
    }
  }
  const double norm = l2_norm(alpha);
  parts.penalty = cfg.squared_penalty ? cfg.lambda * norm * norm
                                      : cfg.lambda * norm;
  parts.total = parts.max_bias + parts.penalty;
  return parts;
}

std::vector<double> objective_gradient(const Vocabulary& vocab,
                                       std::span<const double> alpha,
                                       const OptimizerConfig& cfg) {
  check_alpha(vocab, alpha);
  std::vector<double> grad(alpha.size(), 0.0);
  for (size_t j = 0; j < vocab.ngrams.size(); ++j) {
    if (!vocab.balanceable[j]) continue;
    const BiasRow row = bias_row(vocab, alpha, j);
    if (cfg.temperature > 0.0) {
      std::array<double, kNumLabels> soft{};
      double m = row.b[0];
      for (double b : row.b) m = std::max(m, b);
      double z = 0.0;
      for (int c = 0; c < kNumLabels; ++c) {
        soft[static_cast<size_t>(c)] = std::exp((row.b[static_cast<size_t>(c)] - m) / cfg.temperature);
        z += soft[static_cast<size_t>(c)];
      }
      double dot = 0.0;
      for (int c = 0; c < kNumLabels; ++c) {
        soft[static_cast<size_t>(c)] /= z;
        dot += soft[static_cast<size_t>(c)] * row.b[static_cast<size_t>(c)];
      }
      // d smax / d alpha_i = sum_c soft_c (I[y_i=c] - b_c) / D
      for (int32_t i : vocab.members[j]) {
        const int yi = label_index(vocab.labels[static_cast<size_t>(i)]);
        grad[static_cast<size_t>(i)] += (soft[static_cast<size_t>(yi)] - dot) / row.denom;
      }
    } else {
      int best = 0;
      for (int c = 1; c < kNumLabels; ++c)
        if (row.b[static_cast<size_t>(c)] > row.b[static_cast<size_t>(best)]) best = c;
      const double b_star = row.b[static_cast<size_t>(best)];
      for (int32_t i : vocab.members[j]) {
        const double ind =
            label_index(vocab.labels[static_cast<size_t>(i)]) == best ? 1.0 : 0.0;
        grad[static_cast<size_t>(i)] += (ind - b_star) / row.denom;
      }
    }
  }
  if (cfg.squared_penalty) {
    for (size_t i = 0; i < grad.size(); ++i)
      grad[i] += 2.0 * cfg.lambda * alpha[i];
  } else {
    const double norm = l2_norm(alpha);
    if (norm > 0.0)
      for (size_t i = 0; i < grad.size(); ++i)
        grad[i] += cfg.lambda * alpha[i] / norm;
  }
  return grad;
}

OptimizeResult optimize_alpha(const Vocabulary& vocab,
                              const OptimizerConfig& cfg, std::ostream* log) {
  if (cfg.step_size <= 0.0) throw std::invalid_argument("step_size must be > 0");
  if (cfg.max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  if (cfg.rel_tol <= 0.0) throw std::invalid_argument("rel_tol must be > 0");
  if (cfg.lambda < 0.0) throw std::invalid_argument("lambda must be >= 0");

  OptimizeResult res;
  res.alpha.assign(vocab.num_instances, 0.0);
  ObjectiveParts cur = objective(vocab, res.alpha, cfg);
  if (!std::isfinite(cur.total))
    throw NumericError("objective non-finite at iteration 0");
  res.initial_objective = cur.total;

  auto record = [&](int iter, const ObjectiveParts& p, double step, bool ok) {
    res.trace.push_back({iter, p.total, p.max_bias, p.penalty, step, ok});
    if (log) {
      char buf[192];
      std::snprintf(buf, sizeof(buf),
                    "iter=%d objective=%.12g max_bias=%.12g penalty=%.12g "
                    "step=%.6g accepted=%d",
                    iter, p.total, p.max_bias, p.penalty, step, ok ? 1 : 0);
      (*log) << buf << '\n';
    }
  };
  record(0, cur, cfg.step_size, true);

  double step = cfg.step_size;
  std::vector<double> candidate(res.alpha.size());
  for (int iter = 1; iter <= cfg.max_iters; ++iter) {
    res.iterations = iter;
    const std::vector<double> grad = objective_gradient(vocab, res.alpha, cfg);
    for (size_t i = 0; i < candidate.size(); ++i)
      candidate[i] = std::max(0.0, res.alpha[i] - step * grad[i]);
    ObjectiveParts trial = objective(vocab, candidate, cfg);
    if (!std::isfinite(trial.total))
      throw NumericError("objective non-finite at iteration " +
                         std::to_string(iter));
    if (trial.total < cur.total) {
      const double rel = (cur.total - trial.total) /
                         std::max(std::abs(cur.total), 1e-300);
      res.alpha.swap(candidate);
      cur = trial;
      record(iter, cur, step, true);
      if (rel < cfg.rel_tol) {
        res.converged = true;
        break;
      }
    } else {
      step *= 0.5;
      record(iter, cur, step, false);
      if (step < 1e-15) {
        res.converged = true;
        break;
      }
    }
  }
  res.final_objective = cur.total;
  return res;
}

OptimizeResult optimize_alpha(const Dataset& ds, const OptimizerConfig& cfg,
                              std::ostream* log) {
  const Vocabulary vocab =
      build_vocabulary(ds, cfg.n, cfg.min_count, cfg.stopword_mode);
  return optimize_alpha(vocab, cfg, log);
}

NGramStats weighted_ngram_stats(const Dataset& ds,
                                std::span<const double> alpha, int n,
                                Side side, StopwordMode mode) {
  return count_statistics_weighted(ds, alpha, n, side, mode);
}

void save_weights(const std::string& path, const Dataset& ds,
                  std::span<const double> alpha) {
  if (alpha.size() != ds.size())
    throw DataError("weight vector length does not match dataset size");
  std::ofstream out(path);
  if (!out) throw DataError("cannot write weights file: " + path);
  char buf[64];
  for (size_t i = 0; i < ds.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", alpha[i]);
    out << ds.instances[i].id << '\t' << buf << '\n';
  }
}

std::vector<double> load_weights(const std::string& path, const Dataset& ds) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open weights file: " + path);
  std::unordered_map<std::string, double> by_id;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0)
      throw DataError(path + ": line " + std::to_string(line_no) +
                      ": expected id<TAB>alpha");
    const std::string id = line.substr(0, tab);
    double value = 0.0;
    try {
      size_t used = 0;
      value = std::stod(line.substr(tab + 1), &used);
    } catch (const std::exception&) {
      throw DataError(path + ": line " + std::to_string(line_no) +
                      ": unparseable weight");
    }
    if (!std::isfinite(value) || value < 0.0)
      throw DataError(path + ": line " + std::to_string(line_no) +
                      ": weights must be finite and nonnegative");
    if (!by_id.emplace(id, value).second)
      throw DataError(path + ": line " + std::to_string(line_no) +
                      ": duplicate id \"" + id + "\"");
  }
  std::vector<double> alpha;
  alpha.reserve(ds.size());
  for (const Instance& inst : ds.instances) {
    auto it = by_id.find(inst.id);
    if (it == by_id.end())
      throw DataError(path + ": no weight for instance id \"" + inst.id + "\"");
    alpha.push_back(it->second);
  }
  return alpha;
}

}  // namespace claimbias
