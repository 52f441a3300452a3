#include "claimbias/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <numeric>
#include <string_view>

#include "claimbias/errors.hpp"
#include "claimbias/rng.hpp"

namespace claimbias {

namespace {

uint64_t fnv1a64(std::string_view s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

const std::vector<double>* checked_alpha(const Dataset& ds,
                                         const std::vector<double>* alpha) {
  if (alpha) {
    if (alpha->size() != ds.size())
      throw DataError("weight vector length does not match dataset size");
    for (double a : *alpha)
      if (!std::isfinite(a) || a < 0.0)
        throw DataError("balancing weights must be finite and nonnegative");
  }
  return alpha;
}

struct Scored {
  std::array<double, kNumLabels> prob{};
  double loss = 0.0;  // unweighted cross entropy
};

Scored score_instance(std::span<const double> weights,
                      const std::array<double, kNumLabels>& bias, uint32_t dim,
                      double scale, const FeatureVector& fv, Label gold) {
  std::array<double, kNumLabels> s = bias;
  for (const auto& [idx, cnt] : fv.entries) {
    const double x = static_cast<double>(cnt);
    for (int c = 0; c < kNumLabels; ++c)
      s[static_cast<size_t>(c)] += scale * weights[static_cast<size_t>(c) * dim + idx] * x;
  }
  double m = s[0];
  for (double v : s) m = std::max(m, v);
  double z = 0.0;
  Scored out;
  for (int c = 0; c < kNumLabels; ++c) {
    out.prob[static_cast<size_t>(c)] = std::exp(s[static_cast<size_t>(c)] - m);
    z += out.prob[static_cast<size_t>(c)];
  }
  for (int c = 0; c < kNumLabels; ++c) out.prob[static_cast<size_t>(c)] /= z;
  out.loss = std::log(z) - (s[static_cast<size_t>(label_index(gold))] - m);
  return out;
}

}  // namespace

FeatureVector featurize(const Instance& inst, FeatureMode mode, int n_min,
                        int n_max, uint32_t dim) {
  if (dim < 2) throw std::invalid_argument("feature dimension must be >= 2");
  if (n_min < 1 || n_max < n_min)
    throw std::invalid_argument("invalid n-gram range");
  const uint32_t half = dim / 2;
  std::map<uint32_t, int32_t> acc;
  auto add_side = [&](const std::string& text, bool evidence_side) {
    const std::vector<std::string> toks = tokenize(text);
    for (int n = n_min; n <= n_max; ++n)
      for (const NGram& g : extract_ngrams(toks, n)) {
        const uint64_t h = fnv1a64(g);
        const uint32_t idx = evidence_side
            ? half + static_cast<uint32_t>(h % (dim - half))
            : static_cast<uint32_t>(h % half);
        ++acc[idx];
      }
  };
  add_side(inst.claim, false);
  if (mode == FeatureMode::ClaimAndEvidence && !inst.evidence.empty())
    add_side(inst.evidence, true);
  FeatureVector fv;
  fv.entries.assign(acc.begin(), acc.end());
  return fv;
}

LinearModel train_weighted(const Dataset& ds, const std::vector<double>* alpha,
                           const TrainConfig& cfg) {
  if (ds.empty()) throw DataError("dataset is empty");
  if (cfg.epochs < 1 || cfg.batch_size < 1 || cfg.learning_rate <= 0.0 ||
      cfg.l2 < 0.0 || cfg.learning_rate * cfg.l2 >= 1.0)
    throw std::invalid_argument("invalid training configuration");
  checked_alpha(ds, alpha);

  const uint32_t dim = cfg.dim;
  std::vector<FeatureVector> features;
  features.reserve(ds.size());
  for (const Instance& inst : ds.instances)
    features.push_back(featurize(inst, cfg.mode, cfg.n_min, cfg.n_max, dim));

  // weights = scale * raw; the per-batch L2 decay multiplies scale instead of
  // the full dense matrix, keeping updates sparse while staying exactly
  // w <- (1 - lr*l2) w - lr*grad.
  std::vector<double> raw(static_cast<size_t>(kNumLabels) * dim, 0.0);
  double scale = 1.0;
  std::array<double, kNumLabels> bias{};

  Rng rng(cfg.seed);
  std::vector<int32_t> order(ds.size());
  std::iota(order.begin(), order.end(), 0);

  std::array<double, kNumLabels> residual{};
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(order);
    for (size_t start = 0; start < order.size();
         start += static_cast<size_t>(cfg.batch_size)) {
      const size_t end =
          std::min(order.size(), start + static_cast<size_t>(cfg.batch_size));
      const double inv_b = 1.0 / static_cast<double>(end - start);

      // forward pass on the pre-update snapshot
      std::vector<std::array<double, kNumLabels>> grads(end - start);
      for (size_t k = start; k < end; ++k) {
        const size_t i = static_cast<size_t>(order[k]);
        const double wi = 1.0 + (alpha ? (*alpha)[i] : 0.0);
        const Scored sc = score_instance(raw, bias, dim, scale, features[i],
                                         ds.instances[i].label);
        if (!std::isfinite(sc.loss))
          throw NumericError("non-finite loss at epoch " +
                             std::to_string(epoch));
        const int yi = label_index(ds.instances[i].label);
        for (int c = 0; c < kNumLabels; ++c) {
          const double ind = c == yi ? 1.0 : 0.0;
          grads[k - start][static_cast<size_t>(c)] =
              wi * (sc.prob[static_cast<size_t>(c)] - ind) * inv_b;
        }
      }

      scale *= 1.0 - cfg.learning_rate * cfg.l2;
      for (size_t k = start; k < end; ++k) {
        const size_t i = static_cast<size_t>(order[k]);
        for (int c = 0; c < kNumLabels; ++c) {
          const double r = grads[k - start][static_cast<size_t>(c)];
          residual[static_cast<size_t>(c)] = r;
          bias[static_cast<size_t>(c)] -= cfg.learning_rate * r;
        }
        for (const auto& [idx, cnt] : features[i].entries) {
          const double x = static_cast<double>(cnt);
          for (int c = 0; c < kNumLabels; ++c)
            raw[static_cast<size_t>(c) * dim + idx] -=
                cfg.learning_rate * residual[static_cast<size_t>(c)] * x / scale;
        }
      }
    }
  }

  LinearModel model;
  model.config = cfg;
  model.bias = bias;
  model.weights.resize(raw.size());
  for (size_t i = 0; i < raw.size(); ++i) model.weights[i] = scale * raw[i];
  model.final_loss = weighted_loss(model, ds, alpha);
  if (!std::isfinite(model.final_loss))
    throw NumericError("non-finite final training loss");
  return model;
}

Prediction predict(const LinearModel& model, const Instance& inst) {
  const FeatureVector fv = featurize(inst, model.config.mode,
                                     model.config.n_min, model.config.n_max,
                                     model.config.dim);
  Prediction pred;
  pred.scores = model.bias;
  for (const auto& [idx, cnt] : fv.entries) {
    const double x = static_cast<double>(cnt);
    for (int c = 0; c < kNumLabels; ++c)
      pred.scores[static_cast<size_t>(c)] +=
          model.weights[static_cast<size_t>(c) * model.config.dim + idx] * x;
  }
  int best = 0;
  for (int c = 1; c < kNumLabels; ++c)
    if (pred.scores[static_cast<size_t>(c)] > pred.scores[static_cast<size_t>(best)]) best = c;
  pred.label = static_cast<Label>(best);
  return pred;
}

EvalResult evaluate_accuracy(const LinearModel& model, const Dataset& ds,
                             const std::vector<Label>& filter) {
  EvalResult res;
  for (const Instance& inst : ds.instances) {
    if (!filter.empty() &&
        std::find(filter.begin(), filter.end(), inst.label) == filter.end())
      continue;
    const Prediction p = predict(model, inst);
    ++res.total;
    if (p.label == inst.label) ++res.correct;
    ++res.confusion[static_cast<size_t>(label_index(inst.label))]
                   [static_cast<size_t>(label_index(p.label))];
  }
  if (res.total == 0) throw DataError("no instances left after label filter");
  res.accuracy = static_cast<double>(res.correct) / static_cast<double>(res.total);
  return res;
}

double weighted_loss(const LinearModel& model, const Dataset& ds,
                     const std::vector<double>* alpha) {
  if (ds.empty()) throw DataError("dataset is empty");
  checked_alpha(ds, alpha);
  double total = 0.0;
  for (size_t i = 0; i < ds.instances.size(); ++i) {
    const FeatureVector fv = featurize(ds.instances[i], model.config.mode,
                                       model.config.n_min, model.config.n_max,
                                       model.config.dim);
    const Scored sc = score_instance(model.weights, model.bias,
                                     model.config.dim, 1.0, fv,
                                     ds.instances[i].label);
    total += (1.0 + (alpha ? (*alpha)[i] : 0.0)) * sc.loss;
  }
  return total;
}

std::vector<double> weighted_loss_gradient(const LinearModel& model,
                                           const Dataset& ds,
                                           const std::vector<double>* alpha) {
  if (ds.empty()) throw DataError("dataset is empty");
  checked_alpha(ds, alpha);
  const uint32_t dim = model.config.dim;
  std::vector<double> grad(static_cast<size_t>(kNumLabels) * dim + kNumLabels, 0.0);
  for (size_t i = 0; i < ds.instances.size(); ++i) {
    const FeatureVector fv = featurize(ds.instances[i], model.config.mode,
                                       model.config.n_min, model.config.n_max,
                                       dim);
    const Scored sc = score_instance(model.weights, model.bias, dim, 1.0, fv,
                                     ds.instances[i].label);
    const double wi = 1.0 + (alpha ? (*alpha)[i] : 0.0);
    const int yi = label_index(ds.instances[i].label);
    for (int c = 0; c < kNumLabels; ++c) {
      const double r =
          wi * (sc.prob[static_cast<size_t>(c)] - (c == yi ? 1.0 : 0.0));
      grad[static_cast<size_t>(kNumLabels) * dim + static_cast<size_t>(c)] += r;
      for (const auto& [idx, cnt] : fv.entries)
        grad[static_cast<size_t>(c) * dim + idx] += r * static_cast<double>(cnt);
    }
  }
  return grad;
}

namespace {

constexpr char kMagic[4] = {'C', 'B', 'L', 'M'};
constexpr uint32_t kVersion = 1;

void put_u32(std::ostream& out, uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 4);
}

void put_u64(std::ostream& out, uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 8);
}

void put_f64(std::ostream& out, double v) {
  put_u64(out, std::bit_cast<uint64_t>(v));
}

uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(b[i]) << (8 * i);
  return v;
}

uint64_t get_u64(std::istream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(b[i]) << (8 * i);
  return v;
}

double get_f64(std::istream& in) { return std::bit_cast<double>(get_u64(in)); }

}  // namespace

void save_model(const LinearModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write model file: " + path);
  out.write(kMagic, 4);
  put_u32(out, kVersion);
  put_u32(out, static_cast<uint32_t>(model.config.mode));
  put_u32(out, static_cast<uint32_t>(model.config.n_min));
  put_u32(out, static_cast<uint32_t>(model.config.n_max));
  put_u32(out, model.config.dim);
  put_u32(out, static_cast<uint32_t>(kNumLabels));
  for (int c = 0; c < kNumLabels; ++c) {
    const std::string name = label_name(static_cast<Label>(c));
    put_u32(out, static_cast<uint32_t>(name.size()));
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
  }
  put_u32(out, static_cast<uint32_t>(model.config.epochs));
  put_u32(out, static_cast<uint32_t>(model.config.batch_size));
  put_f64(out, model.config.learning_rate);
  put_f64(out, model.config.l2);
  put_u64(out, model.config.seed);
  put_f64(out, model.final_loss);
  for (double b : model.bias) put_f64(out, b);
  for (double w : model.weights) put_f64(out, w);
  if (!out) throw DataError("short write to model file: " + path);
}

LinearModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model file: " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw DataError("not a model file: " + path);
  const uint32_t version = get_u32(in);
  if (version != kVersion)
    throw DataError("unsupported model version " + std::to_string(version));
  LinearModel model;
  const uint32_t mode = get_u32(in);
  if (mode > 1) throw DataError("corrupt model file: bad feature mode");
  model.config.mode = static_cast<FeatureMode>(mode);
  model.config.n_min = static_cast<int>(get_u32(in));
  model.config.n_max = static_cast<int>(get_u32(in));
  model.config.dim = get_u32(in);
  if (model.config.dim < 2 || model.config.n_min < 1 ||
      model.config.n_max < model.config.n_min)
    throw DataError("corrupt model file: bad configuration");
  const uint32_t n_classes = get_u32(in);
  if (n_classes != static_cast<uint32_t>(kNumLabels))
    throw DataError("corrupt model file: unexpected class count");
  for (int c = 0; c < kNumLabels; ++c) {
    const uint32_t len = get_u32(in);
    if (len > 64) throw DataError("corrupt model file: class name too long");
    std::string name(len, '\0');
    in.read(name.data(), len);
    if (name != label_name(static_cast<Label>(c)))
      throw DataError("corrupt model file: class list mismatch");
  }
  model.config.epochs = static_cast<int>(get_u32(in));
  model.config.batch_size = static_cast<int>(get_u32(in));
  model.config.learning_rate = get_f64(in);
  model.config.l2 = get_f64(in);
  model.config.seed = get_u64(in);
  model.final_loss = get_f64(in);
  for (int c = 0; c < kNumLabels; ++c) model.bias[static_cast<size_t>(c)] = get_f64(in);
  model.weights.resize(static_cast<size_t>(kNumLabels) * model.config.dim);
  for (double& w : model.weights) w = get_f64(in);
  if (!in) throw DataError("truncated model file: " + path);
  return model;
}

}  // namespace claimbias
