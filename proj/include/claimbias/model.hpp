#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "claimbias/corpus.hpp"

namespace claimbias {

enum class FeatureMode { ClaimOnly = 0, ClaimAndEvidence = 1 };

// Sparse hashed bag-of-n-grams. Claim features hash into [0, dim/2) and
// evidence features into [dim/2, dim), so the two sides can never collide.
struct FeatureVector {
  std::vector<std::pair<uint32_t, int32_t>> entries;  // sorted by index
};

struct TrainConfig {
  FeatureMode mode = FeatureMode::ClaimAndEvidence;
  int n_min = 1;
  int n_max = 2;
  uint32_t dim = 1u << 18;
  int epochs = 20;
  double learning_rate = 0.1;
  double l2 = 1e-4;
  int batch_size = 64;
  uint64_t seed = 1;
};

// Multinomial linear classifier. Prediction is the argmax of class scores
// with lowest-class-index tie-break.
struct LinearModel {
  TrainConfig config;
  std::vector<double> weights;  // kNumLabels x dim, row-major
  std::array<double, kNumLabels> bias{};
  double final_loss = 0.0;
};

FeatureVector featurize(const Instance& inst, FeatureMode mode, int n_min,
                        int n_max, uint32_t dim);

// Minimizes sum_i (1 + alpha_i) * CE(x_i, y_i) by seeded mini-batch gradient
// descent with L2 regularization. alpha == nullptr means alpha = 0, which is
// bitwise identical to unweighted training under the same seed.
LinearModel train_weighted(const Dataset& ds, const std::vector<double>* alpha,
                           const TrainConfig& cfg);

struct Prediction {
  Label label = Label::Supports;
  std::array<double, kNumLabels> scores{};
};

Prediction predict(const LinearModel& model, const Instance& inst);

struct EvalResult {
  double accuracy = 0.0;
  int64_t correct = 0;
  int64_t total = 0;
  std::array<std::array<int64_t, kNumLabels>, kNumLabels> confusion{};  // [gold][pred]
};

// Accuracy over instances whose gold label is in `filter` (empty = all
// labels). An empty filtered set is a DataError.
EvalResult evaluate_accuracy(const LinearModel& model, const Dataset& ds,
                             const std::vector<Label>& filter = {});

// Total weighted data loss sum_i (1 + alpha_i) * CE_i at the model's current
// parameters. No regularization term.
double weighted_loss(const LinearModel& model, const Dataset& ds,
                     const std::vector<double>* alpha);

// Gradient of weighted_loss, flattened as kNumLabels*dim weight entries
// followed by kNumLabels bias entries.
std::vector<double> weighted_loss_gradient(const LinearModel& model,
                                           const Dataset& ds,
                                           const std::vector<double>* alpha);

// Versioned little-endian binary format.
void save_model(const LinearModel& model, const std::string& path);
LinearModel load_model(const std::string& path);

}  // namespace claimbias
