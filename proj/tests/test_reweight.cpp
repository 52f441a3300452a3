#include <cmath>
#include <limits>

#include "claimbias/errors.hpp"
#include "claimbias/reweight.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace claimbias;

namespace {

// three SUPPORTS instances and one REFUTES instance sharing one bigram
Dataset three_one_corpus() {
  return to_dataset({{{"alpha", "beta"}, 0},
                     {{"alpha", "beta"}, 0},
                     {{"alpha", "beta"}, 0},
                     {{"alpha", "beta"}, 1}});
}

}  // namespace

TEST_CASE("build_vocabulary membership and flags") {
  SUBCASE("shared bigram across labels is balanceable") {
    const Dataset ds = to_dataset({{{"did", "not", "win"}, 1},
                                   {{"did", "not", "go"}, 0}});
    const Vocabulary v = build_vocabulary(ds, 2, 1);
    auto it = std::find(v.ngrams.begin(), v.ngrams.end(), "did not");
    REQUIRE(it != v.ngrams.end());
    const size_t j = static_cast<size_t>(it - v.ngrams.begin());
    CHECK(v.balanceable[j] == 1);
    CHECK(v.members[j] == std::vector<int32_t>{0, 1});
  }
  SUBCASE("single-class bigram is flagged unbalanceable") {
    const Dataset ds = to_dataset({{{"only", "here", "x"}, 0},
                                   {{"only", "here", "y"}, 0},
                                   {{"did", "not", "win"}, 1},
                                   {{"did", "not", "go"}, 0}});
    const Vocabulary v = build_vocabulary(ds, 2, 1);
    auto it = std::find(v.ngrams.begin(), v.ngrams.end(), "only here");
    REQUIRE(it != v.ngrams.end());
    CHECK(v.balanceable[static_cast<size_t>(it - v.ngrams.begin())] == 0);
    // flagged n-grams contribute nothing to the objective
    OptimizerConfig cfg;
    cfg.lambda = 0.0;
    const std::vector<double> zero(ds.size(), 0.0);
    const Vocabulary only_balanced = build_vocabulary(ds, 2, 1);
    double expected = 0.0;
    for (size_t j = 0; j < only_balanced.ngrams.size(); ++j)
      if (only_balanced.balanceable[j]) {
        double best = 0.0;
        for (int c = 0; c < kNumLabels; ++c)
          best = std::max(best, bias_toward_class(only_balanced, zero, j,
                                                  static_cast<Label>(c)));
        expected += best;
      }
    CHECK(objective(v, zero, cfg).total == doctest::Approx(expected));
  }
  SUBCASE("min_count filters and can empty the vocabulary") {
    const Dataset ds = to_dataset({{{"a", "b"}, 0}, {{"c", "d"}, 1},
                                   {{"a", "b"}, 1}});
    const Vocabulary v = build_vocabulary(ds, 2, 2);
    CHECK(v.ngrams == std::vector<NGram>{"a b"});
    CHECK_THROWS_AS(build_vocabulary(ds, 2, 3), DataError);
  }
}

TEST_CASE("bias_toward_class evaluates the weighted class fraction") {
  const Dataset ds = three_one_corpus();
  const Vocabulary v = build_vocabulary(ds, 2, 1);
  REQUIRE(v.ngrams.size() == 1);

  SUBCASE("alpha = 0 gives the empirical fraction") {
    const std::vector<double> zero(4, 0.0);
    CHECK(bias_toward_class(v, zero, 0, Label::Supports) == 0.75);
    CHECK(bias_toward_class(v, zero, 0, Label::Refutes) == 0.25);
  }
  SUBCASE("weight 2 on the minority instance balances the bigram") {
    const std::vector<double> alpha{0.0, 0.0, 0.0, 2.0};
    CHECK(bias_toward_class(v, alpha, 0, Label::Supports) == 0.5);
    CHECK(bias_toward_class(v, alpha, 0, Label::Refutes) == 0.5);
  }
  SUBCASE("a uniform shift leaves every bias unchanged") {
    Rng rng(3);
    for (int trial = 0; trial < 20; ++trial) {
      const auto tiny = random_tiny_corpus(rng, 20, 6);
      const Dataset rds = to_dataset(tiny);
      Vocabulary rv;
      try {
        rv = build_vocabulary(rds, 2, 1);
      } catch (const DataError&) {
        continue;
      }
      const double kappa = rng.unit_real() * 3.0;
      const std::vector<double> zero(rds.size(), 0.0);
      const std::vector<double> shifted(rds.size(), kappa);
      for (size_t j = 0; j < rv.ngrams.size(); ++j)
        for (int c = 0; c < kNumLabels; ++c) {
          const Label lc = static_cast<Label>(c);
          CHECK(std::abs(bias_toward_class(rv, zero, j, lc) -
                         bias_toward_class(rv, shifted, j, lc)) < 1e-12);
        }
    }
  }
}

TEST_CASE("bias values sum to one at random weights") {
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const Dataset ds = to_dataset(random_tiny_corpus(rng, 20, 5));
    Vocabulary v;
    try {
      v = build_vocabulary(ds, 2, 1);
    } catch (const DataError&) {
      continue;
    }
    std::vector<double> alpha(ds.size());
    for (double& a : alpha) a = rng.unit_real() * 4.0;
    for (size_t j = 0; j < v.ngrams.size(); ++j) {
      double sum = 0.0;
      for (int c = 0; c < kNumLabels; ++c)
        sum += bias_toward_class(v, alpha, j, static_cast<Label>(c));
      CHECK(std::abs(sum - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("objective evaluates max bias plus norm penalty") {
  SUBCASE("perfectly balanced corpus scores 0.5 per bigram") {
    const Dataset ds = to_dataset({{{"a", "b"}, 0}, {{"a", "b"}, 1},
                                   {{"c", "d"}, 0}, {{"c", "d"}, 1}});
    const Vocabulary v = build_vocabulary(ds, 2, 1);
    OptimizerConfig cfg;
    cfg.lambda = 3.7;  // irrelevant at alpha = 0
    const std::vector<double> zero(4, 0.0);
    CHECK(objective(v, zero, cfg).total == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("three-vs-one corpus") {
    const Dataset ds = three_one_corpus();
    const Vocabulary v = build_vocabulary(ds, 2, 1);
    OptimizerConfig cfg;
    cfg.lambda = 0.0;
    const std::vector<double> zero(4, 0.0);
    CHECK(objective(v, zero, cfg).total == 0.75);
    const std::vector<double> balanced{0.0, 0.0, 0.0, 2.0};
    CHECK(objective(v, balanced, cfg).total == 0.5);
  }
  SUBCASE("penalty term uses the Euclidean norm, not its square") {
    const Dataset ds = three_one_corpus();
    const Vocabulary v = build_vocabulary(ds, 2, 1);
    OptimizerConfig cfg;
    cfg.lambda = 2.0;
    const std::vector<double> alpha{3.0, 0.0, 4.0, 0.0};  // norm 5
    CHECK(objective(v, alpha, cfg).penalty == doctest::Approx(10.0));
    cfg.squared_penalty = true;
    CHECK(objective(v, alpha, cfg).penalty == doctest::Approx(50.0));
  }
}

TEST_CASE("optimize_alpha leaves an already uniform corpus at zero") {
  const Dataset ds = to_dataset({{{"a", "b"}, 0}, {{"a", "b"}, 1},
                                 {{"c", "d"}, 1}, {{"c", "d"}, 0}});
  OptimizerConfig cfg;
  cfg.n = 2;
  cfg.min_count = 1;
  cfg.lambda = 0.5;
  const OptimizeResult res = optimize_alpha(ds, cfg);
  for (double a : res.alpha) CHECK(a == 0.0);
  CHECK(res.final_objective == res.initial_objective);
}

TEST_CASE("optimize_alpha balances the three-vs-one corpus") {
  const Dataset ds = three_one_corpus();
  OptimizerConfig cfg;
  cfg.n = 2;
  cfg.min_count = 1;
  cfg.lambda = 1e-6;
  const OptimizeResult res = optimize_alpha(ds, cfg);
  const Vocabulary v = build_vocabulary(ds, 2, 1);
  double max_b = 0.0;
  for (int c = 0; c < kNumLabels; ++c)
    max_b = std::max(max_b,
                     bias_toward_class(v, res.alpha, 0, static_cast<Label>(c)));
  // analytic balance point: alpha = 2 on the minority instance, b -> 0.5
  CHECK(max_b <= 0.52);
  CHECK(res.alpha[3] > 1.7);
  CHECK(res.alpha[3] < 2.6);
  for (int i = 0; i < 3; ++i) CHECK(res.alpha[static_cast<size_t>(i)] < 0.3);
  CHECK(res.final_objective <= res.initial_objective);
}

TEST_CASE("the optimizer trace never increases") {
  Rng rng(29);
  for (int trial = 0; trial < 10; ++trial) {
    const Dataset ds = to_dataset(random_tiny_corpus(rng, 25, 5));
    OptimizerConfig cfg;
    cfg.n = 2;
    cfg.min_count = 1;
    cfg.lambda = 0.01;
    cfg.max_iters = 200;
    OptimizeResult res;
    try {
      res = optimize_alpha(ds, cfg);
    } catch (const DataError&) {
      continue;
    }
    for (size_t i = 1; i < res.trace.size(); ++i)
      CHECK(res.trace[i].objective <= res.trace[i - 1].objective);
    CHECK(res.final_objective <= res.initial_objective);
    for (double a : res.alpha) CHECK(a >= 0.0);
  }
}

TEST_CASE("optimize_alpha is bitwise deterministic") {
  Rng rng(31);
  const Dataset ds = to_dataset(random_tiny_corpus(rng, 30, 6));
  OptimizerConfig cfg;
  cfg.n = 2;
  cfg.min_count = 1;
  cfg.lambda = 0.05;
  cfg.max_iters = 300;
  const OptimizeResult a = optimize_alpha(ds, cfg);
  const OptimizeResult b = optimize_alpha(ds, cfg);
  CHECK(a.alpha == b.alpha);
  CHECK(a.final_objective == b.final_objective);
  CHECK(a.trace.size() == b.trace.size());
}

TEST_CASE("subgradient matches central differences where the max is strict") {
  Rng rng(37);
  int checked = 0;
  for (int trial = 0; trial < 60 && checked < 20; ++trial) {
    const Dataset ds = to_dataset(random_tiny_corpus(rng, 14, 5, 2, 5));
    Vocabulary v;
    try {
      v = build_vocabulary(ds, 2, 1);
    } catch (const DataError&) {
      continue;
    }
    OptimizerConfig cfg;
    cfg.lambda = 0.37;
    std::vector<double> alpha(ds.size());
    for (double& a : alpha) a = 0.1 + rng.unit_real() * 1.5;

    // require a strict max for every balanceable n-gram
    bool strict = true;
    for (size_t j = 0; j < v.ngrams.size() && strict; ++j) {
      if (!v.balanceable[j]) continue;
      std::array<double, kNumLabels> b{};
      for (int c = 0; c < kNumLabels; ++c)
        b[static_cast<size_t>(c)] = bias_toward_class(v, alpha, j, static_cast<Label>(c));
      std::sort(b.begin(), b.end());
      if (b[2] - b[1] < 1e-3) strict = false;
    }
    if (!strict) continue;
    ++checked;

    const std::vector<double> grad = objective_gradient(v, alpha, cfg);
    auto f = [&](const std::vector<double>& x) {
      return objective(v, x, cfg).total;
    };
    for (size_t i = 0; i < alpha.size(); ++i) {
      const double fd = oracle::central_diff(f, alpha, i, 1e-6);
      const double denom = std::max({std::abs(grad[i]), std::abs(fd), 1e-8});
      CHECK(std::abs(grad[i] - fd) / denom < 1e-5);
    }
  }
  CHECK(checked == 20);
}

TEST_CASE("a non-finite objective is a numerical error naming the iteration") {
  const Dataset ds = three_one_corpus();
  OptimizerConfig cfg;
  cfg.n = 2;
  cfg.min_count = 1;
  cfg.lambda = std::numeric_limits<double>::infinity();
  CHECK_THROWS_WITH_AS(optimize_alpha(ds, cfg), doctest::Contains("iteration"),
                       NumericError);
}

TEST_CASE("weighted statistics scale instance contributions") {
  SUBCASE("alpha = 0 reproduces the unweighted statistics") {
    Rng rng(41);
    const Dataset ds = to_dataset(random_tiny_corpus(rng, 20, 6));
    const std::vector<double> zero(ds.size(), 0.0);
    const NGramStats plain = count_statistics(ds, 2, Side::ClaimOnly);
    const NGramStats weighted = weighted_ngram_stats(ds, zero, 2);
    REQUIRE(plain.counts.size() == weighted.counts.size());
    CHECK(plain.total == weighted.total);
    for (const auto& [w, row] : plain.counts) {
      REQUIRE(weighted.contains(w));
      for (int l = 0; l < kNumLabels; ++l)
        CHECK(row[static_cast<size_t>(l)] ==
              weighted.counts.at(w)[static_cast<size_t>(l)]);
    }
  }
  SUBCASE("balancing weights flatten the three-vs-one bigram") {
    const Dataset ds = three_one_corpus();
    const std::vector<double> alpha{0.0, 0.0, 0.0, 2.0};
    const NGramStats weighted = weighted_ngram_stats(ds, alpha, 2);
    CHECK(p_label_given_ngram(weighted, "alpha beta", Label::Supports) == 0.5);
  }
}

TEST_CASE("weights files round-trip by id") {
  const Dataset ds = three_one_corpus();
  const std::vector<double> alpha{0.0, 0.125, 2.7182818284590452, 2.0};
  const std::string path = "/tmp/claimbias_weights_test.tsv";
  save_weights(path, ds, alpha);
  CHECK(load_weights(path, ds) == alpha);

  Dataset extra = ds;
  Instance inst;
  inst.id = "unseen";
  inst.claim = "x y";
  inst.label = Label::Supports;
  extra.instances.push_back(inst);
  CHECK_THROWS_WITH_AS(load_weights(path, extra), doctest::Contains("unseen"),
                       DataError);
}
